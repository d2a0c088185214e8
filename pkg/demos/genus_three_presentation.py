"""Walk through the fifteen relations, the elimination and the comparison.

Shows which printed relations needed a reading, eliminates three
generators, counts minimal relations by degree, and transports the result
to the other coordinate system.
"""

from chowm3 import chern, faber, m3bar

p = m3bar.load_presentation()
print(f"{len(p.relations)} relations, data checksum {p.checksum[:16]}...")
audit = m3bar.audit_degrees(p)
print("degree profile:", audit.witness["profile"])
print("printed relations needing a reading:", audit.witness["literal_flagged"])
print("readings in use:", p.assignment_id())
print("alias forcing:", {a: v["consistent"] for a, v in m3bar.alias_forcing(p).items()})

s = m3bar.rational_simplify(p)
for step in s.steps:
    print(f"eliminate {step.variable} via {step.relation}: "
          f"leading coefficient {step.coefficient}, primes {sorted(step.primes)}")
print("minimal relations by degree:", s.counts, "total", s.total)
print("Hilbert function:", list(s.hilbert))

maps = faber.build_maps()
image, counts = faber.faber_ideal(s, maps)
print("maps mutually inverse:", faber.verify_inverse(maps))
print("transported counts:", counts)

conv = chern.calibrate_lambda_convention((2, 3))
print("lambda convention:", conv.to_record())
for n in range(2, 5):
    print(f"  open class A_{n}:", chern.an_open_class(n, conv))
