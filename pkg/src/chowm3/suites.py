"""Groups of checks run by the command line and the acceptance tests.

Every function returns a list of :class:`VerificationReport`.  Nothing here
prints or writes files.
"""

from __future__ import annotations

import time

from . import __version__
from . import binforms as bf
from . import chern, faber, m3bar
from .gradedpoly import format_poly, parse
from .ideals import BudgetExceeded, eliminate, hilbert_function, ideal_equal
from .report import FAIL, INCONCLUSIVE, PASS, VerificationReport, status_of

TWO_GENERATOR_CASES = ((2, 4), (2, 5), (2, 6), (3, 6), (3, 8), (4, 8))
SQUARE_H_CASES = ((3, 8), (4, 8))


def _report(module, check, anchor, ok, witness, start):
    status = ok if isinstance(ok, str) else status_of(ok)
    return VerificationReport(check, module, anchor, status, witness, time.perf_counter() - start)


# ---------------------------------------------------------------- binary forms


def oracle_sweep(max_N: int = 8) -> VerificationReport:
    start = time.perf_counter()
    per = {}
    for r, m, k, N in bf.pushforward_parameters(max_N):
        same = bf.push_pi_closed(r, m, k, N) == bf.push_pi_oracle(r, m, k, N)
        per[f"({r},{m},{k},{N})"] = "agree" if same else "differ"
    ok = all(v == "agree" for v in per.values())
    return _report(
        "binforms", "oracle_sweep", "closed pushforward formula against upstairs expansion",
        ok, {"max_N": max_N, "cases": len(per), "per_case": per}, start,
    )


def multiplicity_calibration(max_N: int = 6) -> VerificationReport:
    start = time.perf_counter()
    found = bf.calibrate_multiplicity(max_N)
    return _report(
        "binforms", "multiplicity_calibration", "symmetrization multiplicity of the oracle",
        found == bf.MULTIPLICITY, {"calibrated": found, "frozen": bf.MULTIPLICITY}, start,
    )


def small_diagonal(max_k: int = 8) -> VerificationReport:
    start = time.perf_counter()
    per = {k: bf.delta_small_diagonal(k) == bf.delta_product_form(k) for k in range(2, max_k + 1)}
    return _report(
        "binforms", "small_diagonal", "small diagonal class as a product of diagonals",
        all(per.values()), {"per_k": per}, start,
    )


def combinatorial_identities(max_N: int = 12, max_k2: int = 6, max_r2: int = 4) -> VerificationReport:
    start = time.perf_counter()
    bad = []
    count = 0
    for N in range(1, max_N + 1):
        for k in range(1, N + 1):
            for m in range(0, N + 1):
                count += 1
                if not bf.check_comb(k, m, N):
                    bad.append(f"comb(k={k},m={m},N={N})")
    for k in range(1, max_k2 + 1):
        for r in range(1, max_r2 + 1):
            for l in range(0, k):
                count += 1
                if not bf.check_comb2(k, r, l):
                    bad.append(f"comb2(k={k},r={r},l={l})")
    return _report(
        "binforms", "binomial_identities", "alternating binomial sums and composition counts",
        not bad, {"cases": count, "failures": bad}, start,
    )


def square_power(max_m: int = 8, N: int = 16) -> VerificationReport:
    start = time.perf_counter()
    per = {}
    for m in range(0, max_m + 1):
        for n in range(0, m + 1):
            per[f"(n={n},m={m})"] = bf.check_square_power(n, m, N)
    return _report(
        "binforms", "square_power", "products of squared hyperplane classes",
        all(per.values()), {"N": N, "per_case": per}, start,
    )


def two_generators(max_N: int = 8) -> list:
    return [bf.verify_two_generator_theorem(k, N) for k, N in TWO_GENERATOR_CASES if N <= max_N]


def square_h(max_N: int = 8) -> list:
    out = []
    for k, N in SQUARE_H_CASES:
        if N <= max_N:
            out.extend(bf.check_square_h(t, k, N) for t in range(k))
    return out


def affine_cone() -> VerificationReport:
    start = time.perf_counter()
    convention = bf.calibrate_cone_convention()
    value = bf.affine_cone_class(6, 6, convention)
    target = parse(bf.AFFINE_ANCHORS[6], bf.AFFINE_TABLE)
    return _report(
        "binforms", "affine_cone", "sextics with a sixfold root, affine class",
        convention == bf.CONE_CONVENTION and value == target,
        {
            "convention": {"twist": convention.twist, "sign": convention.sign},
            "value": str(value),
            "gl2": str(bf.to_gl2_basis(value)),
            "expected": str(target),
        },
        start,
    )


def appendix(max_N: int = 8) -> list:
    return [
        oracle_sweep(max_N),
        multiplicity_calibration(min(max_N, 6)),
        small_diagonal(),
        combinatorial_identities(),
        square_power(),
        *two_generators(max_N),
        *square_h(max_N),
        affine_cone(),
    ]


# ---------------------------------------------------------------- presentation


def presentation(variants: str = "search", degree_bound: int = 6):
    """Reports plus the presentation whose readings are used downstream.

    With ``variants="search"`` an unresolved search falls back to the
    declared defaults, so later checks still run; the failure stays in the
    variant report.
    """
    start = time.perf_counter()
    p = m3bar.load_presentation()
    reports = []
    forcing = m3bar.alias_forcing(p)
    reports.append(_report(
        "m3bar", "alias_forcing", "printed boundary names resolved by degree",
        all(v["forced"] for v in forcing.values()), forcing, start,
    ))
    if variants == "search":
        try:
            p, rep = m3bar.resolve_variants(p, degree_bound)
        except m3bar.UnresolvedPresentation as exc:
            rep = exc.report
            rep.witness["used_downstream"] = p.assignment_id()
        reports.append(rep)
    elif variants.startswith("fixed:"):
        assignment = m3bar.parse_assignment(variants[len("fixed:"):])
        p = m3bar.with_assignment(p, assignment)
        reports.append(_report(
            "m3bar", "variant_search", "readings of the flagged relations fixed by the caller",
            True, {"fixed": p.assignment_id()}, start,
        ))
    else:
        raise ValueError(f"variants must be 'search' or 'fixed:<id>', got {variants!r}")
    reports.append(m3bar.audit_degrees(p))
    return reports, p


def simplification(p, degree_bound: int = 6, budget: int = None):
    start = time.perf_counter()
    reports = []
    s = m3bar.rational_simplify(p, maxdeg=degree_bound)

    q, steps, ok = p, [], True
    for rel, var in m3bar.ELIMINATIONS:
        q2, step = m3bar.eliminate_generator(q, rel, var)
        zero = m3bar.check_step(q, step)
        ok &= zero
        steps.append({
            "relation": rel, "variable": var, "coefficient": step.coefficient,
            "substitution": format_poly(step.substitution), "primes": sorted(step.primes),
            "relation_vanishes": zero,
        })
        q = q2
    primes = [set(st["primes"]) for st in steps]
    ok &= primes[0] == {2, 3} and primes[1] == {2, 3} and 7 in primes[2]
    reports.append(_report(
        "m3bar", "elimination_steps", "three generators solved away after inverting 2, 3, 7",
        ok, {"steps": steps, "generators_left": list(s.table.names)}, start,
    ))

    start = time.perf_counter()
    before = hilbert_function(p.polys(), degree_bound, p.table)
    reports.append(_report(
        "m3bar", "elimination_hilbert", "quotient dimensions unchanged by elimination",
        before == list(s.hilbert), {"before": before, "after": list(s.hilbert)}, start,
    ))

    start = time.perf_counter()
    reports.append(_report(
        "m3bar", "minimal_relations", "four generators and nine relations",
        s.total == m3bar.EXPECTED_MINIMAL_TOTAL,
        {
            "counts": s.counts, "total": s.total, "expected_total": m3bar.EXPECTED_MINIMAL_TOTAL,
            "minimal": list(s.minimal), "hilbert": list(s.hilbert),
            "relations": {n: format_poly(x) for n, x in s.relations},
        },
        start,
    ))

    start = time.perf_counter()
    reports.append(_report(
        "m3bar", "pull_back", "simplified relations with eliminators generate the original ideal",
        m3bar.same_ideal_after_elimination(p, s), {"assignment": p.assignment_id()}, start,
    ))

    start = time.perf_counter()
    alt_order = (("d1c", "d111"), ("A2", "l2"), ("A3", "l3"))
    alt = m3bar.rational_simplify(p, alt_order, degree_bound)
    reports.append(_report(
        "m3bar", "alternative_order", "elimination order does not change the ideal",
        ideal_equal(alt.polys(), s.polys()),
        {"order": [v for _, v in alt_order]}, start,
    ))

    start = time.perf_counter()
    try:
        gb_part = eliminate(p.polys(), ["l2", "d111", "l3"], budget=budget)
    except BudgetExceeded as exc:
        reports.append(_report(
            "m3bar", "groebner_elimination", "elimination ideal by a block-order basis",
            INCONCLUSIVE, {"budget": budget, "steps": exc.steps}, start,
        ))
    else:
        same = ideal_equal([g.restrict_table(s.table) for g in gb_part], s.polys())
        reports.append(_report(
            "m3bar", "groebner_elimination", "elimination ideal by a block-order basis",
            same, {"basis_size": len(gb_part)}, start,
        ))
    return reports, s


def faber_comparison(s, degree_bound: int = 6):
    start = time.perf_counter()
    maps = faber.build_maps()
    reports = [_report(
        "faber", "inverse_maps", "coordinate changes are mutually inverse",
        faber.verify_inverse(maps),
        {
            "phi": {n: format_poly(v) for n, v in maps.phi.assignment},
            "psi": {n: format_poly(v) for n, v in maps.psi.assignment},
        },
        start,
    )]
    start = time.perf_counter()
    image, counts = faber.faber_ideal(s, maps, degree_bound)
    reports.append(_report(
        "faber", "transported_counts", "three cubic and six quartic relations",
        counts == m3bar.FABER_COUNTS,
        {"counts": counts, "expected": m3bar.FABER_COUNTS,
         "transported": [format_poly(x) for x in image]},
        start,
    ))
    start = time.perf_counter()
    same, a, b = faber.hilbert_agreement(s.polys(), image, degree_bound)
    reports.append(_report(
        "faber", "hilbert_agreement", "quotients have equal dimensions",
        same, {"ours": a, "transported": b}, start,
    ))
    start = time.perf_counter()
    reports.append(_report(
        "faber", "round_trip", "transported ideal maps back onto the original",
        faber.round_trip_equal(s.polys(), image, maps), {}, start,
    ))
    return reports


# ---------------------------------------------------------------- classes


def lambda_calibration() -> tuple:
    """The cusp-only calibration report and the convention used for the rest."""
    start = time.perf_counter()
    survivors = chern.calibration_survivors((2,))
    tie_break = chern.calibrate_lambda_convention((2, 3))
    rep = _report(
        "chern", "lambda_calibration", "cusp class fixes the lambda sign convention",
        len(survivors) == 1,
        {
            "survivors_with_cusp_anchor": [c.to_record() for c in survivors],
            "with_tacnode_anchor": tie_break.to_record(),
        },
        start,
    )
    return rep, tie_break


def open_classes(convention=None) -> list:
    reports = []
    if convention is None:
        rep, convention = lambda_calibration()
        reports.append(rep)
    p = m3bar.load_presentation()
    for n, name in ((2, "A2"), (3, "A3"), (4, "A4")):
        start = time.perf_counter()
        value = chern.an_open_class(n, convention)
        target = parse(chern.OPEN_ANCHORS[n], chern.LAMBDA)
        restricted = m3bar.restrict_open_stratum(p.relation(name))
        witness = {"value": str(value), "expected": str(target), "relation_restricted": str(restricted)}
        if value != target and not value.is_zero():
            ratio = _ratio(target, value)
            if ratio is not None:
                witness["expected_over_value"] = ratio
        reports.append(_report(
            "chern", f"open_class(n={n})", "singular-point locus on smooth plane quartics",
            value == target and restricted == target, witness, start,
        ))
    start = time.perf_counter()
    emitted = {n: str(chern.an_open_class(n, convention)) for n in range(2, 8)}
    reports.append(_report(
        "chern", "emitted_classes", "open classes for inspection (n = 2..7)",
        True, {"convention": convention.to_record(), "classes": emitted}, start,
    ))
    return reports


def _ratio(a, b):
    """a / b when a is a constant multiple of b, else None."""
    m = next(iter(b.terms))
    r = a.coefficient(m) / b.coefficient(m)
    return r if a == b * r else None


def affine_classes(N: int = 6) -> VerificationReport:
    start = time.perf_counter()
    out = {}
    for k in range(2, N + 1):
        out[k] = str(bf.to_gl2_basis(bf.affine_cone_class(k, N)))
    return _report(
        "binforms", f"affine_classes(N={N})", "affine multiple-root classes in Chern classes",
        True, {"classes": out}, start,
    )


def classes() -> list:
    return [*open_classes(), affine_classes()]


# ---------------------------------------------------------------- context


def context_record() -> dict:
    """Calibration choices and data identity, written ahead of the reports."""
    convs = chern.calibration_survivors((2, 3))
    return {
        "context": {
            "version": __version__,
            "relation_data_sha256": m3bar.load_presentation().checksum,
            "oracle_multiplicity": bf.MULTIPLICITY,
            "cone_convention": {"twist": bf.CONE_CONVENTION.twist, "sign": bf.CONE_CONVENTION.sign},
            "lambda_convention": [c.to_record() for c in convs],
        }
    }


__all__ = [
    "appendix", "presentation", "simplification", "faber_comparison", "classes",
    "context_record", "PASS", "FAIL", "INCONCLUSIVE",
]
