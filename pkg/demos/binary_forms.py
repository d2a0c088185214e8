"""Equivariant classes of binary forms with a multiple root.

Prints the class of octics with a triple root in two bases, checks the
closed pushforward formula against the symmetrization oracle on a few
tuples, and certifies that a class lies in the two-generator ideal.
"""

from chowm3 import binforms as bf

cls = bf.push_pi1_unit(3, 8)
print("octics with a triple root:")
print("  torus basis:", cls.value)
print("  GL2 basis:  ", bf.to_gl2_basis(cls))

for args in [(1, -1, 2, 4), (2, 0, 2, 6), (2, 1, 3, 7)]:
    same = bf.push_pi_closed(*args) == bf.push_pi_oracle(*args)
    print(f"closed formula vs oracle at (r,m,k,N)={args}: {'agree' if same else 'DIFFER'}")

cert, status, over_z = bf.certify_in_ideal(bf.gamma_class(0, 3, 8), 3, 8)
print(f"Gamma_0 at (3,8): member={cert.member}, replay={cert.replay()}, "
      f"status={status}, integral={over_z}")

print("sextics with a sixfold root, affine cone:", bf.affine_cone_class(6, 6))
