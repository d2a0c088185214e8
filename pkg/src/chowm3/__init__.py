"""Exact computations for the rational Chow ring of stable genus 3 curves.

Submodules:

* ``gradedpoly`` weighted polynomials over Q, ring maps, parsing
* ``ideals`` Groebner bases, membership certificates, graded counts
* ``binforms`` torus-equivariant classes of binary forms with multiple roots
* ``chern`` Chern class calculus and classes of singular plane quartics
* ``m3bar`` the fifteen-relation presentation and its simplification
* ``faber`` change of generators to lambda, delta_0, delta_1, kappa_2
* ``cli`` the ``python -m chowm3`` command line
"""

__version__ = "0.1.0"
