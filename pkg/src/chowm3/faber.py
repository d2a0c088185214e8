"""Change of generators between two presentations of the same ring.

One side uses l1, H, d1, d11; the other uses l1, d0, d1, k2 (d0 the
irreducible boundary divisor, k2 the second kappa class).  The two sides are
related by H = 9*l1 - 3*d1 - d0 and by an expression of d11 through k2.
:func:`build_maps` writes down the forward map and obtains the inverse by
solving those two identities.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gradedpoly import GradedPoly, RingMap, VariableTable, parse, substitute
from .ideals import hilbert_function, ideal_equal, minimal_generators_by_degree

OURS = VariableTable.of("l1 H d1 d11:2")
FABER = VariableTable.of("l1 d0 d1 k2:2")

# identities expressing our generators in the other coordinates
IDENTITIES = {
    "H": ("d0", "9*l1 - 3*d1 - d0"),
    "d11": ("k2", "-5*l1^2 + 1/2*l1*d0 + l1*d1 + 1/2*d1^2 + 1/2*k2"),
}


@dataclass(frozen=True)
class CoordinateChange:
    phi: RingMap  # OURS -> FABER
    psi: RingMap  # FABER -> OURS


def _solve_linear(poly: GradedPoly, var: str) -> GradedPoly:
    """Split poly = c*var + rest with c constant; returns (rest, c)."""
    parts = poly.coefficients_in(var)
    if set(parts) != {0, 1} and set(parts) != {1}:
        raise ValueError(f"identity is not linear in {var}")
    lead = parts[1]
    if lead.variables():
        raise ValueError(f"coefficient of {var} is not constant")
    return parts.get(0, GradedPoly.zero(poly.table)), lead.coefficient(lead.table.unit())


def build_maps() -> CoordinateChange:
    phi_images = {"l1": "l1", "d1": "d1"}
    for ours, (_, text) in IDENTITIES.items():
        phi_images[ours] = text
    phi = RingMap.build(OURS, FABER, phi_images)

    # solve each identity ours = rest + c*theirs for theirs, in order, so the
    # later solution can use the earlier one
    mixed = VariableTable.of("l1 H d1 d11:2 d0 k2:2")
    solved = {}
    for ours, (theirs, text) in IDENTITIES.items():
        rest, c = _solve_linear(parse(text, mixed), theirs)
        value = (GradedPoly.var(mixed, ours) - rest) / c
        images = {n: n for n in mixed.names}
        images.update({k: v for k, v in solved.items()})
        value = substitute(value, RingMap.build(mixed, mixed, images))
        solved[theirs] = value
    psi_images = {"l1": "l1", "d1": "d1"}
    for theirs, value in solved.items():
        psi_images[theirs] = value.restrict_table(OURS)
    psi = RingMap.build(FABER, OURS, psi_images)
    return CoordinateChange(phi, psi)


def verify_inverse(c: CoordinateChange) -> bool:
    """Both composites are the identity on generators, and both maps keep degrees."""
    for name in OURS.names:
        x = GradedPoly.var(OURS, name)
        if substitute(substitute(x, c.phi), c.psi) != x:
            return False
    for name in FABER.names:
        y = GradedPoly.var(FABER, name)
        if substitute(substitute(y, c.psi), c.phi) != y:
            return False
    return c.phi.preserves_grading() and c.psi.preserves_grading()


def transport(polys, m: RingMap) -> list:
    return [substitute(p, m) for p in polys]


def faber_ideal(simplified, maps: CoordinateChange = None, maxdeg: int = 6):
    """Image of the simplified ideal and its minimal generator counts by degree.

    ``simplified`` is a SimplifiedIdeal or a list of polynomials over l1, H,
    d1, d11.
    """
    maps = maps or build_maps()
    polys = simplified.polys() if hasattr(simplified, "polys") else list(simplified)
    polys = [p.restrict_table(OURS) for p in polys if not p.is_zero()]
    image = transport(polys, maps.phi)
    return image, minimal_generators_by_degree(image, maxdeg)


def round_trip_equal(polys, image, maps: CoordinateChange) -> bool:
    """The transported ideal maps back onto the original one."""
    polys = [p.restrict_table(OURS) for p in polys]
    return ideal_equal(polys, transport(image, maps.psi))


def hilbert_agreement(polys, image, maxdeg: int = 6):
    a = hilbert_function([p.restrict_table(OURS) for p in polys], maxdeg, OURS)
    b = hilbert_function(image, maxdeg, FABER)
    return a == b, a, b
