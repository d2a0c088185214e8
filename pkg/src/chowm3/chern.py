"""Chern and Segre class calculus for GL2 and GL3 representations.

Classes are :class:`GradedPoly` values over the Chern classes c1, c2, c3 of
the standard representation, optionally extended by the hyperplane classes
h (of the space of plane quartics) and k (of the plane).  The module builds
the class of the locus of quartics with an A_n point at a marked point,
pushes it down along the plane bundle, and identifies the result with a
polynomial in the lambda classes once a sign convention has been calibrated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .gradedpoly import (
    GradedPoly,
    RingMap,
    VariableTable,
    denominator_primes,
    elementary_symmetric,
    parse,
    substitute,
)

ChernVector = GradedPoly

CHERN = VariableTable.of("c1 c2:2 c3:3")
CHERN2 = VariableTable.of("c1 c2:2")
BUNDLE = VariableTable.of("c1 c2:2 c3:3 h k")
LAMBDA = VariableTable.of("l1 l2:2 l3:3")


class UnsupportedRank(ValueError):
    pass


class CalibrationAmbiguous(RuntimeError):
    """Zero or several conventions reproduce the anchors."""

    def __init__(self, message, candidates):
        super().__init__(message)
        self.candidates = candidates


class UncalibratedConvention(RuntimeError):
    pass


# ---------------------------------------------------------------- symmetric functions


def _chern_table(rank):
    if rank == 3:
        return CHERN
    if rank == 2:
        return CHERN2
    raise UnsupportedRank(f"rank {rank} is not supported (use 2 or 3)")


def symmetric_to_chern(p: GradedPoly, rank: int) -> GradedPoly:
    """Rewrite a symmetric polynomial in roots x1..x_rank through c1..c_rank."""
    table = _chern_table(rank)
    roots = p.table
    es = elementary_symmetric_in_roots(roots)
    rest = dict(p.items())
    out = {}
    while rest:
        lead = max(rest)  # lex on roots
        if any(lead[i] < lead[i + 1] for i in range(rank - 1)):
            raise ValueError("polynomial is not symmetric in the roots")
        coeff = rest[lead]
        exps = tuple(lead[i] - lead[i + 1] for i in range(rank - 1)) + (lead[rank - 1],)
        out[exps] = out.get(exps, 0) + coeff
        term = GradedPoly.constant(roots, coeff)
        for e, sigma in zip(exps, es):
            term = term * sigma ** e
        for m, c in term.items():
            s = rest.get(m, 0) - c
            if s:
                rest[m] = s
            else:
                rest.pop(m, None)
    return GradedPoly(table, out)


def root_table(rank: int) -> VariableTable:
    return VariableTable.of([f"x{i}" for i in range(1, rank + 1)])


def elementary_symmetric_in_roots(roots: VariableTable):
    xs = [GradedPoly.var(roots, n) for n in roots.names]
    return [elementary_symmetric(j, xs) for j in range(1, len(xs) + 1)]


def sym_dual_chern(d: int, rank: int) -> ChernVector:
    """Total Chern class of Sym^d of the dual of the standard representation."""
    if d < 0 or d > 8:
        raise ValueError("degree must lie in 0..8")
    roots = root_table(rank)
    _chern_table(rank)
    xs = [GradedPoly.var(roots, n) for n in roots.names]
    total = GradedPoly.constant(roots, 1)
    for a in itertools.product(range(d + 1), repeat=rank):
        if sum(a) != d:
            continue
        weight = GradedPoly.zero(roots)
        for e, x in zip(a, xs):
            weight = weight - x * e
        total = total * (1 + weight)
    return symmetric_to_chern(total, rank)


# ---------------------------------------------------------------- bundles


@dataclass(frozen=True)
class BundleDescriptor:
    rank: int
    total: ChernVector

    def __post_init__(self):
        if self.total.coefficient(self.total.table.unit()) != 1:
            raise ValueError("total Chern class must have constant term 1")

    def chern(self, i: int) -> ChernVector:
        return self.total.homogeneous_part(i)

    @classmethod
    def standard(cls, rank: int = 3) -> "BundleDescriptor":
        table = _chern_table(rank)
        total = GradedPoly.constant(table, 1)
        for n in table.names:
            total = total + GradedPoly.var(table, n)
        return cls(rank, total)

    @classmethod
    def dual(cls, rank: int = 3) -> "BundleDescriptor":
        table = _chern_table(rank)
        total = GradedPoly.constant(table, 1)
        for i, n in enumerate(table.names, start=1):
            total = total + GradedPoly.var(table, n) * (-1) ** i
        return cls(rank, total)

    @classmethod
    def trivial(cls, rank: int = 3) -> "BundleDescriptor":
        return cls(rank, GradedPoly.constant(_chern_table(rank), 1))


def segre(b: BundleDescriptor, upto: int) -> list:
    """s_0..s_upto with c(E) * s(E) = 1."""
    if upto < 0:
        raise ValueError("upto must be non-negative")
    table = b.total.table
    s = [GradedPoly.constant(table, 1)]
    for i in range(1, upto + 1):
        acc = GradedPoly.zero(table)
        for j in range(1, i + 1):
            acc = acc - b.chern(j) * s[i - j]
        s.append(acc)
    return s


def _lift(p: GradedPoly) -> GradedPoly:
    return p if p.table == BUNDLE else p.restrict_table(BUNDLE)


def projbundle_pushforward(p: ChernVector, fiber: BundleDescriptor) -> ChernVector:
    """Integrate over the plane bundle whose hyperplane class is k.

    k satisfies k^3 + e1 k^2 + e2 k + e3 = 0 with e_i the Chern classes of
    ``fiber``; after reducing below k^3 the coefficient of k^2 is the image.
    """
    if fiber.rank != 3:
        raise UnsupportedRank("the fiber must be a rank 3 bundle")
    p = _lift(p)
    e = [_lift(fiber.chern(i)) for i in (1, 2, 3)]
    coeffs = p.coefficients_in("k")
    while coeffs and max(coeffs) >= 3:
        j = max(coeffs)
        c = coeffs.pop(j)
        for i, ei in enumerate(e, start=1):
            coeffs[j - i] = coeffs.get(j - i, GradedPoly.zero(BUNDLE)) - c * ei
    return coeffs.get(2, GradedPoly.zero(BUNDLE))


def pushforward_by_segre(p: ChernVector, fiber: BundleDescriptor) -> ChernVector:
    """Same integral through pi_*(k^(2+i)) = s_i(fiber)."""
    p = _lift(p)
    coeffs = p.coefficients_in("k")
    top = max(coeffs, default=0)
    s = [_lift(x) for x in segre(fiber, max(top - 2, 0))]
    out = GradedPoly.zero(BUNDLE)
    for j, c in coeffs.items():
        if j >= 2:
            out = out + c * s[j - 2]
    return out


# ---------------------------------------------------------------- the A_n loci


def _b(text):
    return parse(text, BUNDLE)


def x2_class() -> ChernVector:
    """Class of quartics with a non-nodal double point at the marked point."""
    return _b("2*(h+k-c1)*(h+4*k)*((h+3*k)^2 - (c1+k)*(h+2*k) + c2)")


def c_factor(m: int) -> ChernVector:
    """Class of the hypersurface killing the x^m coefficient after reduction."""
    return _b(f"-{m}*c1 + {2 * m - 1}/2*h + {4 - m}*k")


def xn_class(n: int) -> ChernVector:
    if not 2 <= n <= 7:
        raise ValueError("n must lie in 2..7")
    out = x2_class()
    for m in range(3, n + 1):
        out = out * c_factor(m)
    return out


@dataclass(frozen=True)
class LambdaConvention:
    """How the plane bundle and the lambda classes relate to c1, c2, c3.

    ``fiber`` is ``"standard"`` or ``"dual"`` (the Chern classes entering the
    relation for k); ``lambda_dual`` says lambda_i = (-1)^i c_i instead of c_i.
    """

    fiber: str
    lambda_dual: bool

    def fiber_bundle(self) -> BundleDescriptor:
        return BundleDescriptor.standard() if self.fiber == "standard" else BundleDescriptor.dual()

    def to_lambda(self, p: ChernVector) -> GradedPoly:
        sign = -1 if self.lambda_dual else 1
        images = {"c1": f"{sign}*l1", "c2": "l2", "c3": f"{sign}*l3"}
        return substitute(p.restrict_table(CHERN), RingMap.build(CHERN, LAMBDA, images))

    def to_record(self) -> dict:
        return {"fiber": self.fiber, "lambda_dual": self.lambda_dual}


CONVENTIONS = tuple(
    LambdaConvention(f, d) for f in ("standard", "dual") for d in (False, True)
)

# H-free, boundary-free parts of the stratum relations, in lambda classes
OPEN_ANCHORS = {
    2: "24*(l1^2 - 2*l2)",
    3: "36*l1^3 - 92*l1*l2 + 56*l3",
    4: "36*l1^4 - 92*l1^2*l2 + 56*l1*l3",
}


def raw_open_class(n: int, convention: LambdaConvention) -> ChernVector:
    """Pushforward of [X_n] with h set to c1, in c1, c2, c3."""
    pushed = projbundle_pushforward(xn_class(n), convention.fiber_bundle())
    m = RingMap.build(
        BUNDLE, CHERN, {"c1": "c1", "c2": "c2", "c3": "c3", "h": "c1", "k": "0"}
    )
    if "k" in pushed.variables():
        raise AssertionError("pushforward left a k")
    return substitute(pushed, m)


_calibrated = {}


def calibrate_lambda_convention(anchors=(2,)) -> LambdaConvention:
    """The unique convention reproducing the listed anchor classes.

    ``anchors`` are keys of OPEN_ANCHORS.  The result is stored and returned
    again on later calls with the same anchors.  Raises CalibrationAmbiguous
    when zero or several conventions survive.
    """
    anchors = tuple(sorted(anchors))
    if anchors in _calibrated:
        return _calibrated[anchors]
    good = []
    for conv in CONVENTIONS:
        if all(
            conv.to_lambda(raw_open_class(n, conv)) == parse(OPEN_ANCHORS[n], LAMBDA)
            for n in anchors
        ):
            good.append(conv)
    if len(good) != 1:
        raise CalibrationAmbiguous(
            f"{len(good)} conventions reproduce anchors {list(anchors)}", good
        )
    _calibrated[anchors] = good[0]
    return good[0]


def calibration_survivors(anchors=(2,)) -> list:
    """All conventions reproducing the anchors, without raising."""
    try:
        return [calibrate_lambda_convention(anchors)]
    except CalibrationAmbiguous as exc:
        return list(exc.candidates)


def current_convention() -> LambdaConvention:
    """The convention from the most specific successful calibration."""
    if not _calibrated:
        raise UncalibratedConvention("run calibrate_lambda_convention first")
    return _calibrated[max(_calibrated, key=len)]


def an_open_class(n: int, convention: LambdaConvention = None) -> GradedPoly:
    """Class of the A_n locus on the open stratum of smooth plane quartics.

    Expressed in l1, l2, l3.  Uses the calibrated convention unless one is
    passed explicitly.
    """
    convention = convention or current_convention()
    out = convention.to_lambda(raw_open_class(n, convention))
    bad = denominator_primes(out) - {2, 3}
    if bad:
        raise ArithmeticError(f"unexpected denominator primes {sorted(bad)}")
    return out


def reset_calibration():
    _calibrated.clear()
