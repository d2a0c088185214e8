"""Ideals in polynomial rings over Q.

Buchberger's algorithm with cofactor tracking, normal forms, replayable
membership certificates, elimination, and degree-by-degree linear algebra
for homogeneous ideals (minimal generator counts, Hilbert functions,
membership in a fixed degree).

All polynomials handed in are :class:`GradedPoly` over one shared table.
Internally the engine works on plain ``{monomial: Fraction}`` dicts.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .gradedpoly import (
    GradedPoly,
    VariableTable,
    denominator_primes,
    is_homogeneous,
    parse,
    weighted_degree,
)
from .linalg import EchelonBasis, NoIntegerSolution, solve_integer


class BudgetExceeded(RuntimeError):
    """A computation ran past its configured step budget."""

    def __init__(self, message, steps):
        super().__init__(message)
        self.steps = steps


class InhomogeneousInput(ValueError):
    pass


# ---------------------------------------------------------------- orders


class MonomialOrder:
    """A monomial order on the exponent tuples of a table.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  Graded kinds compare
    weighted degree first.  A block order compares the ``front`` variables by
    weighted grevlex and breaks ties by weighted grevlex on the rest, so
    every monomial involving the front block beats every monomial free of it.
    """

    def __init__(self, table: VariableTable, kind: str = "grevlex", front: Iterable[str] = ()):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        front = tuple(front)
        if kind == "block" and not front:
            raise ValueError("block order needs a nonempty front block")
        if kind != "block" and front:
            raise ValueError("front block only applies to block orders")
        self.table = table
        self.kind = kind
        self.front = front
        self.key = self._make_key()

    @classmethod
    def grevlex(cls, table):
        return cls(table, "grevlex")

    @classmethod
    def lex(cls, table):
        return cls(table, "lex")

    @classmethod
    def block(cls, table, front):
        return cls(table, "block", front)

    def _make_key(self):
        w = self.table.weights
        if self.kind == "lex":
            return lambda m: m
        if self.kind == "grevlex":
            def key(m):
                return (sum(e * x for e, x in zip(m, w)), tuple(-e for e in reversed(m)))
            return lru_cache(maxsize=None)(key)
        fi = [self.table.index(n) for n in self.front]
        ri = [i for i in range(len(w)) if i not in fi]

        def key(m):
            a = [m[i] for i in fi]
            b = [m[i] for i in ri]
            return (
                sum(m[i] * w[i] for i in fi),
                tuple(-e for e in reversed(a)),
                sum(m[i] * w[i] for i in ri),
                tuple(-e for e in reversed(b)),
            )

        return lru_cache(maxsize=None)(key)

    def leading(self, poly: dict):
        return max(poly, key=self.key)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and (self.table, self.kind, self.front) == (other.table, other.kind, other.front)
        )

    def __hash__(self):
        return hash((self.table, self.kind, self.front))

    def __repr__(self):
        extra = f", front={self.front}" if self.front else ""
        return f"MonomialOrder({self.kind}{extra})"


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _quot(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mul_term(poly: dict, mono, coeff) -> dict:
    return {tuple(x + y for x, y in zip(m, mono)): c * coeff for m, c in poly.items()}


def _add_into(target: dict, poly: dict, mono, coeff):
    for m, c in poly.items():
        k = tuple(x + y for x, y in zip(m, mono))
        s = target.get(k, 0) + c * coeff
        if s:
            target[k] = s
        else:
            target.pop(k, None)


# ---------------------------------------------------------------- engine


class _Element:
    """Basis element under construction: polynomial, lead, and representation."""

    __slots__ = ("poly", "lead", "rep")

    def __init__(self, poly, lead, rep):
        self.poly = poly
        self.lead = lead
        self.rep = rep  # list of dicts, one per input generator, or None


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.steps = 0

    def tick(self, n=1):
        self.steps += n
        if self.limit is not None and self.steps > self.limit:
            raise BudgetExceeded(f"step budget {self.limit} exhausted", self.steps)


def _reduce_full(poly, rep, basis, order, budget, track):
    """Fully reduce poly by the elements; returns (remainder, rep, quotients)."""
    key = order.key
    p = dict(poly)
    rep = [dict(r) for r in rep] if (track and rep is not None) else rep
    quotients = [dict() for _ in basis]
    rem = {}
    while p:
        lm = max(p, key=key)
        lc = p[lm]
        for j, g in enumerate(basis):
            if _divides(g.lead, lm):
                q = _quot(lm, g.lead)
                c = lc / g.poly[g.lead]
                _add_into(p, g.poly, q, -c)
                quotients[j][q] = quotients[j].get(q, 0) + c
                if track and rep is not None:
                    for i, gr in enumerate(g.rep):
                        _add_into(rep[i], gr, q, -c)
                budget.tick()
                break
        else:
            rem[lm] = lc
            del p[lm]
    return rem, rep, quotients


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis together with the generators it came from.

    ``representations[j][i]`` is the cofactor of input ``i`` in element ``j``
    when tracking was requested; empty tuple otherwise.
    """

    order: MonomialOrder
    elements: tuple
    input: tuple
    representations: tuple = ()
    steps: int = 0

    @property
    def table(self):
        return self.order.table

    def leading_monomials(self):
        return [self.order.leading(g.terms) for g in self.elements]

    def normal_form(self, p: GradedPoly) -> GradedPoly:
        return self.divide(p)[1]

    def divide(self, p: GradedPoly):
        """(quotients per basis element, remainder) under full reduction."""
        basis = [_Element(g.terms, self.order.leading(g.terms), None) for g in self.elements]
        rem, _, quots = _reduce_full(p.terms, None, basis, self.order, _Budget(None), False)
        table = self.table
        return [GradedPoly(table, q) for q in quots], GradedPoly(table, rem)

    def contains(self, p: GradedPoly) -> bool:
        return self.normal_form(p).is_zero()


def _monic(poly, rep, order):
    lead = order.leading(poly)
    inv = Fraction(1) / poly[lead]
    poly = {m: c * inv for m, c in poly.items()}
    if rep is not None:
        rep = [{m: c * inv for m, c in r.items()} for r in rep]
    return poly, lead, rep


def groebner_basis(
    gens: Sequence[GradedPoly],
    order: MonomialOrder = None,
    track: bool = False,
    budget: int = None,
) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are processed smallest lcm first, ties by index.  Product and
    chain criteria skip useless pairs.  With ``track`` every element keeps
    its expression in the inputs.  ``budget`` caps reduction steps.
    """
    gens = tuple(gens)
    if not gens:
        if order is None:
            raise ValueError("an order is required for an empty generator list")
        return GroebnerBasis(order, (), (), ())
    table = gens[0].table
    if any(g.table != table for g in gens):
        raise ValueError("generators live over different tables")
    order = order or MonomialOrder.grevlex(table)
    key = order.key
    meter = _Budget(budget)
    n_in = len(gens)

    basis: list[_Element] = []
    pairs = []
    counter = itertools.count()

    def add_element(poly, rep):
        poly, lead, rep = _monic(poly, rep, order)
        new = len(basis)
        basis.append(_Element(poly, lead, rep))
        for i in range(new):
            g = basis[i]
            if g is None:
                continue
            l = _lcm(g.lead, lead)
            heapq.heappush(pairs, (key(l), i, new, next(counter), l))

    for idx, g in enumerate(gens):
        if g.is_zero():
            continue
        rep = None
        if track:
            rep = [dict() for _ in range(n_in)]
            rep[idx] = {table.unit(): Fraction(1)}
        live = [b for b in basis if b is not None]
        rem, rep, _ = _reduce_full(g.terms, rep, live, order, meter, track)
        if rem:
            add_element(rem, rep)

    def chain_skip(i, j, l):
        # some third element whose lead divides lcm and whose pairs are done
        for t, g in enumerate(basis):
            if t in (i, j) or g is None:
                continue
            if _divides(g.lead, l) and (min(i, t), max(i, t)) in done and (min(j, t), max(j, t)) in done:
                return True
        return False

    done = set()
    while pairs:
        _, i, j, _, l = heapq.heappop(pairs)
        gi, gj = basis[i], basis[j]
        done.add((i, j))
        if all(a == 0 or b == 0 for a, b in zip(gi.lead, gj.lead)):
            continue  # coprime leads
        if chain_skip(i, j, l):
            continue
        qi, qj = _quot(l, gi.lead), _quot(l, gj.lead)
        s = _mul_term(gi.poly, qi, Fraction(1))
        _add_into(s, gj.poly, qj, Fraction(-1))
        rep = None
        if track:
            rep = [dict() for _ in range(n_in)]
            for t in range(n_in):
                _add_into(rep[t], gi.rep[t], qi, Fraction(1))
                _add_into(rep[t], gj.rep[t], qj, Fraction(-1))
        meter.tick()
        rem, rep, _ = _reduce_full(s, rep, basis_live(basis), order, meter, track)
        if rem:
            add_element(rem, rep)

    elements = _interreduce([b for b in basis if b is not None], order, meter, track)
    elements.sort(key=lambda e: key(e.lead))
    polys = tuple(GradedPoly(table, e.poly) for e in elements)
    reps = ()
    if track:
        reps = tuple(tuple(GradedPoly(table, r) for r in e.rep) for e in elements)
    return GroebnerBasis(order, polys, gens, reps, meter.steps)


def basis_live(basis):
    return [b for b in basis if b is not None]


def _interreduce(elements, order, meter, track):
    # drop elements whose lead is divisible by another lead, then tail-reduce
    keep = []
    for i, e in enumerate(elements):
        redundant = False
        for j, f in enumerate(elements):
            if i == j:
                continue
            if _divides(f.lead, e.lead) and (f.lead != e.lead or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(e)
    out = []
    for i, e in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        lead_term = {e.lead: e.poly[e.lead]}
        tail = {m: c for m, c in e.poly.items() if m != e.lead}
        rem, rep, _ = _reduce_full(tail, e.rep, others, order, meter, track)
        rem.update(lead_term)
        poly, lead, rep = _monic(rem, rep, order)
        out.append(_Element(poly, lead, rep))
    return out


def s_polynomial(f: GradedPoly, g: GradedPoly, order: MonomialOrder) -> GradedPoly:
    lf, lg = order.leading(f.terms), order.leading(g.terms)
    l = _lcm(lf, lg)
    s = _mul_term(f.terms, _quot(l, lf), Fraction(1) / f.terms[lf])
    _add_into(s, g.terms, _quot(l, lg), -Fraction(1) / g.terms[lg])
    return GradedPoly(f.table, s)


def buchberger_audit(gb: GroebnerBasis) -> bool:
    """Every S-polynomial of the basis has normal form zero."""
    els = gb.elements
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            if not gb.normal_form(s_polynomial(els[i], els[j], gb.order)).is_zero():
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    leads = gb.leading_monomials()
    for g, lead in zip(gb.elements, leads):
        if g.terms[lead] != 1:
            return False
        for m in g.terms:
            for other in leads:
                if other != lead and _divides(other, m):
                    return False
    return True


# ---------------------------------------------------------------- certificates


STATUS_Z6 = "certified-over-Z[1/6]"
STATUS_Q = "Q-only"
STATUS_FAIL = "fail"


@dataclass(frozen=True)
class MembershipCertificate:
    """Evidence that ``query`` is (or is not) in the ideal of ``generators``.

    The replay identity ``sum(c*g) + remainder == query`` holds exactly.
    """

    query: GradedPoly
    generators: tuple
    cofactors: tuple
    remainder: GradedPoly
    primes: frozenset = field(default=frozenset())

    @property
    def member(self) -> bool:
        return self.remainder.is_zero()

    @property
    def status(self) -> str:
        if not self.member:
            return STATUS_FAIL
        return STATUS_Z6 if self.primes <= {2, 3} else STATUS_Q

    def replay(self) -> bool:
        total = self.remainder
        for c, g in zip(self.cofactors, self.generators):
            total = total + c * g
        return len(self.cofactors) == len(self.generators) and total == self.query

    def to_text(self, name: str = "certificate", generator_names: Sequence[str] = None) -> str:
        names = list(generator_names or (f"g{i}" for i in range(len(self.generators))))
        lines = [
            f"certificate {name}",
            f"table {self.query.table}",
            f"member {'true' if self.member else 'false'}",
            "primes " + " ".join(str(p) for p in sorted(self.primes)),
            f"query {self.query}",
        ]
        for n, g, c in zip(names, self.generators, self.cofactors):
            lines.append(f"generator {n} = {g}")
            lines.append(f"cofactor {n} = {c}")
        lines.append(f"remainder {self.remainder}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MembershipCertificate":
        table = query = remainder = None
        gens, cofs = [], []
        for line in text.splitlines():
            head, _, rest = line.partition(" ")
            if head == "table":
                table = VariableTable.of(rest)
            elif head == "query":
                query = parse(rest, table)
            elif head == "generator":
                gens.append(parse(rest.split(" = ", 1)[1], table))
            elif head == "cofactor":
                cofs.append(parse(rest.split(" = ", 1)[1], table))
            elif head == "remainder":
                remainder = parse(rest, table)
        return cls(query, tuple(gens), tuple(cofs), remainder, denominator_primes(cofs))


def _certificate(query, gens, cofactors, remainder):
    return MembershipCertificate(
        query, tuple(gens), tuple(cofactors), remainder, denominator_primes(cofactors)
    )


def ideal_membership(
    p: GradedPoly,
    gens: Sequence[GradedPoly],
    order: MonomialOrder = None,
    method: str = "auto",
    budget: int = None,
) -> MembershipCertificate:
    """Decide membership of p in (gens) with a replayable certificate.

    ``method="linear"`` works degree by degree and needs homogeneous input;
    ``"groebner"`` runs Buchberger with tracking; ``"auto"`` picks linear
    when everything is homogeneous.
    """
    gens = [g for g in gens if not g.is_zero()]
    table = p.table
    if method == "auto":
        method = "linear" if _all_homogeneous([p, *gens]) else "groebner"
    if method == "linear":
        return _linear_membership(p, gens)
    if method != "groebner":
        raise ValueError(f"unknown method {method!r}")
    order = order or MonomialOrder.grevlex(table)
    if not gens:
        return _certificate(p, [], [], p)
    gb = groebner_basis(gens, order, track=True, budget=budget)
    quots, rem = gb.divide(p)
    cofactors = []
    for i in range(len(gens)):
        c = GradedPoly.zero(table)
        for q, rep in zip(quots, gb.representations):
            if not q.is_zero():
                c = c + q * rep[i]
        cofactors.append(c)
    return _certificate(p, gens, cofactors, rem)


def _all_homogeneous(polys):
    return all(q.is_zero() or is_homogeneous(q) for q in polys)


def _degree_multiples(gens, degree):
    """(generator index, monomial) pairs whose products have the given degree."""
    out = []
    for i, g in enumerate(gens):
        dg = weighted_degree(g)
        if dg <= degree:
            for m in g.table.monomials(degree - dg):
                out.append((i, m))
    return out


def _linear_membership(p, gens):
    table = p.table
    if not _all_homogeneous([p, *gens]):
        raise InhomogeneousInput("linear membership needs homogeneous polynomials")
    if p.is_zero():
        return _certificate(p, gens, [GradedPoly.zero(table)] * len(gens), p)
    d = weighted_degree(p)
    basis = EchelonBasis(key=MonomialOrder.grevlex(table).key, track=True)
    for tag in _degree_multiples(gens, d):
        i, m = tag
        basis.add(_mul_term(gens[i].terms, m, Fraction(1)), tag)
    rem, combo = basis.reduce(p.terms, {})
    if rem:
        # certificate of non-membership: remainder is the reduced residue
        return _certificate(p, gens, _collect(combo, gens, table), GradedPoly(table, rem))
    return _certificate(p, gens, _collect(combo, gens, table), GradedPoly.zero(table))


def _collect(combo, gens, table):
    parts = [dict() for _ in gens]
    for (i, m), c in combo.items():
        parts[i][m] = parts[i].get(m, 0) + c
    return [GradedPoly(table, t) for t in parts]


def integral_membership(
    p: GradedPoly, gens: Sequence[GradedPoly], invert: Sequence[int] = (), max_exponent: int = 12
) -> MembershipCertificate:
    """Membership over Z, or over Z[1/n] for n the product of ``invert``.

    Needs homogeneous input with integral generators.  Searches the smallest
    e with n^e * p in the Z-span of monomial multiples of the generators; the
    returned cofactors are those integers divided by n^e.  Raises
    NoIntegerSolution when no e up to ``max_exponent`` works.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not _all_homogeneous([p, *gens]):
        raise InhomogeneousInput("integral membership needs homogeneous polynomials")
    if not all(g.is_integral() for g in gens):
        raise ValueError("generators must have integer coefficients")
    table = p.table
    if p.is_zero():
        return _certificate(p, gens, [GradedPoly.zero(table)] * len(gens), p)
    d = weighted_degree(p)
    tags = _degree_multiples(gens, d)
    columns = [_mul_term(gens[i].terms, m, Fraction(1)) for i, m in tags]
    unit = 1
    for q in invert:
        unit *= q
    scale = 1
    last = None
    for _ in range(max_exponent + 1 if invert else 1):
        target = {m: c * scale for m, c in p.terms.items()}
        if all(c.denominator == 1 for c in target.values()):
            try:
                x = solve_integer(columns, target)
            except NoIntegerSolution as exc:
                last = exc
            else:
                combo = {}
                for tag, v in zip(tags, x):
                    if v:
                        combo[tag] = Fraction(v, scale)
                return _certificate(p, gens, _collect(combo, gens, table), GradedPoly.zero(table))
        scale *= unit
    raise last or NoIntegerSolution("no integral certificate found")


def ideal_equal(
    a: Sequence[GradedPoly], b: Sequence[GradedPoly], order: MonomialOrder = None, budget: int = None
) -> bool:
    """Whether (a) == (b), by mutual membership."""
    a = [g for g in a if not g.is_zero()]
    b = [g for g in b if not g.is_zero()]
    if not a or not b:
        return not a and not b
    table = a[0].table
    order = order or MonomialOrder.grevlex(table)
    if _all_homogeneous(a + b):
        return all(_linear_membership(g, b).member for g in a) and all(
            _linear_membership(g, a).member for g in b
        )
    ga = groebner_basis(a, order, budget=budget)
    gb = groebner_basis(b, order, budget=budget)
    return all(gb.contains(g) for g in a) and all(ga.contains(g) for g in b)


def eliminate(
    gens: Sequence[GradedPoly], variables: Iterable[str], order: MonomialOrder = None, budget: int = None
) -> list:
    """Generators of the ideal intersected with the ring free of ``variables``.

    Uses a block order with ``variables`` in front (or the given block order,
    whose front must cover them).
    """
    variables = tuple(variables)
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    table = gens[0].table
    if order is None:
        order = MonomialOrder.block(table, variables)
    elif order.kind != "block" or not set(variables) <= set(order.front):
        raise ValueError("elimination needs a block order with the variables in front")
    gb = groebner_basis(gens, order, budget=budget)
    return [g for g in gb.elements if not (g.variables() & set(variables))]


# ---------------------------------------------------------------- graded counts


def _check_homogeneous(gens):
    for g in gens:
        if not g.is_zero() and not is_homogeneous(g):
            raise InhomogeneousInput(f"inhomogeneous generator {g}")


def _degree_span(gens, degree, key):
    basis = EchelonBasis(key=key)
    for i, m in _degree_multiples(gens, degree):
        basis.add(_mul_term(gens[i].terms, m, Fraction(1)))
    return basis


def minimal_generators_by_degree(gens: Sequence[GradedPoly], maxdeg: int) -> dict:
    """Number of minimal generators of the homogeneous ideal in each degree.

    For every d up to ``maxdeg`` this is dim I_d minus the dimension of the
    degree-d part of the ideal generated by the lower-degree part of I.
    Degrees with a zero count are omitted.
    """
    gens = [g for g in gens if not g.is_zero()]
    _check_homogeneous(gens)
    if not gens:
        return {}
    key = MonomialOrder.grevlex(gens[0].table).key
    out = {}
    for d in range(maxdeg + 1):
        lower = [g for g in gens if weighted_degree(g) < d]
        here = [g for g in gens if weighted_degree(g) == d]
        if not here:
            continue
        span = _degree_span(lower, d, key)
        before = span.rank
        for g in here:
            span.add(g.terms)
        if span.rank > before:
            out[d] = span.rank - before
    return out


def minimal_generators(gens: Sequence[GradedPoly], maxdeg: int) -> list:
    """A minimal generating subset, scanning by degree then input order."""
    gens = [g for g in gens if not g.is_zero()]
    _check_homogeneous(gens)
    if not gens:
        return []
    key = MonomialOrder.grevlex(gens[0].table).key
    chosen = []
    for d in range(maxdeg + 1):
        here = [g for g in gens if weighted_degree(g) == d]
        if not here:
            continue
        span = _degree_span(chosen, d, key)
        for g in here:
            if span.add(g.terms):
                chosen.append(g)
    return chosen


def ideal_dimensions(gens: Sequence[GradedPoly], maxdeg: int, table: VariableTable = None) -> list:
    """dim I_d for d = 0..maxdeg."""
    gens = [g for g in gens if not g.is_zero()]
    _check_homogeneous(gens)
    table = table or (gens[0].table if gens else None)
    if table is None:
        raise ValueError("need a table when there are no generators")
    key = MonomialOrder.grevlex(table).key
    return [_degree_span(gens, d, key).rank for d in range(maxdeg + 1)]


def hilbert_function(gens: Sequence[GradedPoly], maxdeg: int, table: VariableTable = None) -> list:
    """dim of the quotient ring in each degree 0..maxdeg."""
    gens = [g for g in gens if not g.is_zero()]
    table = table or (gens[0].table if gens else None)
    if table is None:
        raise ValueError("need a table when there are no generators")
    dims = ideal_dimensions(gens, maxdeg, table)
    return [len(table.monomials(d)) - r for d, r in enumerate(dims)]
