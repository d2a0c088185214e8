"""Exact sparse multivariate polynomials with weighted gradings.

Coefficients are :class:`fractions.Fraction` throughout, so every operation is
exact.  A polynomial is tied to a :class:`VariableTable`, which fixes the
variable order (monomials are exponent tuples aligned with it) and the weight
of each variable.

The text format understood by :func:`parse` and produced by ``str`` is::

    24*l1^2 - 48*l2
    1048/27*l1^3*H + 1/2*H^2

Integer and rational literals, identifiers, ``+ - * / ^`` and parentheses are
accepted on input; printing always produces the canonical form above, and
``parse(str(p)) == p`` holds for every polynomial.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
Monomial = tuple
Coefficient = Union[int, Fraction]


class MissingAssignment(KeyError):
    """A ring map was applied to a polynomial using an unassigned variable."""


class Inhomogeneous(ValueError):
    """Raised when a homogeneous polynomial was required."""

    def __init__(self, first: Monomial, second: Monomial, message: str = ""):
        self.witness = (first, second)
        super().__init__(message or f"terms of different weighted degree: {first} vs {second}")


class DegreeOfZero(ValueError):
    """The zero polynomial has no weighted degree."""


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class VariableTable:
    names: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"not an identifier: {name!r}")
        if any(int(w) < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")

    @classmethod
    def of(cls, spec: Union[str, Iterable]) -> "VariableTable":
        """Build a table from ``"x y:2 z"`` or an iterable of names / (name, weight) pairs."""
        if isinstance(spec, str):
            spec = spec.replace(",", " ").split()
        names, weights = [], []
        for item in spec:
            if isinstance(item, str):
                name, _, w = item.partition(":")
                names.append(name)
                weights.append(int(w) if w else 1)
            else:
                names.append(item[0])
                weights.append(int(item[1]))
        return cls(tuple(names), tuple(weights))

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def weight(self, name: str) -> int:
        return self.weights[self.index(name)]

    def degree(self, exps: Monomial) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def unit(self) -> Monomial:
        return (0,) * len(self.names)

    def monomials(self, degree: int) -> list:
        """All monomials of the given weighted degree, in a fixed order."""
        out = []
        n = len(self.weights)

        def rec(i, left, acc):
            if i == n - 1:
                w = self.weights[i]
                if left % w == 0:
                    out.append(tuple(acc) + (left // w,))
                return
            for e in range(left // self.weights[i], -1, -1):
                rec(i + 1, left - e * self.weights[i], acc + [e])

        if degree < 0:
            return []
        if n == 0:
            return [()] if degree == 0 else []
        rec(0, degree, [])
        return out

    def __str__(self):
        return " ".join(n if w == 1 else f"{n}:{w}" for n, w in zip(self.names, self.weights))


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


def _grevlex_key(table: VariableTable):
    weights = table.weights

    def key(m):
        return (sum(e * w for e, w in zip(m, weights)), tuple(-e for e in reversed(m)))

    return key


class GradedPoly:
    """Immutable polynomial over Q in the variables of a table.

    ``terms`` maps exponent tuples to nonzero Fractions.  Arithmetic between
    polynomials requires identical tables; ints and Fractions act as scalars.
    """

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VariableTable, terms: Mapping = None):
        self.table = table
        clean = {}
        if terms:
            n = len(table)
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"monomial {m} does not match table of {n} variables")
                c = _coerce(c)
                if c:
                    clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table, terms):
        p = cls.__new__(cls)
        p.table = table
        p._terms = terms
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def zero(cls, table):
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table, c):
        c = _coerce(c)
        return cls._raw(table, {table.unit(): c} if c else {})

    @classmethod
    def var(cls, table, name, power=1):
        m = [0] * len(table)
        m[table.index(name)] = power
        return cls._raw(table, {tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, table, exps, coeff=1):
        return cls(table, {tuple(exps): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exps) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # arithmetic
    def _lift(self, other):
        if isinstance(other, GradedPoly):
            if other.table != self.table:
                raise ValueError(f"table mismatch: [{self.table}] vs [{other.table}]")
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return GradedPoly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "GradedPoly":
        c = _coerce(c)
        if not c:
            return GradedPoly.zero(self.table)
        return GradedPoly._raw(self.table, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        return GradedPoly._raw(self.table, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _coerce(other))
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = GradedPoly.constant(self.table, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedPoly.constant(self.table, other)
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    # structure
    def degrees(self) -> set:
        return {self.table.degree(m) for m in self._terms}

    def variables(self) -> set:
        return {self.table.names[i] for m in self._terms for i, e in enumerate(m) if e}

    def degree_in(self, name: str) -> int:
        i = self.table.index(name)
        return max((m[i] for m in self._terms), default=-1)

    def coefficients_in(self, name: str) -> dict:
        """Split as sum of name^j * c_j; returns {j: c_j} with c_j free of name."""
        i = self.table.index(name)
        out = {}
        for m, c in self._terms.items():
            j = m[i]
            rest = m[:i] + (0,) + m[i + 1:]
            out.setdefault(j, {})[rest] = c
        return {j: GradedPoly._raw(self.table, t) for j, t in out.items()}

    def homogeneous_part(self, degree: int) -> "GradedPoly":
        return GradedPoly._raw(
            self.table, {m: c for m, c in self._terms.items() if self.table.degree(m) == degree}
        )

    def content_denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self._terms.values())) if self._terms else 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def sorted_terms(self, key=None) -> list:
        """Terms in descending order (graded reverse lex unless a key is given)."""
        key = key or _grevlex_key(self.table)
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def change_table(self, table: VariableTable) -> "GradedPoly":
        """Re-express over another table containing every variable that occurs."""
        out = {}
        pos = [table.index(n) for n in self.table.names]
        for m, c in self._terms.items():
            new = [0] * len(table)
            for i, e in enumerate(m):
                if e:
                    new[pos[i]] = e
            out[tuple(new)] = c
        return GradedPoly._raw(table, out)

    def restrict_table(self, table: VariableTable) -> "GradedPoly":
        """Like change_table, but the target may lack variables absent from self."""
        used = self.variables()
        missing = used - set(table.names)
        if missing:
            raise ValueError(f"variables {sorted(missing)} not in target table")
        out = {}
        idx = [(i, table.index(n)) for i, n in enumerate(self.table.names) if n in table.names]
        for m, c in self._terms.items():
            new = [0] * len(table)
            for i, j in idx:
                new[j] = m[i]
            out[tuple(new)] = c
        return GradedPoly._raw(table, out)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"GradedPoly({format_poly(self)!r})"


def _fmt_monomial(table, m) -> str:
    parts = []
    for name, e in zip(table.names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: GradedPoly, key=None) -> str:
    if not p:
        return "0"
    pieces = []
    for m, c in p.sorted_terms(key):
        mono = _fmt_monomial(p.table, m)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    # expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
    # unary := '-' unary | power ; power := atom ('^' int)?
    def __init__(self, tokens, table):
        self.toks = tokens
        self.i = 0
        self.table = table

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (val and tok[1] != val):
            raise ParseError(f"expected {val or kind} at token {self.i}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        left = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            right = self.unary()
            if op == "*":
                left = left * right
            else:
                if right.variables() or not right:
                    raise ParseError("division only by nonzero constants")
                left = left / right.coefficient(self.table.unit())
        return left

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exp = self.take("num")[1]
            return base ** exp
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return GradedPoly.constant(self.table, val)
        if kind == "id":
            self.take()
            if val not in self.table.names:
                raise ParseError(f"unknown variable {val!r}")
            return GradedPoly.var(self.table, val)
        if (kind, val) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse(text: str, table: VariableTable) -> GradedPoly:
    """Parse a polynomial literal over ``table``."""
    parser = _Parser(_tokenize(text), table)
    if not parser.toks:
        raise ParseError("empty expression")
    result = parser.expr()
    if parser.i != len(parser.toks):
        raise ParseError(f"trailing input at token {parser.i}: {parser.toks[parser.i][1]!r}")
    return result


def symbols_in(text: str) -> set:
    """Identifiers occurring in a literal (useful before a table is known)."""
    return {val for kind, val in _tokenize(text) if kind == "id"}


@dataclass(frozen=True)
class RingMap:
    """Ring homomorphism given by images of the source variables."""

    source: VariableTable
    target: VariableTable
    assignment: tuple  # (name, GradedPoly over target) pairs, in source order

    @classmethod
    def build(cls, source, target, images: Mapping) -> "RingMap":
        pairs = []
        for name in source.names:
            if name not in images:
                raise MissingAssignment(name)
            img = images[name]
            if isinstance(img, str):
                img = parse(img, target)
            elif isinstance(img, (int, Fraction)):
                img = GradedPoly.constant(target, img)
            elif img.table != target:
                raise ValueError(f"image of {name} is not over the target table")
            pairs.append((name, img))
        extra = set(images) - set(source.names)
        if extra:
            raise KeyError(f"images given for unknown variables {sorted(extra)}")
        return cls(source, target, tuple(pairs))

    @classmethod
    def identity(cls, table) -> "RingMap":
        return cls.build(table, table, {n: GradedPoly.var(table, n) for n in table.names})

    def image(self, name) -> GradedPoly:
        return dict(self.assignment)[name]

    def __call__(self, p: GradedPoly) -> GradedPoly:
        return substitute(p, self)

    def then(self, other: "RingMap") -> "RingMap":
        """The composite: apply self, then other."""
        if other.source != self.target:
            raise ValueError("maps do not compose")
        return RingMap.build(
            self.source, other.target, {n: substitute(img, other) for n, img in self.assignment}
        )

    def preserves_grading(self) -> bool:
        for name, img in self.assignment:
            w = self.source.weight(name)
            if img and img.degrees() != {w}:
                return False
        return True


def substitute(p: GradedPoly, m: RingMap) -> GradedPoly:
    """Homomorphic image of ``p`` under ``m``."""
    if p.table != m.source:
        # allow polynomials over a sub-table of the source
        try:
            p = p.restrict_table(m.source)
        except (ValueError, KeyError):
            missing = p.variables() - set(m.source.names)
            raise MissingAssignment(sorted(missing)[0]) from None
    images = [img for _, img in m.assignment]
    powers = [dict() for _ in images]

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = images[i] ** e
        return cache[e]

    out = GradedPoly.zero(m.target)
    for mono, c in p.items():
        term = GradedPoly.constant(m.target, c)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def elementary_symmetric(j: int, variables: list) -> GradedPoly:
    """sigma_j of the given polynomials (usually variables); zero when j exceeds their number."""
    if not variables:
        raise ValueError("need at least one variable to fix the table")
    table = variables[0].table
    if j < 0 or j > len(variables):
        return GradedPoly.zero(table)
    # coefficient extraction from prod (1 + x_i u), truncated at u^j
    layers = [GradedPoly.constant(table, 1)] + [GradedPoly.zero(table)] * j
    for x in variables:
        for s in range(j, 0, -1):
            layers[s] = layers[s] + layers[s - 1] * x
    return layers[j]


def weighted_degree(p: GradedPoly) -> int:
    """Common weighted degree of all terms.

    Raises DegreeOfZero for the zero polynomial and Inhomogeneous (carrying two
    offending monomials) when terms of different degrees are present.
    """
    if not p:
        raise DegreeOfZero("zero polynomial")
    first = None
    for m in sorted(p._terms, key=_grevlex_key(p.table), reverse=True):
        d = p.table.degree(m)
        if first is None:
            first = (m, d)
        elif d != first[1]:
            raise Inhomogeneous(first[0], m)
    return first[1]


def is_homogeneous(p: GradedPoly) -> bool:
    return len(p.degrees()) <= 1


def prime_factors(n: int) -> set:
    n = abs(n)
    out, f = set(), 2
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.add(n)
    return out


def denominator_primes(p: Union[GradedPoly, Iterable]) -> frozenset:
    """Primes dividing some coefficient denominator (of one or several polynomials)."""
    polys = [p] if isinstance(p, GradedPoly) else list(p)
    out = set()
    for q in polys:
        for c in q._terms.values():
            out |= prime_factors(c.denominator)
    return frozenset(out)


def binomial_exact(n: int, k: int) -> int:
    """C(n, k) for any integers; zero outside 0 <= k <= n (n >= 0)."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def factorial_exact(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)
