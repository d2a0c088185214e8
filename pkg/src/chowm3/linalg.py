"""Exact linear algebra on sparse vectors.

Vectors are dicts ``{index: coefficient}``; indices are any totally ordered
hashables (monomial tuples in practice).  Two tools live here: an incremental
row echelon basis over Q that can remember how each pivot row was built, and
an integer solver based on column Hermite reduction.
"""

from __future__ import annotations

import bisect
from fractions import Fraction


def _axpy(target: dict, scale, source: dict) -> None:
    """target += scale * source, dropping zeros."""
    for k, v in source.items():
        s = target.get(k, 0) + scale * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


class EchelonBasis:
    """Span of a growing set of vectors, kept in echelon form.

    Each stored row has a pivot (its largest index under ``key``) that no
    other row contains as its pivot.  With ``track=True`` every row also
    carries its expression as a combination of the added vectors' tags.
    """

    def __init__(self, key=None, track=False):
        self.key = key or (lambda i: i)
        self.track = track
        self._pivots = []  # sorted keys
        self._rows = {}  # key(pivot) -> (pivot, row, combo)

    def __len__(self):
        return len(self._rows)

    @property
    def rank(self):
        return len(self._rows)

    def reduce(self, vec: dict, combo: dict = None):
        """Reduce vec against the basis; returns (remainder, combination used).

        The combination satisfies  vec == remainder + sum(c * tag-vector).
        """
        v = dict(vec)
        used = dict(combo) if combo else {}
        if not v:
            return v, used
        for pk in reversed(self._pivots):
            pivot, row, rcombo = self._rows[pk]
            c = v.get(pivot)
            if c:
                _axpy(v, -c, row)
                if self.track:
                    _axpy(used, c, rcombo)
        return v, used

    def add(self, vec: dict, tag=None) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        v, _ = self.reduce(vec)
        if not v:
            return False
        combo = {}
        if self.track:
            # express the reduced row through tags: v = vec - sum(...)
            _, used = self.reduce(vec)
            combo = {tag: Fraction(1)}
            _axpy(combo, -1, used)
        pivot = max(v, key=self.key)
        inv = Fraction(1) / v[pivot]
        v = {k: c * inv for k, c in v.items()}
        if self.track:
            combo = {k: c * inv for k, c in combo.items()}
        pk = self.key(pivot)
        bisect.insort(self._pivots, pk)
        self._rows[pk] = (pivot, v, combo)
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]


def rank(vectors, key=None) -> int:
    basis = EchelonBasis(key)
    for v in vectors:
        basis.add(v)
    return basis.rank


class NoIntegerSolution(ValueError):
    pass


def solve_integer(columns: list, target: dict) -> list:
    """Integer x with sum(x_j * columns[j]) == target.

    Entries must be integers.  Raises NoIntegerSolution when the target is not
    in the lattice spanned by the columns (including when it is only in their
    rational span).
    """
    rows = sorted({k for col in columns for k in col} | set(target))
    index = {k: i for i, k in enumerate(rows)}
    n = len(columns)
    # dense integer matrix, columns as lists; U tracks unimodular column ops
    cols = [[0] * len(rows) for _ in range(n)]
    for j, col in enumerate(columns):
        for k, v in col.items():
            if Fraction(v).denominator != 1:
                raise ValueError("non-integer matrix entry")
            cols[j][index[k]] = int(v)
    unimod = [[1 if i == j else 0 for i in range(n)] for j in range(n)]

    def combine(a, b, p, q, r, s):
        # (col_a, col_b) <- (p*col_a + q*col_b, r*col_a + s*col_b)
        ca, cb = cols[a], cols[b]
        cols[a] = [p * x + q * y for x, y in zip(ca, cb)]
        cols[b] = [r * x + s * y for x, y in zip(ca, cb)]
        ua, ub = unimod[a], unimod[b]
        unimod[a] = [p * x + q * y for x, y in zip(ua, ub)]
        unimod[b] = [r * x + s * y for x, y in zip(ua, ub)]

    pivots = []  # (row, column)
    free = 0
    for i in range(len(rows)):
        if free >= n:
            break
        for j in range(free + 1, n):
            if cols[j][i] == 0:
                continue
            a, b = cols[free][i], cols[j][i]
            if a == 0:
                cols[free], cols[j] = cols[j], cols[free]
                unimod[free], unimod[j] = unimod[j], unimod[free]
                continue
            g, x, y = _xgcd(a, b)
            combine(free, j, x, y, -b // g, a // g)
        if cols[free][i] != 0:
            if cols[free][i] < 0:
                cols[free] = [-v for v in cols[free]]
                unimod[free] = [-v for v in unimod[free]]
            pivots.append((i, free))
            free += 1

    rhs = [0] * len(rows)
    for k, v in target.items():
        if Fraction(v).denominator != 1:
            raise NoIntegerSolution("target has non-integer entries")
        rhs[index[k]] = int(v)
    y = [0] * n
    residual = list(rhs)
    for i, j in pivots:
        p = cols[j][i]
        if residual[i] % p:
            raise NoIntegerSolution(f"divisibility fails at row {rows[i]!r}")
        y[j] = residual[i] // p
        if y[j]:
            residual = [r - y[j] * c for r, c in zip(residual, cols[j])]
    if any(residual):
        raise NoIntegerSolution("target outside the rational span")
    x = [0] * n
    for j in range(n):
        if y[j]:
            for t in range(n):
                x[t] += y[j] * unimod[j][t]
    return x


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0
