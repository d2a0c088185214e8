from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from chowm3.gradedpoly import (
    DegreeOfZero,
    GradedPoly,
    Inhomogeneous,
    MissingAssignment,
    ParseError,
    RingMap,
    VariableTable,
    binomial_exact,
    denominator_primes,
    elementary_symmetric,
    factorial_exact,
    format_poly,
    is_homogeneous,
    parse,
    substitute,
    weighted_degree,
)

from strategies import TABLE, homogeneous_polys, polys

M3 = VariableTable.of("l1 l2:2 l3:3 H d1 d11:2 d111:3")
FAB = VariableTable.of("l1 d0 d1 k2:2")


def P(text, table=M3):
    return parse(text, table)


class TestTable:
    def test_spec_round_trip(self):
        t = VariableTable.of("x y:2 z")
        assert VariableTable.of(str(t)) == t
        assert t.weight("y") == 2
        assert t.degree((1, 2, 0)) == 5

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            VariableTable.of("x x")

    def test_bad_weight_rejected(self):
        with pytest.raises(ValueError):
            VariableTable.of("x:0")

    def test_monomials_have_requested_degree(self):
        for d in range(6):
            monos = M3.monomials(d)
            assert len(set(monos)) == len(monos)
            assert all(M3.degree(m) == d for m in monos)

    def test_monomial_count_matches_generating_function(self):
        # coefficients of 1/((1-t)^3 (1-t^2)^2 (1-t^3)^2)
        t = sympy.Symbol("t")
        series = sympy.series(1 / ((1 - t) ** 3 * (1 - t**2) ** 2 * (1 - t**3) ** 2), t, 0, 8)
        poly = sympy.Poly(series.removeO(), t)
        for d in range(8):
            assert len(M3.monomials(d)) == poly.coeff_monomial(t**d)


class TestParsing:
    def test_relation_literal(self):
        p = P("24*(l1^2 - 2*l2)")
        assert p.terms == {(2, 0, 0, 0, 0, 0, 0): 24, (0, 1, 0, 0, 0, 0, 0): -48}

    def test_rational_coefficients_in_lowest_terms(self):
        p = P("1048/27*l1^3*H + 2/4*H^2")
        assert p.coefficient((0, 0, 0, 2, 0, 0, 0)) == Fraction(1, 2)
        assert all(isinstance(c, Fraction) for c in p.terms.values())

    def test_double_star_power(self):
        assert P("l1**2") == P("l1^2")

    def test_canonical_print(self):
        assert str(P("-48*l2 + 24*l1^2")) == "24*l1^2 - 48*l2"

    @pytest.mark.parametrize("text", ["l1 +", "(l1", "l1 / H", "x1", "3 $ 4", ""])
    def test_errors(self, text):
        with pytest.raises((ParseError, KeyError)):
            P(text)

    @given(polys())
    def test_print_parse_round_trip(self, p):
        text = format_poly(p)
        assert parse(text, TABLE) == p
        assert format_poly(parse(text, TABLE)) == text


class TestArithmetic:
    @given(polys(), polys(), polys())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a

    @given(polys())
    def test_self_difference_is_empty(self, p):
        assert (p - p).terms == {}
        assert not (p - p)

    @given(homogeneous_polys(), homogeneous_polys())
    def test_degree_is_additive(self, p, q):
        assert weighted_degree(p * q) == weighted_degree(p) + weighted_degree(q)

    @given(polys(max_terms=3), st.integers(0, 3))
    def test_power_matches_repeated_product(self, p, n):
        out = GradedPoly.constant(TABLE, 1)
        for _ in range(n):
            out = out * p
        assert p**n == out

    @given(polys())
    def test_against_sympy(self, p):
        ours = sympy.expand(sympy.sympify(format_poly(p).replace("^", "**")) ** 2)
        assert sympy.expand(sympy.sympify(format_poly(p * p).replace("^", "**"))) == ours


class TestDegrees:
    def test_examples(self):
        assert weighted_degree(P("24*l1^2 - 48*l2")) == 2
        assert weighted_degree(P("H*d111")) == 4

    def test_inhomogeneous_witness(self):
        with pytest.raises(Inhomogeneous) as info:
            weighted_degree(P("l1 + l2"))
        got = set(info.value.witness)
        assert got == {(1, 0, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0, 0)}

    def test_zero_has_no_degree(self):
        with pytest.raises(DegreeOfZero):
            weighted_degree(GradedPoly.zero(M3))
        assert is_homogeneous(GradedPoly.zero(M3))

    def test_denominator_primes(self):
        assert denominator_primes(P("1/2*H^2 + 3/4*d1^2")) == {2}
        assert denominator_primes(P("24*l1^2")) == set()
        assert denominator_primes(P("1048/27*l1^3*H")) == {3}


class TestSubstitute:
    def test_forward_change_of_generators(self):
        m = RingMap.build(VariableTable.of("H"), FAB, {"H": "9*l1 - 3*d1 - d0"})
        assert substitute(parse("H", VariableTable.of("H")), m) == parse("9*l1 - 3*d1 - d0", FAB)

    def test_binomial_expansion(self):
        t = VariableTable.of("l1 d1")
        m = RingMap.build(t, t, {"l1": "l1 + d1", "d1": "d1"})
        assert substitute(parse("l1^2", t), m) == parse("l1^2 + 2*l1*d1 + d1^2", t)

    @given(polys())
    def test_identity(self, p):
        assert substitute(p, RingMap.identity(TABLE)) == p

    def test_missing_assignment(self):
        with pytest.raises(MissingAssignment):
            RingMap.build(TABLE, TABLE, {"x": "x"})
        small = VariableTable.of("x")
        m = RingMap.build(small, small, {"x": "x"})
        with pytest.raises(MissingAssignment):
            substitute(parse("y", TABLE), m)

    maps = st.fixed_dictionaries(
        {n: polys(max_terms=2, max_exp=2) for n in TABLE.names}
    ).map(lambda d: RingMap.build(TABLE, TABLE, d))

    @given(polys(max_terms=3, max_exp=2), polys(max_terms=3, max_exp=2), maps)
    def test_homomorphism(self, a, b, m):
        assert substitute(a + b, m) == substitute(a, m) + substitute(b, m)
        assert substitute(a * b, m) == substitute(a, m) * substitute(b, m)
        assert substitute(GradedPoly.constant(TABLE, 1), m) == GradedPoly.constant(TABLE, 1)

    @given(polys(max_terms=3, max_exp=2), maps, maps)
    def test_composition(self, p, f, g):
        assert substitute(p, f.then(g)) == substitute(substitute(p, f), g)

    def test_grading_preserved(self):
        good = RingMap.build(TABLE, TABLE, {"x": "x + z", "y": "y + x^2", "z": "z"})
        bad = RingMap.build(TABLE, TABLE, {"x": "y", "y": "y", "z": "z"})
        assert good.preserves_grading()
        assert not bad.preserves_grading()


class TestSymmetricAndIntegers:
    def test_elementary_symmetric(self):
        t = VariableTable.of("h1 h2 h3")
        hs = [GradedPoly.var(t, n) for n in t.names]
        assert elementary_symmetric(2, hs) == parse("h1*h2 + h1*h3 + h2*h3", t)
        assert elementary_symmetric(0, hs[:2]) == GradedPoly.constant(t, 1)
        assert elementary_symmetric(3, hs[:2]).is_zero()

    @given(st.integers(0, 40), st.integers(-3, 45))
    def test_binomial_against_sympy(self, n, k):
        expected = int(sympy.binomial(n, k)) if 0 <= k <= n else 0
        assert binomial_exact(n, k) == expected

    def test_binomial_examples(self):
        assert binomial_exact(8, 3) == 56
        assert binomial_exact(4, 1) == 4
        assert all(binomial_exact(n, 0) == 1 for n in range(20))

    def test_factorial(self):
        assert [factorial_exact(n) for n in range(6)] == [1, 1, 2, 6, 24, 120]
