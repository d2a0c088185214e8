import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from chowm3.gradedpoly import GradedPoly, VariableTable, format_poly, parse
from chowm3.ideals import (
    STATUS_FAIL,
    STATUS_Q,
    STATUS_Z6,
    BudgetExceeded,
    InhomogeneousInput,
    MembershipCertificate,
    MonomialOrder,
    buchberger_audit,
    eliminate,
    groebner_basis,
    hilbert_function,
    ideal_equal,
    ideal_membership,
    integral_membership,
    is_reduced,
    minimal_generators,
    minimal_generators_by_degree,
)
from chowm3.linalg import NoIntegerSolution, rank

from strategies import FLAT, homogeneous_polys, polys

XY = VariableTable.of("x y")
X = VariableTable.of("x")


def P(text, table=XY):
    return parse(text, table)


def sympy_basis(gens, table, order):
    syms = sympy.symbols(" ".join(table.names))
    exprs = [sympy.sympify(format_poly(g).replace("^", "**")) for g in gens]
    gb = sympy.groebner(exprs, *syms, order=order, domain="QQ")
    out = set()
    for e in gb.exprs:
        poly = sympy.Poly(e, *syms)
        terms = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
        out.add(GradedPoly(table, terms))
    return out


class TestOrders:
    def test_grevlex_is_graded_and_reverse_lex(self):
        o = MonomialOrder.grevlex(FLAT)
        # x*z < y^2 in grevlex with x > y > z
        assert o.key((1, 0, 1)) < o.key((0, 2, 0))
        assert o.key((0, 0, 3)) > o.key((2, 0, 0))  # degree first

    def test_block_front_dominates(self):
        o = MonomialOrder.block(FLAT, ["y"])
        assert o.key((0, 1, 0)) > o.key((5, 0, 5))

    @given(st.tuples(*[st.integers(0, 3)] * 3), st.tuples(*[st.integers(0, 3)] * 3),
           st.tuples(*[st.integers(0, 2)] * 3))
    def test_orders_are_multiplicative(self, a, b, c):
        for o in (MonomialOrder.grevlex(FLAT), MonomialOrder.lex(FLAT),
                  MonomialOrder.block(FLAT, ["z"])):
            ac = tuple(x + y for x, y in zip(a, c))
            bc = tuple(x + y for x, y in zip(b, c))
            if o.key(a) < o.key(b):
                assert o.key(ac) < o.key(bc)

    def test_weighted_grading_first(self):
        t = VariableTable.of("x y:3")
        o = MonomialOrder.grevlex(t)
        assert o.key((0, 1)) > o.key((2, 0))


class TestGroebner:
    def test_single_generator(self):
        gb = groebner_basis([P("x^2", X)])
        assert list(gb.elements) == [P("x^2", X)]

    def test_elimination_example(self):
        gens = [P("y - x^2"), P("y^2 - x")]
        gb = groebner_basis(gens, MonomialOrder.block(XY, ["y"]))
        assert P("x^4 - x") in gb.elements
        assert eliminate(gens, ["y"]) == [P("x^4 - x")]

    def test_graph_of_function_eliminates_to_zero_ideal(self):
        assert eliminate([P("y - x^2")], ["y"]) == []

    def test_already_a_basis(self):
        # with tau last, h_i^2 leads and the leads are pairwise coprime
        t = VariableTable.of("h1 h2 h3 tau")
        gens = [parse(f"h{i}^2 + tau*h{i}", t) for i in (1, 2, 3)]
        gb = groebner_basis(gens)
        assert set(gb.elements) == set(gens)
        assert buchberger_audit(gb)
        # with tau first, tau*h_i leads and the basis grows
        t = VariableTable.of("tau h1 h2 h3")
        gens = [parse(f"h{i}^2 + tau*h{i}", t) for i in (1, 2, 3)]
        gb = groebner_basis(gens)
        assert len(gb.elements) > 3 and buchberger_audit(gb)
        assert set(gb.elements) == sympy_basis(gens, t, "grevlex")

    def test_empty_input(self):
        gb = groebner_basis([], MonomialOrder.grevlex(XY))
        assert gb.elements == ()

    def test_budget(self):
        gens = [parse("x + y + z", FLAT), parse("x*y + y*z + z*x", FLAT), parse("x*y*z - 1", FLAT)]
        assert groebner_basis(gens).steps > 3
        with pytest.raises(BudgetExceeded) as info:
            groebner_basis(gens, budget=3)
        assert info.value.steps > 3

    @given(st.lists(polys(FLAT, max_terms=3, max_exp=2), min_size=1, max_size=3))
    def test_matches_sympy_grevlex(self, gens):
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return
        gb = groebner_basis(gens)
        assert set(gb.elements) == sympy_basis(gens, FLAT, "grevlex")
        assert buchberger_audit(gb)
        assert is_reduced(gb)

    @given(st.lists(polys(FLAT, max_terms=3, max_exp=2), min_size=1, max_size=3))
    def test_matches_sympy_lex(self, gens):
        gens = [g for g in gens if not g.is_zero()]
        if not gens:
            return
        gb = groebner_basis(gens, MonomialOrder.lex(FLAT), budget=20000)
        assert set(gb.elements) == sympy_basis(gens, FLAT, "lex")

    @given(st.lists(polys(FLAT, max_terms=3, max_exp=2), min_size=1, max_size=3),
           polys(FLAT, max_terms=4), polys(FLAT, max_terms=4))
    def test_normal_form_properties(self, gens, p, q):
        gb = groebner_basis(gens, MonomialOrder.grevlex(FLAT))
        nf = gb.normal_form
        assert nf(nf(p)) == nf(p)
        assert nf(p + q * 3) == nf(p) + nf(q) * 3
        quots, rem = gb.divide(p)
        total = rem
        for a, g in zip(quots, gb.elements):
            total = total + a * g
        assert total == p

    @given(st.lists(polys(FLAT, max_terms=3, max_exp=2), min_size=1, max_size=3))
    def test_tracked_representations_replay(self, gens):
        gb = groebner_basis(gens, MonomialOrder.grevlex(FLAT), track=True)
        for g, rep in zip(gb.elements, gb.representations):
            total = GradedPoly.zero(FLAT)
            for c, f in zip(rep, gens):
                total = total + c * f
            assert total == g

    def test_deterministic(self):
        gens = [parse("x^2 - y*z + 1", FLAT), parse("y^2 - x", FLAT), parse("z^2 - x*y", FLAT)]
        a = groebner_basis(gens)
        b = groebner_basis(gens)
        assert [str(g) for g in a.elements] == [str(g) for g in b.elements]


class TestMembership:
    def test_examples(self):
        c = ideal_membership(P("x^3", X), [P("x^2", X)])
        assert c.member and c.cofactors == (P("x", X),) and c.primes == frozenset()
        c = ideal_membership(P("x", X), [P("x^2", X)])
        assert not c.member and c.remainder == P("x", X) and c.status == STATUS_FAIL

    @pytest.mark.parametrize("method", ["linear", "groebner"])
    def test_both_methods(self, method):
        gens = [P("x^2 + x*y"), P("y^2")]
        target = P("x^3 + 2*x^2*y + x*y^2") * Fraction(1, 6)
        c = ideal_membership(target, gens, method=method)
        assert c.member and c.replay()
        assert c.status == STATUS_Z6

    def test_q_only_status(self):
        c = ideal_membership(P("x^2", X) * Fraction(1, 5), [P("x^2", X)])
        assert c.status == STATUS_Q

    def test_linear_needs_homogeneous(self):
        with pytest.raises(InhomogeneousInput):
            ideal_membership(P("x + 1", X), [P("x", X)], method="linear")

    @given(st.lists(homogeneous_polys(FLAT, max_terms=3), min_size=1, max_size=3),
           st.lists(polys(FLAT, max_terms=3, max_exp=2), min_size=3, max_size=3))
    def test_linear_and_groebner_agree(self, gens, mults):
        target = GradedPoly.zero(FLAT)
        for g, m in zip(gens, mults):
            target = target + g * m
        # keep one degree so the linear route applies
        degs = sorted(target.degrees())
        if degs:
            target = target.homogeneous_part(degs[-1])
        lin = ideal_membership(target, gens, method="linear")
        gb = ideal_membership(target, gens, method="groebner")
        assert lin.replay() and gb.replay()
        assert lin.member == gb.member

    def test_certificate_text_round_trip(self):
        gens = [P("x^2 + x*y"), P("y^2")]
        c = ideal_membership(P("x^3 + x^2*y + 1/2*x*y^2"), gens)
        back = MembershipCertificate.from_text(c.to_text("demo", ["a", "b"]))
        assert back.replay() and back.member == c.member
        assert back.cofactors == c.cofactors

    def test_integral(self):
        gens = [P("2*x"), P("3*y")]
        c = integral_membership(P("x"), gens, invert=(2, 3))
        assert c.replay() and c.status == STATUS_Z6
        with pytest.raises(NoIntegerSolution):
            integral_membership(P("x"), gens)
        assert integral_membership(P("6*x + 3*y"), gens).primes == frozenset()


class TestEquality:
    def test_examples(self):
        assert ideal_equal([P("x^2", X), P("x^3", X)], [P("x^2", X)])
        assert not ideal_equal([P("x", X)], [P("x^2", X)])

    @given(st.lists(homogeneous_polys(FLAT, max_terms=2), min_size=1, max_size=3),
           st.lists(homogeneous_polys(FLAT, max_terms=2), min_size=1, max_size=3))
    def test_reflexive_and_symmetric(self, a, b):
        assert ideal_equal(a, a)
        assert ideal_equal(a, b) == ideal_equal(b, a)
        assert ideal_equal(a, list(reversed(a)) + [a[0] * 2])

    def test_inhomogeneous_route(self):
        a = [P("y - x^2"), P("y^2 - x")]
        b = [P("y - x^2"), P("x^4 - x")]
        assert ideal_equal(a, b)


def brute_force_counts(gens, table, maxdeg):
    """dim I_d minus dim of multiples of lower-degree part, by dense sympy ranks."""
    out = {}
    for d in range(maxdeg + 1):
        monos = table.monomials(d)
        idx = {m: i for i, m in enumerate(monos)}

        def rows(polys):
            rs = []
            for g in polys:
                dg = table.degree(next(iter(g.terms)))
                for m in table.monomials(d - dg) if dg <= d else []:
                    v = [0] * len(monos)
                    for gm, c in g.terms.items():
                        v[idx[tuple(a + b for a, b in zip(gm, m))]] = c
                    rs.append(v)
            return rs

        low = [g for g in gens if table.degree(next(iter(g.terms))) < d]
        every = [g for g in gens if table.degree(next(iter(g.terms))) <= d]
        r_low = sympy.Matrix(rows(low)).rank() if rows(low) else 0
        r_all = sympy.Matrix(rows(every)).rank() if rows(every) else 0
        if r_all > r_low:
            out[d] = r_all - r_low
    return out


monomial_ideals = st.lists(
    st.tuples(*[st.integers(0, 3)] * 3).filter(lambda m: 0 < sum(m) <= 5), min_size=1, max_size=5
)


class TestCounts:
    def test_examples(self):
        gens = [P("x^2"), P("x*y"), P("y^2"), P("x^2*y")]
        counts = minimal_generators_by_degree(gens, 3)
        assert counts == {2: 3}  # the cubic contributes 0
        assert minimal_generators_by_degree([P("x")], 3) == {1: 1}
        assert len(minimal_generators(gens, 3)) == 3

    def test_hilbert_examples(self):
        assert hilbert_function([P("x^2"), P("x*y"), P("y^2")], 3) == [1, 2, 0, 0]
        assert hilbert_function([], 4, X) == [1, 1, 1, 1, 1]

    def test_inhomogeneous_rejected(self):
        with pytest.raises(InhomogeneousInput):
            minimal_generators_by_degree([P("x + x^2")], 3)

    @given(monomial_ideals)
    def test_monomial_ideals_against_brute_force(self, monos):
        gens = [GradedPoly.monomial(FLAT, m) for m in monos]
        assert minimal_generators_by_degree(gens, 5) == brute_force_counts(gens, FLAT, 5)
        # minimal generators of a monomial ideal: those not divisible by another
        minimal = {
            m for m in set(monos)
            if not any(o != m and all(a <= b for a, b in zip(o, m)) for o in set(monos))
        }
        assert sum(minimal_generators_by_degree(gens, 5).values()) == len(minimal)

    @given(st.lists(homogeneous_polys(FLAT, max_terms=3), min_size=1, max_size=4))
    def test_general_against_brute_force(self, gens):
        assert minimal_generators_by_degree(gens, 5) == brute_force_counts(gens, FLAT, 5)

    @given(st.lists(homogeneous_polys(FLAT, max_terms=3), min_size=1, max_size=3))
    def test_hilbert_function_is_monomials_minus_rank(self, gens):
        hf = hilbert_function(gens, 4)
        for d, v in enumerate(hf):
            span = []
            for g in gens:
                dg = FLAT.degree(next(iter(g.terms)))
                for m in FLAT.monomials(d - dg) if dg <= d else []:
                    span.append(g * GradedPoly.monomial(FLAT, m))
            assert v == len(FLAT.monomials(d)) - rank([s.terms for s in span])


def test_random_replays_are_exact():
    rng = random.Random(7)
    for _ in range(40):
        gens = []
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(1, 3)
            monos = rng.sample(FLAT.monomials(d), min(2, len(FLAT.monomials(d))))
            gens.append(GradedPoly(FLAT, {m: Fraction(rng.randint(1, 5), rng.randint(1, 3)) for m in monos}))
        d = rng.randint(2, 4)
        target = GradedPoly(FLAT, {m: Fraction(rng.randint(-3, 3)) for m in rng.sample(FLAT.monomials(d), 2)})
        for method in ("linear", "groebner"):
            assert ideal_membership(target, gens, method=method).replay()


def test_all_pairs_audit_on_weighted_table():
    t = VariableTable.of("a b:2 c")
    gens = [parse("a^2 - b", t), parse("b*c - a^3", t), parse("c^2 - a*c", t)]
    gb = groebner_basis(gens)
    assert buchberger_audit(gb)
    for g, h in itertools.combinations(gb.leading_monomials(), 2):
        assert not all(x <= y for x, y in zip(g, h))
