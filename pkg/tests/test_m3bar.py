import shutil
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chowm3 import m3bar
from chowm3.gradedpoly import parse
from chowm3.ideals import hilbert_function, ideal_equal
from chowm3.m3bar import (
    DATA_FILE,
    EXPECTED_PROFILE,
    GENERATORS,
    OPEN_STRATUM,
    ChecksumMismatch,
    NotEliminable,
    UnresolvedPresentation,
    alias_forcing,
    audit_degrees,
    check_step,
    data_checksum,
    eliminate_generator,
    format_assignment,
    load_presentation,
    parse_assignment,
    pull_back,
    rational_simplify,
    resolve_variants,
    restrict_open_stratum,
    same_ideal_after_elimination,
    variant_assignments,
    with_assignment,
)


@pytest.fixture(scope="module")
def pres():
    return load_presentation()


@pytest.fixture(scope="module")
def simplified(pres):
    return rational_simplify(pres)


def G(text):
    return parse(text, GENERATORS)


class TestLoading:
    def test_names_and_degrees(self, pres):
        assert len(pres.relations) == 15
        profile = {}
        for r in pres.relations:
            profile[r.degree] = profile.get(r.degree, 0) + 1
        assert profile == EXPECTED_PROFILE
        assert pres.table == GENERATORS

    def test_checksum_is_sealed(self, pres):
        assert pres.checksum == data_checksum(DATA_FILE.read_text())

    def test_tampering_detected(self, tmp_path):
        copy = tmp_path / "relations.txt"
        shutil.copy(DATA_FILE, copy)
        text = copy.read_text().replace("24*(l1^2 - 2*l2)", "24*(l1^2 - 3*l2)", 1)
        assert text != DATA_FILE.read_text()
        copy.write_text(text)
        with pytest.raises(ChecksumMismatch):
            load_presentation(copy)

    def test_resealing_a_copy_loads(self, tmp_path):
        copy = tmp_path / "relations.txt"
        lines = [l for l in DATA_FILE.read_text().splitlines(keepends=True)
                 if not l.startswith("checksum ")]
        body = "".join(lines)
        copy.write_text(body + f"checksum sha256 {data_checksum(body)}\n")
        assert load_presentation(copy).names == load_presentation().names

    def test_lowest_relations(self, pres):
        assert pres.relation("A2").poly == G("24*l1^2 - 48*l2")
        assert pres.relation("A3").poly.degrees() == {3}

    def test_defaults(self, pres):
        assert pres.assignment() == {"d11c": "with_d1", "k1_1": "inside", "kh": "plus"}
        assert pres.assignment_id() == "d11c=with_d1,k1_1=inside,kh=plus"

    def test_flagged_relations(self, pres):
        flagged = sorted(r.name for r in pres.relations if r.flagged)
        assert flagged == ["d11c", "k1_1", "kh"]
        assert pres.relation("kh").literal is None
        assert [v for v, _ in pres.relation("kh").options()] == ["plus", "minus"]

    def test_unknown_reading(self, pres):
        with pytest.raises(KeyError):
            pres.relation("kh").reading("literal")

    @given(st.dictionaries(st.sampled_from(["a", "b_1", "kh"]), st.sampled_from(["x", "with_d1"])))
    def test_assignment_text_round_trip(self, a):
        assert parse_assignment(format_assignment(a)) == a

    def test_bad_assignment_text(self):
        with pytest.raises(ValueError):
            parse_assignment("kh")


class TestAudit:
    def test_in_use_readings_pass(self, pres):
        rep = audit_degrees(pres)
        assert rep.passed
        assert rep.witness["literal_flagged"] == ["d11c", "k1_1", "kh"]

    def test_literal_witnesses(self, pres):
        lit = audit_degrees(pres).witness["literal"]
        assert lit["kh"]["status"] == "unparseable"
        assert lit["d11c"] == {
            "status": "inhomogeneous", "offending": ["d111"], "degrees": [3, 4],
        }
        assert lit["k1_1"]["status"] == "inhomogeneous"
        assert "H*d1^3" in lit["k1_1"]["offending"]

    def test_literal_assignment_fails_audit(self, pres):
        q = with_assignment(pres, {"d11c": "literal", "k1_1": "inside", "kh": "plus"})
        assert not audit_degrees(q).passed

    def test_aliases_forced_by_degree(self, pres):
        forcing = alias_forcing(pres)
        assert forcing["d2"] == {"declared": "d11", "consistent": ["d11"], "forced": True}
        assert forcing["d3"] == {"declared": "d111", "consistent": ["d111"], "forced": True}


class TestOpenStratum:
    def test_low_relations_survive(self, pres):
        assert restrict_open_stratum(pres.relation("A2")) == parse("24*l1^2 - 48*l2", OPEN_STRATUM)
        assert restrict_open_stratum(pres.relation("A3")) == parse(
            "36*l1^3 - 92*l1*l2 + 56*l3", OPEN_STRATUM
        )
        assert restrict_open_stratum(pres.relation("A4")) == parse(
            "36*l1^4 - 92*l1^2*l2 + 56*l1*l3", OPEN_STRATUM
        )

    def test_boundary_relations_vanish(self, pres):
        for name in ("d1c", "k1_1", "d11c", "kh", "k11_3"):
            assert restrict_open_stratum(pres.relation(name)).is_zero()


class TestElimination:
    def test_primes_of_each_step(self, pres):
        q = pres
        seen = []
        for rel, var in m3bar.ELIMINATIONS:
            before = q
            q, step = eliminate_generator(q, rel, var)
            assert check_step(before, step)
            seen.append((step.variable, step.coefficient, sorted(step.primes)))
        assert seen == [
            ("l2", Fraction(-48), [2, 3]),
            ("d111", Fraction(72), [2, 3]),
            ("l3", Fraction(56), [2, 7]),
        ]
        assert q.table.names == ("l1", "H", "d1", "d11")

    def test_first_substitution(self, pres):
        _, step = eliminate_generator(pres, "A2", "l2")
        assert step.substitution == parse("1/2*l1^2", step.substitution.table)

    def test_not_eliminable(self, pres):
        with pytest.raises(NotEliminable):
            eliminate_generator(pres, "A2", "l1")
        with pytest.raises(NotEliminable):
            eliminate_generator(pres, "A2", "zz")

    def test_hilbert_function_preserved(self, pres, simplified):
        # eliminating a generator with a linear relation keeps the quotient
        assert tuple(hilbert_function(pres.polys(), 6, GENERATORS)) == simplified.hilbert

    def test_frozen_counts(self, simplified):
        assert simplified.counts == {3: 3, 4: 8}
        assert simplified.total == 11
        assert simplified.hilbert == (1, 3, 7, 10, 5, 0, 0)
        assert len(simplified.minimal) == 11
        assert "A3_1" in simplified.minimal

    def test_pull_back_generates_the_same_ideal(self, pres, simplified):
        assert same_ideal_after_elimination(pres, simplified)
        assert len(pull_back(simplified, pres)) == 14

    def test_other_elimination_order(self, pres, simplified):
        order = (("A3", "l3"), ("A2", "l2"), ("d1c", "d111"))
        other = rational_simplify(pres, order)
        assert ideal_equal(other.polys(), simplified.polys())
        assert other.counts == simplified.counts

    def test_minimal_subset_generates(self, simplified):
        assert ideal_equal(simplified.minimal_polys(), simplified.polys())


@pytest.fixture(scope="module")
def outcome(pres):
    with pytest.raises(UnresolvedPresentation) as info:
        resolve_variants(pres)
    return info.value


class TestVariantSearch:
    def test_sixteen_assignments(self, pres):
        assert len(variant_assignments(pres)) == 16

    def test_no_assignment_is_consistent(self, outcome):
        w = outcome.report.witness
        assert not outcome.report.passed
        assert w["homogeneous_assignments"] == 6
        assert w["consistent_assignments"] == 0

    def test_every_homogeneous_assignment_has_the_same_counts(self, outcome):
        rows = [a for a in outcome.report.witness["assignments"] if a["homogeneous"]]
        assert all(a["assignment"].startswith("d11c=with_d1") for a in rows)
        assert {a["minimal_total"] for a in rows} == {11}
        assert all(a["faber_counts"] == {3: 3, 4: 8} for a in rows)

    def test_sign_choice_changes_the_ideal(self, pres):
        plus = with_assignment(pres, {**pres.assignment(), "kh": "plus"})
        minus = with_assignment(pres, {**pres.assignment(), "kh": "minus"})
        assert not ideal_equal(plus.polys(), minus.polys())
