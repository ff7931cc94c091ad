from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import FIXTURES, FROZEN, connected_subsets, gram_model
from normsurf import (
    Condition,
    Divisor,
    Status,
    ample_on_itself,
    anti_ample_on,
    check_complementary_conditions,
    contraction_certificate,
    criteria_engine,
    is_almost_affine_complement,
    is_negative_definite,
    load_fixture,
    pair,
    positive_square_witness,
)
from normsurf.contract import covering_walk, is_connected
from normsurf.errors import NoSeed, NoWitness, PreconditionError, UnknownDivisor
from normsurf.mumford import pairings
from normsurf.surface import HYPOTHESIS_TAGS, SingularPoint


def chain_model():
    return gram_model([[1, 0, 0], [0, -2, 1], [0, 1, -2]], ["H", "E1", "E2"])


class TestNegativeDefinite:
    def test_examples(self, blowup):
        assert is_negative_definite(blowup, ["E"])
        assert not is_negative_definite(load_fixture("ruled_e2_nonsplit"), ["f"])
        assert is_negative_definite(chain_model(), ["E1", "E2"])

    def test_unknown(self, blowup):
        with pytest.raises(UnknownDivisor):
            is_negative_definite(blowup, ["nope"])


class TestAntiAmple:
    def test_examples(self):
        m = chain_model()
        assert anti_ample_on(m, ["E1"]) == Divisor({"E1": 1})
        assert pair(m, Divisor({"E1": 1}), Divisor({"E1": 1})) == -2
        d = anti_ample_on(m, ["E1", "E2"])
        assert d == Divisor({"E1": 1, "E2": 1})
        assert set(pairings(m, d, ["E1", "E2"]).values()) == {-1}
        assert anti_ample_on(load_fixture("blowup"), ["E"]) == Divisor({"E": 1})

    def test_preconditions(self, blowup):
        with pytest.raises(PreconditionError):
            anti_ample_on(blowup, ["H"])
        with pytest.raises(PreconditionError):
            anti_ample_on(load_fixture("finite_field"), ["E1", "E2"])

    @settings(max_examples=120, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda n: st.tuples(
        st.lists(st.integers(-4, -1), min_size=n, max_size=n),
        st.lists(st.integers(0, 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2),
    )))
    def test_random_negdef(self, data):
        diag, offs = data
        n = len(diag)
        g = [[0] * n for _ in range(n)]
        it = iter(offs)
        for i in range(n):
            g[i][i] = diag[i]
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = next(it)
        model = gram_model(g)
        names = model.downstairs
        if not (is_connected(model, names) and is_negative_definite(model, names)):
            return
        d = anti_ample_on(model, names)
        assert set(d.support) == set(names) and d.is_integral() and d.is_effective()
        assert all(v < 0 for v in pairings(model, d, names).values())


class TestPositiveSquare:
    def test_examples(self, blowup):
        two_h = Divisor({"H": 2})
        assert positive_square_witness(blowup, two_h) == two_h
        with pytest.raises(NoWitness):
            positive_square_witness(blowup, Divisor({"H": 1, "E": -1}))
        assert positive_square_witness(blowup, Divisor({"H": 2, "E": -1})) == two_h


class TestAmpleOnItself:
    def test_examples(self):
        one = gram_model([[1]])
        assert ample_on_itself(one, ["C0"]) == Divisor({"C0": 1})
        two = gram_model([[1, 1], [1, -1]], ["C1", "C2"])
        a = ample_on_itself(two, ["C1", "C2"])
        assert a == Divisor({"C1": 2, "C2": 1})
        assert pairings(two, a) == {"C1": 3, "C2": 1}
        assert tuple(FROZEN["inertia_ample_example"]) == (1, 0, 1)
        assert is_almost_affine_complement(two, ["C1", "C2"])

    def test_disconnected_fails_first(self):
        m = gram_model([[1, 0], [0, 1]])
        with pytest.raises(PreconditionError):
            ample_on_itself(m, ["C0", "C1"])

    def test_no_seed(self, blowup):
        with pytest.raises(NoSeed):
            ample_on_itself(blowup, ["E"])

    def test_walk_repeats_when_needed(self):
        m = gram_model([[-1, 1, 1], [1, -1, 0], [1, 0, -1]], ["B", "A", "C"])
        assert covering_walk(m, ("B", "A", "C"), "A") == ["A", "B", "C"]
        assert covering_walk(m, ("B", "A", "C"), "B") == ["B", "A", "B", "C"]

    @pytest.mark.parametrize("name", FIXTURES)
    def test_fixture_subsets(self, name):
        model = load_fixture(name)
        for sub in connected_subsets(model):
            if is_almost_affine_complement(model, sub):
                a = ample_on_itself(model, sub)
                assert set(a.support) == set(sub) and a.is_integral() and a.is_effective()
                assert all(v >= 1 for v in pairings(model, a, sub).values())
            else:
                with pytest.raises(NoSeed):
                    ample_on_itself(model, sub)


class TestAlmostAffine:
    def test_examples(self, blowup):
        assert is_almost_affine_complement(blowup, ["H"])
        assert not is_almost_affine_complement(blowup, ["E"])
        assert not is_almost_affine_complement(blowup, [])


class TestContractionCertificate:
    def test_blowup(self, blowup):
        v = contraction_certificate(blowup, ["E"])
        assert v.status is Status.CERTIFIED_CONTRACTIBLE and v.model_relative
        assert v.certificate == Divisor({"H": 1})

    @pytest.mark.parametrize("e", [1, 2, 3])
    def test_ruled_dichotomy(self, e):
        v = contraction_certificate(load_fixture(f"ruled_e{e}_nonsplit"), ["R"])
        assert v.status is Status.UNKNOWN and v.certificate is None
        assert not v.lp.feasible and v.lp.verify(v.lp_constraints)
        v = contraction_certificate(load_fixture(f"ruled_e{e}_split"), ["R"])
        assert v.status is Status.CERTIFIED_CONTRACTIBLE
        assert v.certificate == Divisor({"A": 1})

    def test_requires_negdef_connected(self, blowup):
        with pytest.raises(PreconditionError):
            contraction_certificate(blowup, ["H"])

    def test_infeasible_falls_through_to_rules(self):
        model = load_fixture("ruled_e2_charp")
        v = contraction_certificate(model, ["R"])
        assert v.status is Status.CERTIFIED_BY_RULE
        assert v.rule == "base_scheme_or_unipotent_cokernel"
        assert v.rule_trace[0].rule == "complementary_divisor" and not v.rule_trace[0].fired


class TestConditions:
    def test_blowup(self, blowup):
        rep = check_complementary_conditions(blowup, ["E"], Divisor({"H": 1}))
        assert rep.cartier_near_r is Condition.HOLDS
        assert rep.positivity is Condition.HOLDS
        assert rep.trivial_on_thickenings is Condition.UNKNOWN

    def test_unipotent_fact(self):
        model = load_fixture("ruled_e2_charp")
        rep = check_complementary_conditions(model, ["R"], Divisor({"f": 2, "R": 1}))
        assert rep.trivial_on_thickenings is Condition.HOLDS
        assert rep.positivity is Condition.HOLDS

    def test_negative_pairing_fails(self, blowup):
        rep = check_complementary_conditions(blowup, ["E"], Divisor({"H": 1, "E": 1}))
        assert rep.positivity is Condition.FAILS

    @pytest.mark.parametrize("rational", [True, False])
    def test_cartier_near_singular_point(self, rational):
        model = gram_model(
            [[-1, 1, 0], [1, -2, 0], [0, 0, 1]],
            ["D", "E", "H"],
            points=[SingularPoint("p", ("E",), rational)],
        )
        assert pair(model, Divisor({"D": 1}), Divisor({"D": 1})) == Fraction(-1, 2)
        assert check_complementary_conditions(model, ["D"], Divisor({"D": 1})).cartier_near_r is Condition.FAILS
        expected = Condition.HOLDS if rational else Condition.UNKNOWN
        assert check_complementary_conditions(model, ["D"], Divisor({"D": 2})).cartier_near_r is expected
        assert check_complementary_conditions(model, ["D"], Divisor({"H": 1})).cartier_near_r is expected


class TestCriteria:
    def test_finite_field(self):
        model = load_fixture("finite_field")
        for c in model.downstairs:
            if is_negative_definite(model, [c]):
                v = criteria_engine(model, [c])
                assert v.status is Status.CERTIFIED_BY_RULE and v.rule == "finite_ground_field"

    def test_h2_zero_canonical(self):
        model = load_fixture("blowup_h2")
        assert model.resolution.kvec[model.resolution.index("E")] == FROZEN["blowup_canonical_on_E"]
        v = criteria_engine(model, ["E"])
        assert v.rule == "irreducible_nonpositive_canonical"
        names = {h.name: h for line in v.rule_trace for h in line.hypotheses}
        assert names["K.R <= 0"].provenance == "computed" and "-1" in names["K.R <= 0"].detail
        assert names["field.h2_zero"].provenance == "field"

    def test_no_flags_unknown(self, blowup):
        v = criteria_engine(blowup, ["E"])
        assert v.status is Status.UNKNOWN
        assert [t.rule for t in v.rule_trace] == [
            "finite_ground_field",
            "irreducible_nonpositive_canonical",
            "canonical_plus_mR_not_effective",
            "canonical_plus_R_not_effective_char_p",
            "base_scheme_or_unipotent_cokernel",
        ]
        assert not any(t.fired for t in v.rule_trace)

    @pytest.mark.parametrize("tag,rule,char", [
        ("KplusmR_not_effective", "canonical_plus_mR_not_effective", 0),
        ("KplusR_not_effective", "canonical_plus_R_not_effective_char_p", 5),
        ("mR_in_base_scheme_all_m", "base_scheme_or_unipotent_cokernel", 0),
    ])
    def test_declared_tags_echoed(self, tag, rule, char):
        base = load_fixture("ruled_e2_nonsplit")
        facts = {tag} | ({"numerically_Q_factorial_at_R"} if rule.startswith("base") else set())
        model = replace(base, facts=frozenset(facts), field=replace(base.field, characteristic=char))
        v = criteria_engine(model, ["R"])
        assert v.status is Status.CERTIFIED_BY_RULE and v.rule == rule
        fired = v.rule_trace[-1]
        assert fired.fired and fired.rule == rule
        declared = [h for h in fired.hypotheses if h.provenance == "declared" and h.holds]
        assert declared and all(h.name in HYPOTHESIS_TAGS and h.name in model.facts for h in declared)

    def test_char_zero_branch_needs_char_p(self):
        base = load_fixture("ruled_e2_nonsplit")
        model = replace(base, facts=frozenset({"KplusR_not_effective"}))
        assert criteria_engine(model, ["R"]).status is Status.UNKNOWN

    def test_every_certified_trace_is_complete(self, fixtures):
        for model in fixtures.values():
            for sub in connected_subsets(model):
                if not is_negative_definite(model, sub):
                    continue
                v = criteria_engine(model, sub)
                if v.status is Status.CERTIFIED_BY_RULE:
                    assert v.rule_trace[-1].fired and v.rule_trace[-1].rule == v.rule
                    assert all(not t.fired for t in v.rule_trace[:-1])
                    for h in v.rule_trace[-1].hypotheses:
                        assert h.provenance in ("computed", "declared", "field")
                        if h.provenance == "declared":
                            assert h.holds == (h.name in model.facts)


def test_certificates_sound_on_all_fixtures(fixtures):
    for model in fixtures.values():
        for sub in connected_subsets(model):
            if not is_negative_definite(model, sub):
                continue
            v = contraction_certificate(model, sub)
            assert v.lp.verify(v.lp_constraints)
            if v.status is Status.CERTIFIED_CONTRACTIBLE:
                a = v.certificate
                assert a.is_effective() and not set(a.support) & set(sub)
                for c, val in pairings(model, a).items():
                    assert val == 0 if c in sub else val >= 1
