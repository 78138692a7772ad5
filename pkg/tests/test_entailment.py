import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from condlogic.coherence import Assessment, check_coherence
from condlogic.entailment import (
    HE,
    EntailmentError,
    classify_case,
    converse_check,
    deduction_theorem,
    deduction_theorem_generalized,
    general_import_export,
    incoherent_at_zero,
    p_consistent,
    p_entails,
    qc_witness,
    weak_deduction,
)
from condlogic.events import LogicError, Universe, atoms, gn_implies, implies, is_impossible

from strategies import conditionals

A, B, C, H = atoms("A", "B", "C", "H")
U3 = Universe(("A", "B", "C"))


class TestConsistency:
    def test_contradictory_events(self):
        assert not p_consistent([A, ~A])

    def test_coin(self):
        assert p_consistent([A.given(H), A.given(~H)])

    def test_single(self):
        assert p_consistent([B.given(A)])
        assert not p_consistent([(~A).given(A)])

    def test_empty(self):
        assert p_consistent([])

    @given(conditionals())
    def test_single_iff_possible(self, c):
        assert p_consistent([c], U3) == (not is_impossible(c.consequent & c.antecedent, U3))


SYSTEM_P = [
    ("CM", [C.given(A), B.given(A)], C.given(A & B), True),
    ("Cut", [C.given(A & B), B.given(A)], C.given(A), True),
    ("Or", [C.given(A), C.given(B)], C.given(A | B), True),
    ("transitivity", [C.given(B), B.given(A)], C.given(A), False),
    ("monotonicity", [C.given(A)], C.given(A & B), False),
    ("contraposition", [C.given(A)], (~A).given(~C), False),
    ("or-to-if", [A | B], B.given(~A), False),
]


class TestPEntails:
    @pytest.mark.parametrize("name,fam,concl,expected", SYSTEM_P, ids=[r[0] for r in SYSTEM_P])
    def test_system_p(self, name, fam, concl, expected):
        v = p_entails(fam, concl)
        assert v.entails is expected
        assert v.replay()

    def test_weak_transitivity(self):
        v = p_entails([C.given(B), B.given(A), A.given(A | B)], C.given(A))
        assert v.entails and v.replay()

    def test_transitivity_countermodel(self):
        v = p_entails([C.given(B), B.given(A)], C.given(A))
        assert v.witness.values == (1, 1, 0)
        assert v.describe_witness() == "countermodel (1/1, 1/1, 0/1)"
        assert v.certificate.coherent

    def test_self_conditional(self):
        v = p_entails([B.given(C)], A.given(A))
        assert v.witness == HE and v.describe_witness() == HE

    def test_witness_text(self):
        v = p_entails([C.given(A), B.given(A)], C.given(A & B))
        assert v.describe_witness() == "QC{C|A, B|A} ⊆ C|(A∧B)"

    def test_inconsistent_premises(self):
        with pytest.raises(EntailmentError):
            p_entails([A, ~A], B)

    def test_no_cross_oracle(self):
        assert p_entails([C.given(A), C.given(B)], C.given(A | B), cross_oracle=False).entails

    @given(conditionals(), conditionals())
    def test_single_premise(self, c1, c2):
        assume(p_consistent([c1], U3))
        expected = gn_implies(c1, c2, U3) or implies(c2.antecedent, c2.consequent, U3)
        assert p_entails([c1], c2, universe=U3).entails == expected

    @settings(max_examples=150)
    @given(st.lists(conditionals(), min_size=1, max_size=3), conditionals())
    def test_dual_characterizations(self, fam, concl):
        assume(p_consistent(fam, U3))
        assert (qc_witness(fam, concl, U3) is not None) == incoherent_at_zero(fam, concl, U3)

    @settings(max_examples=60)
    @given(st.lists(conditionals(), min_size=1, max_size=2), conditionals())
    def test_countermodel_replays(self, fam, concl):
        assume(p_consistent(fam, U3))
        v = p_entails(fam, concl, universe=U3)
        assert v.replay()
        if not v.entails:
            a = v.witness
            assert isinstance(a, Assessment) and a.values[-1] < 1
            assert check_coherence(a.family, a.values, U3).coherent


class TestConverse:
    def test_modus_ponens(self):
        r = converse_check([B.given(A)], A, B)
        assert r.applicable and r.holds

    def test_not_applicable(self):
        r = converse_check([~A], A, A)
        assert not r.applicable and r

    def test_disjunctive_syllogism(self):
        assert p_entails([A | B, ~A], B).entails

    def test_precondition(self):
        with pytest.raises(EntailmentError):
            converse_check([A | B], ~A, B)


class TestDeductionTheorem:
    def test_example_transitivity(self):
        r = deduction_theorem([C.given(B), B.given(A), A], A, C)
        assert r.holds
        assert [c.label for c in r.conclusions] == ["C|A", "A|C", "(A∧C)|(A∨C)"]
        assert r.equivalence == (True, True, True)

    def test_contraposition_recovered(self):
        r = deduction_theorem([C.given(A), ~C], ~C, ~A)
        assert r.holds
        assert r.conclusions[0].label == "~A|~C"

    def test_or_to_if_fails(self):
        r = deduction_theorem([A | B], ~A, B)
        assert not r.holds
        assert r.conclusions == ()
        assert r.failing == ("{A∨B} ⇒ₚ ~A",)
        assert str(r) == "hypothesis fails: {A∨B} ⇒ₚ ~A"

    def test_impossible(self):
        with pytest.raises(LogicError):
            deduction_theorem([A], A & ~A, B)

    @settings(max_examples=60)
    @given(st.lists(conditionals(), min_size=1, max_size=2),
           st.sampled_from([A, B, C, A | B, A & C, ~B]), st.sampled_from([A, B, C, B | C, ~A]))
    def test_remark_symmetry(self, gamma, a, b):
        assume(p_consistent(gamma, U3))
        r1 = deduction_theorem(gamma, a, b)
        r2 = deduction_theorem(gamma, b, a)
        assert r1.holds == r2.holds
        if r1.holds:
            assert {c.label for c in r1.conclusions[:2]} == {c.label for c in r2.conclusions[:2]}


class TestGeneralized:
    def test_self(self):
        r = deduction_theorem_generalized([A.given(H)], A.given(H), A.given(H))
        assert r.holds
        assert r.conclusions[0].label == "(A|H)|(A|H)"

    def test_cut_route_fails(self):
        r = deduction_theorem_generalized([C.given(A & B), B.given(A)], A, C.given(A & B))
        assert not r.holds
        assert "{C|(A∧B), B|A} ⇒ₚ A" in r.failing

    def test_reduction_case(self):
        r = deduction_theorem_generalized([B.given(A), A.given(A | B)], B.given(A), A.given(A | B))
        assert r.holds
        assert r.conclusions[-1].label == "(A∧B)|(A∨B)"
        assert p_entails([B.given(A), A.given(A | B)], (A & B).given(A | B)).entails


class TestWeakDeduction:
    def test_asymmetric(self):
        r = weak_deduction([C.given(B), B.given(A), A.given(A | B)], A, C, hstar=B)
        assert r.holds
        assert [c.label for c in r.conclusions] == ["C|A"]

    def test_cm_substitution(self):
        r = weak_deduction([C.given(A), B.given(A)], A & B, C, hstar=A)
        assert r.holds
        assert [c.label for c in r.conclusions] == ["C|(A∧B)"]

    def test_symmetric(self):
        r = weak_deduction([C.given(B), B.given(A), A.given(A | C)], A, C, mode="symmetric")
        assert r.holds
        assert [c.label for c in r.conclusions] == ["C|A", "A|C"]

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            weak_deduction([A], A, B, mode="both")


class TestImportExport:
    @pytest.mark.parametrize("fam,concl", [
        ([C.given(A), B.given(A)], C.given(A & B)),
        ([C.given(A & B), B.given(A)], C.given(A)),
        ([C.given(A), C.given(B)], C.given(A | B)),
    ], ids=["CM", "Cut", "Or"])
    def test_satisfied(self, fam, concl):
        r = general_import_export(fam, concl)
        assert r.satisfied
        assert str(r) == "satisfied, both sides 1"
        assert r.left.is_constant(1) and r.right.is_constant(1)

    def test_or_to_if(self):
        r = general_import_export([A | B], B.given(~A))
        assert not r.satisfied
        assert str(r) == "not established ((B|~A)|(A∨B) ≠ 1)"
        assert r.left.mu != 1

    def test_not_h_consistent(self):
        # A|A is entailed by anything, but {~A, A} is not p-consistent
        r = general_import_export([~A], A.given(A))
        assert r.entailment.entails and not r.h_consistent
        assert str(r) == "not established ({~A, A} is not p-consistent)"


class TestClassify:
    def test_a1(self):
        assert classify_case([A], B.given(~A)).label == "a.1"

    def test_a1_plain(self):
        # with a plain conclusion the antecedent is T, so the case is b.1
        assert classify_case([A], ~A).label == "b.1"

    def test_a2(self):
        c = classify_case([(A & B).given(A | B)], (~A | ~B).given(A & ~B))
        assert c.label == "a.2"

    def test_b2(self):
        assert classify_case([C.given(B), B.given(A)], C.given(A)).label == "b.2"

    def test_b3(self):
        assert classify_case([C.given(A), B.given(A)], C.given(A & B)).label == "b.3"

    @settings(max_examples=100)
    @given(st.lists(conditionals(), min_size=1, max_size=2), conditionals())
    def test_never_forbidden(self, fam, concl):
        assume(p_consistent(fam, U3))
        c = classify_case(fam, concl)
        assert c.label in {"a.1", "a.2", "b.1", "b.2", "b.3"}
        assert not (c.entails and c.h_consistent and not c.h_entails_e)
