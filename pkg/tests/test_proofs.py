"""Proof kernel: rule-by-rule checking, the Unit-bug rejection, structural
properties, and the JSON wire format."""

import json
import random

import pytest

from nalkit.corpus import (
    A, B, C, CORPUS_SIGNATURE, R, S, X, golden_corpus, mutant_corpus,
    necessitation_derivation, q, unit_bug_derivation,
)
from nalkit.proofs import (
    Derivation, RuleId, RuleParams, check_derivation, check_rule_application,
    derivation_from_json, derivation_to_json, lift_says_context,
)
from nalkit.syntax import (
    And, Forall, Group, Implies, Relation, Says, Sequent, Speaksfor, TRUE,
    Variable, alpha_eq,
)

SIG = CORPUS_SIGNATURE
GOLDEN = golden_corpus()
MUTANTS = mutant_corpus()


class TestLiftSaysContext:
    def test_wraps_every_member(self):
        lifted = lift_says_context(A, (R, S))
        assert lifted == frozenset({Says(A, R), Says(A, S)})

    def test_empty_context(self):
        assert lift_says_context(A, ()) == frozenset()

    def test_iterated_says(self):
        assert lift_says_context(A, (Says(A, R),)) == frozenset(
            {Says(A, Says(A, R))}
        )


class TestGoldenCorpus:
    @pytest.mark.parametrize("rule", sorted(GOLDEN))
    def test_golden_accepted(self, rule):
        report = check_derivation(GOLDEN[rule], SIG)
        assert report.accepted, f"{rule}: {report}"

    def test_covers_every_rule(self):
        assert {d.rule.value for d in GOLDEN.values()} == {r.value for r in RuleId}


class TestMutants:
    @pytest.mark.parametrize("rule", sorted(MUTANTS))
    def test_mutant_rejected(self, rule):
        report = check_derivation(MUTANTS[rule], SIG)
        assert not report.accepted, f"mutant of {rule} was accepted"


class TestUnitBug:
    def test_unit_derivation_rejected_with_context_mismatch(self):
        report = check_derivation(unit_bug_derivation(), SIG)
        assert not report.accepted
        says_failures = [f for f in report.failures if "SAYS-LIFT" in f.reason]
        assert says_failures, report
        assert any("context mismatch" in f.reason for f in says_failures)
        assert any(f.tag == "context-mismatch" for f in says_failures)

    def test_necessitation_accepted(self):
        assert check_derivation(necessitation_derivation(), SIG).accepted

    def test_spec_example_lift_shapes(self):
        premise = Derivation(RuleId.HYP, Sequent.make([R], R))
        good = Derivation(
            RuleId.SAYS_LIFT, Sequent.make([Says(A, R)], Says(A, R)),
            (premise,), RuleParams(principal=A),
        )
        bad = Derivation(
            RuleId.SAYS_LIFT, Sequent.make([R], Says(A, R)),
            (premise,), RuleParams(principal=A),
        )
        assert check_rule_application(good).accepted
        assert not check_rule_application(bad).accepted


class TestStructuralProperties:
    @pytest.mark.parametrize("rule", sorted(GOLDEN))
    def test_weakening_admissible(self, rule):
        d = GOLDEN[rule]
        extra = Relation("s")
        wrapped = Derivation(
            RuleId.WEAKEN,
            Sequent.make(d.conclusion.hyps + (extra,), d.conclusion.goal),
            (d,),
            RuleParams(weakened=extra),
        )
        assert check_derivation(wrapped, SIG).accepted

    def test_context_order_independence(self):
        rng = random.Random(7)
        for rule, d in GOLDEN.items():
            blob = derivation_to_json(d)
            _shuffle_hyps(blob, rng)
            reloaded = derivation_from_json(blob, SIG)
            assert check_derivation(reloaded, SIG).accepted, rule

    def test_contexts_match_modulo_alpha(self):
        # A hypothesis spelled with a different bound variable still counts.
        hyp_a = Forall("x", q(X))
        hyp_b = Forall("y", q(Variable("y")))
        d = Derivation(RuleId.HYP, Sequent.make([hyp_a], hyp_b))
        assert check_rule_application(d).accepted


def _shuffle_hyps(blob, rng):
    rng.shuffle(blob["conclusion"]["hyps"])
    for premise in blob["premises"]:
        _shuffle_hyps(premise, rng)


class TestGroupEStrictFlag:
    def _derivation_with_free_var_in_context(self):
        # Gamma contains q(x) with x also the group variable; allowed by
        # default, rejected under the strict flag.
        target = B
        group = Group("x", q(X))
        ctx = [q(X), Forall("y", Speaksfor(Variable("y"), B))]
        premise = Derivation(
            RuleId.FORALL_E,
            Sequent.make(ctx + [q(X)], Speaksfor(X, target)),
            (Derivation(RuleId.HYP, Sequent.make(ctx + [q(X)], ctx[1])),),
            RuleParams(witness=X),
        )
        return Derivation(
            RuleId.GROUP_E, Sequent.make(ctx, Speaksfor(group, target)), (premise,)
        )

    def test_default_accepts(self):
        d = self._derivation_with_free_var_in_context()
        assert check_derivation(d, SIG).accepted

    def test_strict_rejects(self):
        d = self._derivation_with_free_var_in_context()
        report = check_derivation(d, SIG, strict_group_e=True)
        assert not report.accepted
        assert any(f.tag == "side-condition" for f in report.failures)


class TestFailureReporting:
    def test_paths_locate_the_offending_node(self):
        report = check_derivation(unit_bug_derivation(), SIG)
        assert any(f.path == "root/0" for f in report.failures)

    def test_ill_formed_formula_reported(self):
        bad = Derivation(RuleId.TRUE_I, Sequent.make([Relation("zzz")], TRUE))
        report = check_derivation(bad, SIG)
        assert any(f.tag == "not-well-formed" for f in report.failures)

    def test_premise_count(self):
        d = Derivation(RuleId.AND_I, Sequent.make([], And(R, S)))
        report = check_rule_application(d)
        assert any(f.tag == "premise-count" for f in report.failures)


class TestJsonRoundTrip:
    @pytest.mark.parametrize("rule", sorted(GOLDEN))
    def test_round_trip_preserves_verdict(self, rule):
        blob = json.loads(json.dumps(derivation_to_json(GOLDEN[rule])))
        reloaded = derivation_from_json(blob, SIG)
        assert check_derivation(reloaded, SIG).accepted
        assert reloaded.rule == GOLDEN[rule].rule
        assert alpha_eq(reloaded.conclusion.goal, GOLDEN[rule].conclusion.goal)

    def test_format_shape(self):
        blob = derivation_to_json(GOLDEN["FORALL-E"])
        assert blob["rule"] == "FORALL-E"
        assert blob["params"]["witness"] == "a()"
        assert blob["conclusion"]["goal"] == "q(a())"
        assert isinstance(blob["conclusion"]["hyps"], list)
