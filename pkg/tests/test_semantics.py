"""Interpretation and validity judgment: clause-level examples, the Unit
countermodel, pattern equivalence, and the lemma-style properties."""

import random

import pytest

from nalkit.corpus import CORPUS_SIGNATURE
from nalkit.harness import (
    GenConfig, assemble_model, generate_model, handoff_gap_model,
    random_formula, random_term, trivial_model, unit_countermodel,
)
from nalkit.models import validate_model
from nalkit.semantics import (
    EvalError, EvalPoint, Evaluator, entails_at, equiv_worlds, holds,
    interpret_term, valid_everywhere, valuations,
)
from nalkit.surface import parse_formula
from nalkit.syntax import (
    And, Application, Equals, FALSE, Forall, Group, Implies, Not, Relation,
    Says, Sequent, Signature, Speaksfor, SpeaksforRestricted, TRUE, Variable,
    free_vars,
)

from test_models import bf_validate

UNIT_FORMULA = "not r() => p() says not r()"


class TestInterpretTerm:
    def test_variable_through_valuation(self):
        m = trivial_model()
        pt = EvalPoint(m, "w0", {"x": "i0"})
        assert interpret_term(pt, Variable("x")) == "i0"

    def test_unbound_variable(self):
        with pytest.raises(EvalError):
            interpret_term(EvalPoint(trivial_model(), "w0", {}), Variable("x"))

    def test_empty_group_is_bottom(self):
        m = unit_countermodel()
        pt = EvalPoint(m, "w0", {})
        group = Group("x", FALSE)
        assert interpret_term(pt, group) == m.structures["w0"].delta["bot"]

    def test_full_group_is_join_of_everyone(self):
        m = unit_countermodel()
        pt = EvalPoint(m, "w0", {})
        group = Group("x", TRUE)
        # Chain semilattice: the join of {bot, p1} is p1.
        assert interpret_term(pt, group) == m.structures["w0"].delta["p1"]

    def test_application_uses_world_table(self):
        m = unit_countermodel()
        pt = EvalPoint(m, "w1", {})
        assert interpret_term(pt, Application("p")) == "i1"

    def test_subprincipal_coerces_both_ways(self):
        m = assemble_model(
            n_worlds=1, principals=("bot", "p1"),
            nullary_functions={"a": "i1"},
            sub_targets={"p1": "p1"},
            signature=Signature(functions={"a": 0}, relations={}),
        )
        pt = EvalPoint(m, "w0", {})
        term = parse_term_local("a().a()")
        # sub(p1, i1) = p1, then delta gives back its representative.
        assert interpret_term(pt, term) == "i1"


def parse_term_local(text):
    from nalkit.surface import parse_term

    return parse_term(text)


class TestHoldsClauses:
    def test_true_everywhere(self):
        m = unit_countermodel()
        for w in m.worlds:
            assert holds(EvalPoint(m, w, {}), TRUE)

    def test_empty_access_makes_says_false_vacuous(self):
        m = trivial_model(Signature(functions={"p": 0}, relations={}))
        f = Says(Application("p"), FALSE)
        assert holds(EvalPoint(m, "w0", {}), f)

    def test_relation_membership(self):
        m = unit_countermodel()
        r = Relation("r")
        assert not holds(EvalPoint(m, "w0", {}), r)
        assert holds(EvalPoint(m, "w2", {}), r)

    def test_negation_looks_up(self):
        # not r() at w1 is false in the unit countermodel only via w1's
        # own successors; w1 has none above it except itself.
        m = unit_countermodel()
        assert holds(EvalPoint(m, "w1", {}), Not(Relation("r")))

    def test_equality_modulo_partition(self):
        m = assemble_model(
            n_worlds=1, principals=("bot",), domain_size=2,
            relations={"r": {}},
            nullary_functions={"a": "i0", "b": "i1"},
            eq={"w0": [["i0", "i1"]]},
            signature=Signature(functions={"a": 0, "b": 0}, relations={"r": 0}),
        )
        f = Equals(Application("a"), Application("b"))
        assert holds(EvalPoint(m, "w0", {}), f)


class TestUnitCountermodel:
    def test_model_validates_by_both_routes(self):
        m = unit_countermodel()
        assert validate_model(m).accepted
        assert bf_validate(m)

    def test_formula_fails_at_w0(self):
        # Hand-computed: not r() holds at w0 (r is false at w0 and w1),
        # but p says not r() fails at w0 because (w1, w2) is accessible
        # and r holds at w2.
        m = unit_countermodel()
        f = parse_formula(UNIT_FORMULA, m.signature)
        assert not holds(EvalPoint(m, "w0", {}), f)

    def test_formula_holds_at_w2(self):
        # At w2 the antecedent not r() is already false, so the
        # implication is vacuously true there.
        m = unit_countermodel()
        f = parse_formula(UNIT_FORMULA, m.signature)
        assert holds(EvalPoint(m, "w2", {}), f)

    def test_unit_sequent_not_valid(self):
        m = unit_countermodel()
        f = parse_formula(UNIT_FORMULA, m.signature)
        assert not valid_everywhere(m, Sequent.make([], f))


class TestEntailment:
    def test_identity_sequent(self):
        m = unit_countermodel()
        f = parse_formula("r()", m.signature)
        s = Sequent.make([f], f)
        for w in m.worlds:
            assert entails_at(EvalPoint(m, w, {}), s)

    def test_empty_entails_true(self):
        assert entails_at(EvalPoint(trivial_model(), "w0", {}),
                          Sequent.make([], TRUE))

    def test_valid_everywhere_true_and_false(self):
        m = trivial_model()
        assert valid_everywhere(m, Sequent.make([], TRUE))
        assert not valid_everywhere(m, Sequent.make([], FALSE))


class TestEquivWorlds:
    def test_reflexive(self):
        m = unit_countermodel()
        f = Relation("r")
        for w in m.worlds:
            assert equiv_worlds(m, "w0", "x", f, w, w)

    def test_true_pattern_relates_everything(self):
        m = unit_countermodel()
        for w1 in m.worlds:
            for w2 in m.worlds:
                assert equiv_worlds(m, "w0", "x", TRUE, w1, w2)

    def test_unary_pattern_separates_worlds(self):
        sig = Signature(functions={}, relations={"q": 1})
        m = assemble_model(
            n_worlds=2,
            relations={"q": {"w1": [("i0",)]}},
            signature=sig,
        )
        assert validate_model(m).accepted
        pattern = Relation("q", (Variable("x"),))
        # Independent oracle: evaluate both sides directly over the base
        # domain (x is the only free variable of the pattern).
        ev = Evaluator(m)
        for d in sorted(m.structures["w0"].domain):
            side0 = ev.holds("w0", {"x": d}, pattern)
            side1 = ev.holds("w1", {"x": d}, pattern)
            assert side0 != side1  # the extension genuinely differs
        assert not equiv_worlds(m, "w0", "x", pattern, "w0", "w1")


class TestDelegationClauses:
    def test_delegation_is_world_global(self):
        m = handoff_gap_model()
        f = parse_formula("a() =>> b()", m.signature)
        results = {holds(EvalPoint(m, w, {}), f) for w in m.worlds}
        assert results == {False}

    def test_handoff_sequent_fails_pointwise(self):
        # The general handoff inference is not pointwise valid: at w0 the
        # premise is vacuous while the conclusion ranges over all pairs.
        m = handoff_gap_model()
        assert validate_model(m).accepted and bf_validate(m)
        premise = parse_formula("b() says (a() =>> b())", m.signature)
        goal = parse_formula("a() =>> b()", m.signature)
        s = Sequent.make([premise], goal)
        assert holds(EvalPoint(m, "w0", {}), premise)
        assert not holds(EvalPoint(m, "w0", {}), goal)
        assert not entails_at(EvalPoint(m, "w0", {}), s)

    def test_restricted_reflexive_delegation_holds(self):
        m = unit_countermodel()
        f = SpeaksforRestricted(
            Application("p"), Application("p"), "x", Relation("r")
        )
        for w in m.worlds:
            assert holds(EvalPoint(m, w, {}), f)


class TestGroupDelegationMonotonicityGap:
    def test_group_delegator_can_lose_truth_upward(self):
        # Why the monotonicity property below excludes group terms: the
        # group's join grows along leq, and a delegation with the group on
        # the delegator side can flip from true to false.
        sig = Signature(functions={"b": 0}, relations={"q": 1})
        m = assemble_model(
            n_worlds=2, leq_extra=[("w0", "w1")],
            principals=("bot", "p2", "p1"),
            relations={"q": {"w1": [("i2",)]}},
            nullary_functions={"b": "i1"},
            access={
                "bot": [("w0", "w0"), ("w1", "w1")],
                "p2": [("w0", "w0"), ("w1", "w1")],
                "p1": [("w1", "w1")],
            },
            signature=sig,
        )
        assert validate_model(m).accepted and bf_validate(m)
        f = Speaksfor(
            Group("x", Relation("q", (Variable("x"),))), Application("b")
        )
        assert holds(EvalPoint(m, "w0", {}), f)
        assert not holds(EvalPoint(m, "w1", {}), f)


MODEL_POOL = [generate_model(GenConfig(seed=s)) for s in range(12)]


class TestLemmaStyleProperties:
    def test_truth_monotone_along_leq(self):
        rng = random.Random(11)
        checked = 0
        for i in range(120):
            m = MODEL_POOL[i % len(MODEL_POOL)]
            f = random_formula(rng, CORPUS_SIGNATURE, depth=3, allow_groups=False)
            ev = Evaluator(m)
            for w in m.worlds:
                for v in valuations(free_vars(f), m.struct(w).domain):
                    if ev.holds(w, v, f):
                        for w2 in m.above(w):
                            assert ev.holds(w2, v, f), (i, w, w2)
                    checked += 1
        assert checked > 0

    def test_unrestricted_delegation_implies_restricted(self):
        rng = random.Random(12)
        for i in range(60):
            m = MODEL_POOL[i % len(MODEL_POOL)]
            ev = Evaluator(m)
            t1 = random_term(rng, CORPUS_SIGNATURE, depth=1)
            t2 = random_term(rng, CORPUS_SIGNATURE, depth=1)
            if free_vars(t1) or free_vars(t2):
                continue
            plain = Speaksfor(t1, t2)
            for w in m.worlds:
                if ev.holds(w, {}, plain):
                    pattern = random_formula(
                        rng, CORPUS_SIGNATURE, scope=("x",), depth=2
                    )
                    restricted = SpeaksforRestricted(t1, t2, "x", pattern)
                    assert ev.holds(w, {}, restricted)

    def test_interpretation_stable_along_edges_for_group_free_terms(self):
        rng = random.Random(13)
        for i in range(120):
            m = MODEL_POOL[i % len(MODEL_POOL)]
            ev = Evaluator(m)
            t = random_term(rng, CORPUS_SIGNATURE, depth=2, allow_groups=False)
            if free_vars(t):
                continue
            edges = set()
            for w, v in m.leq:
                edges.add((w, v))
            for p in m.principals:
                edges |= m.access[p]
            for w, v in edges:
                left = ev.interpret(w, {}, t)
                right = ev.interpret(v, {}, t)
                assert m.same_at(v, left, right), (t, w, v)

    def test_emergent_atomic_unit(self):
        # For closed atomic formulas the unit implication is valid on
        # every accepted model: atoms grow along both relations.
        for m in MODEL_POOL:
            atom = Relation("r")
            f = Implies(atom, Says(Application("a"), atom))
            assert valid_everywhere(m, Sequent.make([], f))
