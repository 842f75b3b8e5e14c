"""Golden proof corpus: one accepted derivation per inference rule, one
deliberately broken variant per rule, and the Unit-bug fixture.

Every golden root sequent is semantically valid on every model the
validator accepts, so the corpus can be fuzzed against generated models
with an expected violation count of zero.  The handoff derivations use a
reflexive delegation for that reason: the general handoff sequent is not
pointwise valid (see tests/test_semantics.py for a demonstration), which
mirrors the unsettled status of the delegation rules.
"""

from __future__ import annotations

from .proofs import Derivation, NO_PARAMS, RuleId, RuleParams
from .syntax import (
    And, Application, Equals, Exists, FALSE, Forall, Group, Implies, Not, Or,
    Relation, Says, Sequent, Signature, Speaksfor, SpeaksforRestricted,
    Subprincipal, TRUE, Variable,
)

CORPUS_SIGNATURE = Signature(
    functions={"a": 0, "b": 0, "c": 0, "f": 1},
    relations={"r": 0, "s": 0, "q": 1},
)

A = Application("a")
B = Application("b")
C = Application("c")
R = Relation("r")
S = Relation("s")
X = Variable("x")
Y = Variable("y")


def q(t):
    return Relation("q", (t,))


def _seq(hyps, goal) -> Sequent:
    return Sequent.make(hyps, goal)


def _hyp(hyps, goal) -> Derivation:
    return Derivation(RuleId.HYP, _seq(hyps, goal))


def _node(rule, hyps, goal, premises=(), params=NO_PARAMS) -> Derivation:
    return Derivation(rule, _seq(hyps, goal), tuple(premises), params)


def golden_corpus() -> dict[str, Derivation]:
    """One checking derivation per rule, keyed by rule name."""
    d: dict[str, Derivation] = {}

    d["HYP"] = _hyp([R], R)

    d["WEAKEN"] = _node(
        RuleId.WEAKEN, [R, S], R, [_hyp([R], R)], RuleParams(weakened=S)
    )

    d["TRUE-I"] = _node(RuleId.TRUE_I, [], TRUE)

    d["FALSE-E"] = _node(RuleId.FALSE_E, [FALSE], R, [_hyp([FALSE], FALSE)])

    d["AND-I"] = _node(
        RuleId.AND_I, [R, S], And(R, S), [_hyp([R, S], R), _hyp([R, S], S)]
    )

    d["AND-E1"] = _node(
        RuleId.AND_E1, [And(R, S)], R, [_hyp([And(R, S)], And(R, S))]
    )
    d["AND-E2"] = _node(
        RuleId.AND_E2, [And(R, S)], S, [_hyp([And(R, S)], And(R, S))]
    )

    d["OR-I1"] = _node(RuleId.OR_I1, [R], Or(R, S), [_hyp([R], R)])
    d["OR-I2"] = _node(RuleId.OR_I2, [S], Or(R, S), [_hyp([S], S)])

    rr = Or(R, R)
    d["OR-E"] = _node(
        RuleId.OR_E, [rr], R,
        [_hyp([rr], rr), _hyp([rr, R], R), _hyp([rr, R], R)],
    )

    d["IMP-I"] = _node(RuleId.IMP_I, [], Implies(R, R), [_hyp([R], R)])

    d["IMP-E"] = _node(
        RuleId.IMP_E, [R, Implies(R, S)], S,
        [_hyp([R, Implies(R, S)], R), _hyp([R, Implies(R, S)], Implies(R, S))],
    )

    # not (r() and not r()), via exploding the conjunction.
    contradiction = And(R, Not(R))
    d["NOT-I"] = _node(
        RuleId.NOT_I, [], Not(contradiction),
        [_node(
            RuleId.NOT_E, [contradiction], FALSE,
            [
                _node(RuleId.AND_E1, [contradiction], R,
                      [_hyp([contradiction], contradiction)]),
                _node(RuleId.AND_E2, [contradiction], Not(R),
                      [_hyp([contradiction], contradiction)]),
            ],
        )],
    )

    d["NOT-E"] = _node(
        RuleId.NOT_E, [R, Not(R)], FALSE,
        [_hyp([R, Not(R)], R), _hyp([R, Not(R)], Not(R))],
    )

    all_y = Forall("y", q(Y))
    d["FORALL-I"] = _node(
        RuleId.FORALL_I, [all_y], Forall("x", q(X)),
        [_node(RuleId.FORALL_E, [all_y], q(X), [_hyp([all_y], all_y)],
               RuleParams(witness=X))],
    )

    all_x = Forall("x", q(X))
    d["FORALL-E"] = _node(
        RuleId.FORALL_E, [all_x], q(A), [_hyp([all_x], all_x)],
        RuleParams(witness=A),
    )

    d["EXISTS-I"] = _node(
        RuleId.EXISTS_I, [q(A)], Exists("x", q(X)), [_hyp([q(A)], q(A))],
        RuleParams(witness=A),
    )

    some_x = Exists("x", q(X))
    elim_rule = Forall("y", Implies(q(Y), R))
    ctx = [some_x, elim_rule]
    d["EXISTS-E"] = _node(
        RuleId.EXISTS_E, ctx, R,
        [
            _hyp(ctx, some_x),
            _node(
                RuleId.IMP_E, ctx + [q(X)], R,
                [
                    _hyp(ctx + [q(X)], q(X)),
                    _node(RuleId.FORALL_E, ctx + [q(X)], Implies(q(X), R),
                          [_hyp(ctx + [q(X)], elim_rule)],
                          RuleParams(witness=X)),
                ],
            ),
        ],
    )

    d["SAYS-LIFT"] = _node(
        RuleId.SAYS_LIFT, [Says(A, R)], Says(A, R), [_hyp([R], R)],
        RuleParams(principal=A),
    )

    d["SAYS-IDEM"] = _node(
        RuleId.SAYS_IDEM, [Says(A, R)], Says(A, Says(A, R)),
        [_hyp([Says(A, R)], Says(A, R))],
        RuleParams(principal=A),
    )

    # Necessitation, weakening, then pushing the context under the modality.
    necessitation = _node(
        RuleId.SAYS_LIFT, [], Says(A, TRUE),
        [_node(RuleId.TRUE_I, [], TRUE)],
        RuleParams(principal=A),
    )
    d["SAYS-PUSH"] = _node(
        RuleId.SAYS_PUSH, [Says(A, S)], Says(A, TRUE),
        [_node(RuleId.WEAKEN, [S], Says(A, TRUE), [necessitation],
               RuleParams(weakened=S))],
        RuleParams(principal=A),
    )

    d["EQ-REFL"] = _node(RuleId.EQ_REFL, [], Equals(A, A))

    ab = Equals(A, B)
    d["EQ-SYM"] = _node(RuleId.EQ_SYM, [ab], Equals(B, A), [_hyp([ab], ab)])

    bc = Equals(B, C)
    d["EQ-TRANS"] = _node(
        RuleId.EQ_TRANS, [ab, bc], Equals(A, C),
        [_hyp([ab, bc], ab), _hyp([ab, bc], bc)],
    )

    fa_fb = Equals(Application("f", (A,)), Application("f", (B,)))
    d["EQ-FUN-CONG"] = _node(
        RuleId.EQ_FUN_CONG, [ab], fa_fb, [_hyp([ab], ab)],
        RuleParams(symbol="f", args_before=(A,), args_after=(B,)),
    )

    d["EQ-REL-CONG"] = _node(
        RuleId.EQ_REL_CONG, [q(A), ab], q(B),
        [_hyp([q(A), ab], q(A)), _hyp([q(A), ab], ab)],
        RuleParams(symbol="q", args_before=(A,), args_after=(B,)),
    )

    # Reflexive instances: the general handoff sequent is not pointwise
    # valid, and the corpus must fuzz clean.
    aa = Speaksfor(A, A)
    d["HANDOFF"] = _node(
        RuleId.HANDOFF, [Says(A, aa)], aa, [_hyp([Says(A, aa)], Says(A, aa))]
    )

    aar = SpeaksforRestricted(A, A, "x", q(X))
    d["HANDOFF-R"] = _node(
        RuleId.HANDOFF_R, [Says(A, aar)], aar,
        [_hyp([Says(A, aar)], Says(A, aar))],
    )

    sf_ab = Speaksfor(A, B)
    d["SF-APP"] = _node(
        RuleId.SF_APP, [sf_ab, Says(A, R)], Says(B, R),
        [_hyp([sf_ab, Says(A, R)], sf_ab), _hyp([sf_ab, Says(A, R)], Says(A, R))],
    )

    sfr_ab = SpeaksforRestricted(A, B, "x", q(X))
    said = Says(A, q(C))
    d["SFR-APP"] = _node(
        RuleId.SFR_APP, [sfr_ab, said], Says(B, q(C)),
        [_hyp([sfr_ab, said], sfr_ab), _hyp([sfr_ab, said], said)],
        RuleParams(witness=C),
    )

    d["SF-REFL"] = _node(RuleId.SF_REFL, [], Speaksfor(A, A))
    d["SFR-REFL"] = _node(RuleId.SFR_REFL, [], SpeaksforRestricted(A, A, "x", q(X)))

    sf_bc = Speaksfor(B, C)
    d["SF-TRANS"] = _node(
        RuleId.SF_TRANS, [sf_ab, sf_bc], Speaksfor(A, C),
        [_hyp([sf_ab, sf_bc], sf_ab), _hyp([sf_ab, sf_bc], sf_bc)],
    )

    sfr_bc = SpeaksforRestricted(B, C, "x", q(X))
    d["SFR-TRANS"] = _node(
        RuleId.SFR_TRANS, [sfr_ab, sfr_bc], SpeaksforRestricted(A, C, "x", q(X)),
        [_hyp([sfr_ab, sfr_bc], sfr_ab), _hyp([sfr_ab, sfr_bc], sfr_bc)],
    )

    group = Group("x", q(X))
    d["GROUP-I"] = _node(
        RuleId.GROUP_I, [q(A)], Speaksfor(A, group), [_hyp([q(A)], q(A))]
    )

    everyone = Forall("y", Speaksfor(Y, B))
    d["GROUP-E"] = _node(
        RuleId.GROUP_E, [everyone], Speaksfor(group, B),
        [_node(RuleId.FORALL_E, [everyone, q(X)], Speaksfor(X, B),
               [_hyp([everyone, q(X)], everyone)],
               RuleParams(witness=X))],
    )

    d["SUBPRIN"] = _node(RuleId.SUBPRIN, [], Speaksfor(A, Subprincipal(A, B)))

    assert set(d) == {rule.value for rule in RuleId}
    return d


def _replace_goal(d: Derivation, goal) -> Derivation:
    return Derivation(d.rule, Sequent.make(d.conclusion.hyps, goal), d.premises, d.params)


def _replace_rule(d: Derivation, rule: RuleId) -> Derivation:
    return Derivation(rule, d.conclusion, d.premises, d.params)


def _replace_params(d: Derivation, params: RuleParams) -> Derivation:
    return Derivation(d.rule, d.conclusion, d.premises, params)


def _replace_hyps(d: Derivation, hyps) -> Derivation:
    return Derivation(d.rule, Sequent.make(hyps, d.conclusion.goal), d.premises, d.params)


def _replace_premise(d: Derivation, i: int, premise: Derivation) -> Derivation:
    premises = list(d.premises)
    premises[i] = premise
    return Derivation(d.rule, d.conclusion, tuple(premises), d.params)


def mutant_corpus() -> dict[str, Derivation]:
    """One rejected single-mutation variant per golden derivation: a rule id,
    a context formula, the goal, or a witness/parameter is changed."""
    g = golden_corpus()
    m: dict[str, Derivation] = {}

    m["HYP"] = _replace_goal(g["HYP"], S)
    m["WEAKEN"] = _replace_params(g["WEAKEN"], RuleParams(weakened=R))
    m["TRUE-I"] = _replace_goal(g["TRUE-I"], R)
    m["FALSE-E"] = _replace_hyps(g["FALSE-E"], [S])
    m["AND-I"] = _replace_rule(g["AND-I"], RuleId.AND_E1)
    m["AND-E1"] = _replace_goal(g["AND-E1"], S)
    m["AND-E2"] = _replace_goal(g["AND-E2"], R)
    m["OR-I1"] = _replace_goal(g["OR-I1"], Or(S, R))
    m["OR-I2"] = _replace_rule(g["OR-I2"], RuleId.OR_I1)
    or_e = g["OR-E"]
    m["OR-E"] = _replace_premise(
        or_e, 1, _replace_hyps(or_e.premises[1], [Or(R, R)])
    )
    m["IMP-I"] = _replace_goal(g["IMP-I"], Implies(S, R))
    m["IMP-E"] = _replace_goal(g["IMP-E"], R)
    m["NOT-I"] = _replace_goal(g["NOT-I"], Not(R))
    not_e = g["NOT-E"]
    m["NOT-E"] = _replace_premise(
        not_e, 1, _replace_goal(not_e.premises[1], Not(S))
    )
    forall_i = g["FORALL-I"]
    m["FORALL-I"] = _replace_premise(
        forall_i, 0, _replace_params(forall_i.premises[0], RuleParams(witness=A))
    )
    m["FORALL-E"] = _replace_params(g["FORALL-E"], RuleParams(witness=B))
    m["EXISTS-I"] = _replace_params(g["EXISTS-I"], RuleParams(witness=B))
    m["EXISTS-E"] = _replace_goal(g["EXISTS-E"], q(X))
    m["SAYS-LIFT"] = _replace_hyps(g["SAYS-LIFT"], [R])
    m["SAYS-IDEM"] = _replace_params(g["SAYS-IDEM"], RuleParams(principal=B))
    m["SAYS-PUSH"] = _replace_hyps(g["SAYS-PUSH"], [S])
    m["EQ-REFL"] = _replace_goal(g["EQ-REFL"], Equals(A, B))
    m["EQ-SYM"] = _replace_goal(g["EQ-SYM"], Equals(A, B))
    m["EQ-TRANS"] = _replace_goal(g["EQ-TRANS"], Equals(C, A))
    m["EQ-FUN-CONG"] = _replace_params(
        g["EQ-FUN-CONG"],
        RuleParams(symbol="f", args_before=(A,), args_after=(C,)),
    )
    m["EQ-REL-CONG"] = _replace_params(
        g["EQ-REL-CONG"],
        RuleParams(symbol="q", args_before=(B,), args_after=(B,)),
    )
    handoff = g["HANDOFF"]
    m["HANDOFF"] = _replace_premise(
        handoff, 0, _replace_goal(handoff.premises[0], Says(B, Speaksfor(A, A)))
    )
    m["HANDOFF-R"] = _replace_goal(
        g["HANDOFF-R"], SpeaksforRestricted(A, B, "x", q(X))
    )
    m["SF-APP"] = _replace_goal(g["SF-APP"], Says(A, R))
    m["SFR-APP"] = _replace_params(g["SFR-APP"], RuleParams(witness=B))
    m["SF-REFL"] = _replace_goal(g["SF-REFL"], Speaksfor(A, B))
    m["SFR-REFL"] = _replace_goal(
        g["SFR-REFL"], SpeaksforRestricted(A, B, "x", q(X))
    )
    m["SF-TRANS"] = _replace_goal(g["SF-TRANS"], Speaksfor(C, A))
    sfr_trans = g["SFR-TRANS"]
    m["SFR-TRANS"] = _replace_premise(
        sfr_trans, 1,
        _replace_goal(sfr_trans.premises[1], SpeaksforRestricted(B, C, "x", R)),
    )
    m["GROUP-I"] = _replace_goal(g["GROUP-I"], Speaksfor(A, Group("x", S)))
    m["GROUP-E"] = _replace_goal(
        g["GROUP-E"], Speaksfor(Group("x", q(X)), X)
    )
    m["SUBPRIN"] = _replace_goal(
        g["SUBPRIN"], Speaksfor(B, Subprincipal(A, B))
    )

    assert set(m) == set(g)
    return m


def unit_bug_derivation() -> Derivation:
    """The illegal derivation of ``r() => a() says r()``: a says-introduction
    whose conclusion keeps the raw context instead of lifting it, then an
    implication introduction.  The checker must reject the says step with a
    context mismatch."""
    bad_lift = _node(
        RuleId.SAYS_LIFT, [R], Says(A, R), [_hyp([R], R)],
        RuleParams(principal=A),
    )
    return _node(RuleId.IMP_I, [], Implies(R, Says(A, R)), [bad_lift])


def necessitation_derivation() -> Derivation:
    """The legal empty-context lift: from a theorem, conclude a worldview."""
    return _node(
        RuleId.SAYS_LIFT, [], Says(A, TRUE),
        [_node(RuleId.TRUE_I, [], TRUE)],
        RuleParams(principal=A),
    )
