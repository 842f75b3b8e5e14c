"""Natural-deduction proof checking.

A Derivation is a tree of rule applications.  Each node carries its full
conclusion sequent, the rule name, rule-specific parameters (witness
terms, principals, the weakened formula, congruence argument lists), and
its premise subtrees.  The checker validates every node locally against
the inference rules; it never unifies or searches, so checking is total
and fast.

Hypothesis contexts are compared as sets modulo alpha-equivalence.  The
three ``says`` rules demand the exact context shape ``p says Gamma``;
this exactness is what keeps the Unit formula ``phi => p says phi``
underivable while Necessitation (lifting a theorem into a worldview)
remains available.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .report import CheckReport, accept
from .surface import parse_formula, parse_term, render, render_term
from .syntax import (
    And, Application, Equals, Exists, FalseF, Forall, Formula, Group,
    Implies, Not, Or, Relation, Says, Sequent, Signature, Speaksfor,
    SpeaksforRestricted, Subprincipal, Term, TrueF, Variable,
    alpha_eq, alpha_key, free_vars, free_vars_of_all, substitute, well_formed,
)


class RuleId(enum.Enum):
    HYP = "HYP"
    WEAKEN = "WEAKEN"
    TRUE_I = "TRUE-I"
    FALSE_E = "FALSE-E"
    AND_I = "AND-I"
    AND_E1 = "AND-E1"
    AND_E2 = "AND-E2"
    OR_I1 = "OR-I1"
    OR_I2 = "OR-I2"
    OR_E = "OR-E"
    IMP_I = "IMP-I"
    IMP_E = "IMP-E"
    NOT_I = "NOT-I"
    NOT_E = "NOT-E"
    FORALL_I = "FORALL-I"
    FORALL_E = "FORALL-E"
    EXISTS_I = "EXISTS-I"
    EXISTS_E = "EXISTS-E"
    SAYS_LIFT = "SAYS-LIFT"
    SAYS_IDEM = "SAYS-IDEM"
    SAYS_PUSH = "SAYS-PUSH"
    EQ_REFL = "EQ-REFL"
    EQ_SYM = "EQ-SYM"
    EQ_TRANS = "EQ-TRANS"
    EQ_FUN_CONG = "EQ-FUN-CONG"
    EQ_REL_CONG = "EQ-REL-CONG"
    HANDOFF = "HANDOFF"
    HANDOFF_R = "HANDOFF-R"
    SF_APP = "SF-APP"
    SFR_APP = "SFR-APP"
    SF_REFL = "SF-REFL"
    SFR_REFL = "SFR-REFL"
    SF_TRANS = "SF-TRANS"
    SFR_TRANS = "SFR-TRANS"
    GROUP_I = "GROUP-I"
    GROUP_E = "GROUP-E"
    SUBPRIN = "SUBPRIN"


@dataclass(frozen=True)
class RuleParams:
    """Explicit payload for rules that need it; unused fields stay None."""

    witness: Term | None = None          # FORALL-E, EXISTS-I, SFR-APP
    principal: Term | None = None        # the three says rules
    weakened: Formula | None = None      # WEAKEN
    symbol: str | None = None            # EQ-FUN-CONG, EQ-REL-CONG
    args_before: tuple[Term, ...] | None = None
    args_after: tuple[Term, ...] | None = None


NO_PARAMS = RuleParams()


@dataclass(frozen=True)
class Derivation:
    rule: RuleId
    conclusion: Sequent
    premises: tuple["Derivation", ...] = ()
    params: RuleParams = NO_PARAMS


# Fixed premise counts; None marks the congruence rules whose count
# depends on the argument lists.
_ARITY: dict[RuleId, int | None] = {
    RuleId.HYP: 0, RuleId.WEAKEN: 1, RuleId.TRUE_I: 0, RuleId.FALSE_E: 1,
    RuleId.AND_I: 2, RuleId.AND_E1: 1, RuleId.AND_E2: 1,
    RuleId.OR_I1: 1, RuleId.OR_I2: 1, RuleId.OR_E: 3,
    RuleId.IMP_I: 1, RuleId.IMP_E: 2, RuleId.NOT_I: 1, RuleId.NOT_E: 2,
    RuleId.FORALL_I: 1, RuleId.FORALL_E: 1,
    RuleId.EXISTS_I: 1, RuleId.EXISTS_E: 2,
    RuleId.SAYS_LIFT: 1, RuleId.SAYS_IDEM: 1, RuleId.SAYS_PUSH: 1,
    RuleId.EQ_REFL: 0, RuleId.EQ_SYM: 1, RuleId.EQ_TRANS: 2,
    RuleId.EQ_FUN_CONG: None, RuleId.EQ_REL_CONG: None,
    RuleId.HANDOFF: 1, RuleId.HANDOFF_R: 1,
    RuleId.SF_APP: 2, RuleId.SFR_APP: 2,
    RuleId.SF_REFL: 0, RuleId.SFR_REFL: 0,
    RuleId.SF_TRANS: 2, RuleId.SFR_TRANS: 2,
    RuleId.GROUP_I: 1, RuleId.GROUP_E: 1, RuleId.SUBPRIN: 0,
}


def lift_says_context(principal: Term, ctx) -> frozenset:
    """The context ``p says Gamma``: every member wrapped in ``p says``."""
    return frozenset(Says(principal, phi) for phi in ctx)


# ---------------------------------------------------------------------------
# Local rule checking


def check_rule_application(node: Derivation, strict_group_e: bool = False) -> CheckReport:
    """Validate one inference step, assuming the premises were already
    checked individually."""
    report = CheckReport()
    for failure in _local_failures(node, strict_group_e):
        tag, reason = failure
        report.add("root", f"{node.rule.value} {reason}", tag)
    return report


def _local_failures(node: Derivation, strict_group_e: bool):
    rule = node.rule
    expected = _ARITY[rule]
    if expected is not None and len(node.premises) != expected:
        yield ("premise-count", f"expects {expected} premise(s), got {len(node.premises)}")
        return

    c = node.conclusion
    prems = [p.conclusion for p in node.premises]
    ctx = c.hyp_keys()
    params = node.params

    def same_ctx(*seqs) -> bool:
        return all(s.hyp_keys() == ctx for s in seqs)

    def ctx_plus(extra: Formula) -> frozenset:
        return ctx | {alpha_key(extra)}

    match rule:
        case RuleId.HYP:
            if alpha_key(c.goal) not in ctx:
                yield ("shape", "goal is not among the hypotheses")
        case RuleId.WEAKEN:
            if params.weakened is None:
                yield ("params", "missing the weakened formula parameter")
                return
            if not alpha_eq(prems[0].goal, c.goal):
                yield ("shape", "goal must match the premise goal")
            if ctx != prems[0].hyp_keys() | {alpha_key(params.weakened)}:
                yield ("context-mismatch",
                       "context mismatch: conclusion context is not premise "
                       "context plus the weakened formula")
        case RuleId.TRUE_I:
            if not isinstance(c.goal, TrueF):
                yield ("shape", "goal must be true")
        case RuleId.FALSE_E:
            if not isinstance(prems[0].goal, FalseF):
                yield ("shape", "premise goal must be false")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.AND_I:
            if not isinstance(c.goal, And):
                yield ("shape", "goal must be a conjunction")
                return
            if not alpha_eq(prems[0].goal, c.goal.left):
                yield ("shape", "first premise must prove the left conjunct")
            if not alpha_eq(prems[1].goal, c.goal.right):
                yield ("shape", "second premise must prove the right conjunct")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.AND_E1 | RuleId.AND_E2:
            if not isinstance(prems[0].goal, And):
                yield ("shape", "premise goal must be a conjunction")
                return
            kept = prems[0].goal.left if rule is RuleId.AND_E1 else prems[0].goal.right
            if not alpha_eq(c.goal, kept):
                yield ("shape", "goal must be the projected conjunct")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.OR_I1 | RuleId.OR_I2:
            if not isinstance(c.goal, Or):
                yield ("shape", "goal must be a disjunction")
                return
            injected = c.goal.left if rule is RuleId.OR_I1 else c.goal.right
            if not alpha_eq(prems[0].goal, injected):
                yield ("shape", "premise must prove the injected disjunct")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.OR_E:
            if not isinstance(prems[0].goal, Or):
                yield ("shape", "first premise goal must be a disjunction")
                return
            left, right = prems[0].goal.left, prems[0].goal.right
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with the disjunction premise")
            for i, disjunct in ((1, left), (2, right)):
                if prems[i].hyp_keys() != ctx_plus(disjunct):
                    yield ("context-mismatch",
                           f"branch premise {i} context must add the disjunct")
                if not alpha_eq(prems[i].goal, c.goal):
                    yield ("shape", f"branch premise {i} must prove the goal")
        case RuleId.IMP_I:
            if not isinstance(c.goal, Implies):
                yield ("shape", "goal must be an implication")
                return
            if prems[0].hyp_keys() != ctx_plus(c.goal.left):
                yield ("context-mismatch",
                       "premise context must add the antecedent")
            if not alpha_eq(prems[0].goal, c.goal.right):
                yield ("shape", "premise must prove the consequent")
        case RuleId.IMP_E:
            if not isinstance(prems[1].goal, Implies):
                yield ("shape", "second premise goal must be an implication")
                return
            if not alpha_eq(prems[0].goal, prems[1].goal.left):
                yield ("shape", "first premise must prove the antecedent")
            if not alpha_eq(c.goal, prems[1].goal.right):
                yield ("shape", "goal must be the consequent")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.NOT_I:
            if not isinstance(c.goal, Not):
                yield ("shape", "goal must be a negation")
                return
            if prems[0].hyp_keys() != ctx_plus(c.goal.body):
                yield ("context-mismatch", "premise context must add the negated formula")
            if not isinstance(prems[0].goal, FalseF):
                yield ("shape", "premise must prove false")
        case RuleId.NOT_E:
            if not isinstance(c.goal, FalseF):
                yield ("shape", "goal must be false")
            if not isinstance(prems[1].goal, Not):
                yield ("shape", "second premise goal must be a negation")
                return
            if not alpha_eq(prems[0].goal, prems[1].goal.body):
                yield ("shape", "premises must contradict")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.FORALL_I:
            if not isinstance(c.goal, Forall):
                yield ("shape", "goal must be universally quantified")
                return
            if not alpha_eq(prems[0].goal, c.goal.body):
                yield ("shape", "premise must prove the quantifier body")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
            if c.goal.var in free_vars_of_all(c.hyps):
                yield ("side-condition",
                       f"side condition violated: {c.goal.var!r} occurs free "
                       "in the hypotheses")
        case RuleId.FORALL_E:
            if not isinstance(prems[0].goal, Forall):
                yield ("shape", "premise goal must be universally quantified")
                return
            if params.witness is None:
                yield ("params", "missing witness term parameter")
                return
            instantiated = substitute(prems[0].goal.body, prems[0].goal.var, params.witness)
            if not alpha_eq(c.goal, instantiated):
                yield ("witness-mismatch",
                       "goal is not the body instantiated with the witness")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.EXISTS_I:
            if not isinstance(c.goal, Exists):
                yield ("shape", "goal must be existentially quantified")
                return
            if params.witness is None:
                yield ("params", "missing witness term parameter")
                return
            instantiated = substitute(c.goal.body, c.goal.var, params.witness)
            if not alpha_eq(prems[0].goal, instantiated):
                yield ("witness-mismatch",
                       "premise goal is not the body instantiated with the witness")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.EXISTS_E:
            if not isinstance(prems[0].goal, Exists):
                yield ("shape", "first premise goal must be existentially quantified")
                return
            var, body = prems[0].goal.var, prems[0].goal.body
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with the existential premise")
            if prems[1].hyp_keys() != ctx_plus(body):
                yield ("context-mismatch",
                       "second premise context must add the quantifier body")
            if not alpha_eq(prems[1].goal, c.goal):
                yield ("shape", "second premise must prove the goal")
            if var in free_vars_of_all(c.hyps) | free_vars(c.goal):
                yield ("side-condition",
                       f"side condition violated: {var!r} occurs free in the "
                       "hypotheses or the goal")
        case RuleId.SAYS_LIFT | RuleId.SAYS_IDEM | RuleId.SAYS_PUSH:
            yield from _check_says(rule, c, prems[0], params)
        case RuleId.EQ_REFL:
            if not isinstance(c.goal, Equals):
                yield ("shape", "goal must be an equality")
                return
            if not alpha_eq(c.goal.left, c.goal.right):
                yield ("shape", "goal must equate alpha-equal terms")
        case RuleId.EQ_SYM:
            if not isinstance(prems[0].goal, Equals) or not isinstance(c.goal, Equals):
                yield ("shape", "premise and goal must be equalities")
                return
            if not (alpha_eq(c.goal.left, prems[0].goal.right)
                    and alpha_eq(c.goal.right, prems[0].goal.left)):
                yield ("shape", "goal must be the flipped premise equality")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.EQ_TRANS:
            goals = [prems[0].goal, prems[1].goal, c.goal]
            if not all(isinstance(g, Equals) for g in goals):
                yield ("shape", "premises and goal must be equalities")
                return
            first, second, conc = goals
            if not alpha_eq(first.right, second.left):
                yield ("shape", "premise equalities do not chain")
            if not (alpha_eq(conc.left, first.left) and alpha_eq(conc.right, second.right)):
                yield ("shape", "goal must chain the premise equalities")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.EQ_FUN_CONG:
            yield from _check_fun_cong(c, prems, params, same_ctx)
        case RuleId.EQ_REL_CONG:
            yield from _check_rel_cong(c, prems, params, same_ctx)
        case RuleId.HANDOFF:
            if not isinstance(c.goal, Speaksfor):
                yield ("shape", "goal must be a delegation")
                return
            expected_premise = Says(c.goal.right, c.goal)
            if not alpha_eq(prems[0].goal, expected_premise):
                yield ("shape",
                       "premise must be the delegate saying the delegation")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.HANDOFF_R:
            if not isinstance(c.goal, SpeaksforRestricted):
                yield ("shape", "goal must be a restricted delegation")
                return
            expected_premise = Says(c.goal.right, c.goal)
            if not alpha_eq(prems[0].goal, expected_premise):
                yield ("shape",
                       "premise must be the delegate saying the delegation")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.SF_APP:
            if not isinstance(prems[0].goal, Speaksfor):
                yield ("shape", "first premise goal must be a delegation")
                return
            if not isinstance(prems[1].goal, Says) or not isinstance(c.goal, Says):
                yield ("shape", "second premise and goal must be says formulas")
                return
            sf = prems[0].goal
            if not alpha_eq(prems[1].goal.principal, sf.left):
                yield ("shape", "second premise speaker must be the delegator")
            if not alpha_eq(c.goal.principal, sf.right):
                yield ("shape", "goal speaker must be the delegate")
            if not alpha_eq(prems[1].goal.body, c.goal.body):
                yield ("shape", "premise and goal bodies must match")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.SFR_APP:
            if not isinstance(prems[0].goal, SpeaksforRestricted):
                yield ("shape", "first premise goal must be a restricted delegation")
                return
            if params.witness is None:
                yield ("params", "missing witness term parameter")
                return
            sfr = prems[0].goal
            target = substitute(sfr.pattern, sfr.var, params.witness)
            if not alpha_eq(prems[1].goal, Says(sfr.left, target)):
                yield ("witness-mismatch",
                       "second premise must be the delegator saying the "
                       "instantiated pattern")
            if not alpha_eq(c.goal, Says(sfr.right, target)):
                yield ("witness-mismatch",
                       "goal must be the delegate saying the instantiated pattern")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.SF_REFL:
            if not isinstance(c.goal, Speaksfor) or not alpha_eq(c.goal.left, c.goal.right):
                yield ("shape", "goal must be a reflexive delegation")
        case RuleId.SFR_REFL:
            if not isinstance(c.goal, SpeaksforRestricted) or not alpha_eq(
                c.goal.left, c.goal.right
            ):
                yield ("shape", "goal must be a reflexive restricted delegation")
        case RuleId.SF_TRANS:
            goals = [prems[0].goal, prems[1].goal, c.goal]
            if not all(isinstance(g, Speaksfor) for g in goals):
                yield ("shape", "premises and goal must be delegations")
                return
            first, second, conc = goals
            if not alpha_eq(first.right, second.left):
                yield ("shape", "premise delegations do not chain")
            if not (alpha_eq(conc.left, first.left) and alpha_eq(conc.right, second.right)):
                yield ("shape", "goal must chain the premise delegations")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.SFR_TRANS:
            goals = [prems[0].goal, prems[1].goal, c.goal]
            if not all(isinstance(g, SpeaksforRestricted) for g in goals):
                yield ("shape", "premises and goal must be restricted delegations")
                return
            first, second, conc = goals
            pat = Group(first.var, first.pattern)
            if not (alpha_eq(Group(second.var, second.pattern), pat)
                    and alpha_eq(Group(conc.var, conc.pattern), pat)):
                yield ("shape", "restriction patterns must agree")
            if not alpha_eq(first.right, second.left):
                yield ("shape", "premise delegations do not chain")
            if not (alpha_eq(conc.left, first.left) and alpha_eq(conc.right, second.right)):
                yield ("shape", "goal must chain the premise delegations")
            if not same_ctx(*prems):
                yield ("context-mismatch", "context mismatch with premises")
        case RuleId.GROUP_I:
            if not isinstance(c.goal, Speaksfor) or not isinstance(c.goal.right, Group):
                yield ("shape", "goal must delegate to a group")
                return
            group = c.goal.right
            membership = substitute(group.body, group.var, c.goal.left)
            if not alpha_eq(prems[0].goal, membership):
                yield ("witness-mismatch",
                       "premise must prove the group membership formula")
            if not same_ctx(prems[0]):
                yield ("context-mismatch", "context mismatch with premise")
        case RuleId.GROUP_E:
            if not isinstance(c.goal, Speaksfor) or not isinstance(c.goal.left, Group):
                yield ("shape", "goal must delegate from a group")
                return
            group = c.goal.left
            target = c.goal.right
            if prems[0].hyp_keys() != ctx_plus(group.body):
                yield ("context-mismatch",
                       "premise context must add the group membership formula")
            if not alpha_eq(prems[0].goal, Speaksfor(Variable(group.var), target)):
                yield ("shape",
                       "premise must delegate from the group variable to the target")
            if group.var in free_vars(target):
                yield ("side-condition",
                       f"side condition violated: {group.var!r} occurs free in "
                       "the delegation target")
            if strict_group_e and group.var in free_vars_of_all(c.hyps):
                yield ("side-condition",
                       f"strict mode: {group.var!r} occurs free in the hypotheses")
        case RuleId.SUBPRIN:
            if not isinstance(c.goal, Speaksfor) or not isinstance(
                c.goal.right, Subprincipal
            ):
                yield ("shape", "goal must delegate to a subprincipal")
                return
            if not alpha_eq(c.goal.right.parent, c.goal.left):
                yield ("shape", "subprincipal parent must be the delegator")
        case _:  # pragma: no cover
            yield ("shape", "unhandled rule")


def _check_says(rule: RuleId, c: Sequent, premise: Sequent, params: RuleParams):
    if params.principal is None:
        yield ("params", "missing principal term parameter")
        return
    p = params.principal

    if rule is RuleId.SAYS_PUSH:
        if not isinstance(premise.goal, Says) or not alpha_eq(premise.goal.principal, p):
            yield ("shape", "premise goal must be said by the principal")
            return
        if not alpha_eq(c.goal, premise.goal):
            yield ("shape", "goal must match the premise goal")
    else:
        if not isinstance(c.goal, Says) or not alpha_eq(c.goal.principal, p):
            yield ("shape", "goal must be said by the principal")
            return
        if rule is RuleId.SAYS_LIFT:
            if not alpha_eq(premise.goal, c.goal.body):
                yield ("shape", "premise must prove the said formula")
        else:  # SAYS-IDEM
            if not alpha_eq(premise.goal, c.goal.body):
                yield ("shape", "premise must prove the said formula")
            for hyp in premise.hyps:
                if not isinstance(hyp, Says) or not alpha_eq(hyp.principal, p):
                    yield ("context-mismatch",
                           "context mismatch: premise context is not of the "
                           "form p says Gamma")
                    return
            if premise.hyp_keys() != c.hyp_keys():
                yield ("context-mismatch",
                       "context mismatch: conclusion context must equal the "
                       "premise context")
            return

    # SAYS-LIFT and SAYS-PUSH: conclusion context is exactly p says (premise
    # context).
    lifted = frozenset(alpha_key(f) for f in lift_says_context(p, premise.hyps))
    if c.hyp_keys() != lifted:
        yield ("context-mismatch",
               "context mismatch: conclusion context is not p says applied to "
               "the premise context")


def _check_fun_cong(c: Sequent, prems, params: RuleParams, same_ctx):
    if params.symbol is None or params.args_before is None or params.args_after is None:
        yield ("params", "missing symbol/argument-list parameters")
        return
    before, after = params.args_before, params.args_after
    if len(before) != len(after):
        yield ("params", "argument lists must have equal length")
        return
    if len(prems) != len(before):
        yield ("premise-count",
               f"expects {len(before)} premise(s), got {len(prems)}")
        return
    expected = Equals(Application(params.symbol, before), Application(params.symbol, after))
    if not alpha_eq(c.goal, expected):
        yield ("shape", "goal must equate the two applications")
    for i, (b, a) in enumerate(zip(before, after)):
        if not alpha_eq(prems[i].goal, Equals(b, a)):
            yield ("shape", f"premise {i} must equate argument position {i}")
    if not same_ctx(*prems):
        yield ("context-mismatch", "context mismatch with premises")


def _check_rel_cong(c: Sequent, prems, params: RuleParams, same_ctx):
    if params.symbol is None or params.args_before is None or params.args_after is None:
        yield ("params", "missing symbol/argument-list parameters")
        return
    before, after = params.args_before, params.args_after
    if len(before) != len(after):
        yield ("params", "argument lists must have equal length")
        return
    if len(prems) != len(before) + 1:
        yield ("premise-count",
               f"expects {len(before) + 1} premise(s), got {len(prems)}")
        return
    if not alpha_eq(prems[0].goal, Relation(params.symbol, before)):
        yield ("shape", "first premise must be the relation on the old arguments")
    if not alpha_eq(c.goal, Relation(params.symbol, after)):
        yield ("shape", "goal must be the relation on the new arguments")
    for i, (b, a) in enumerate(zip(before, after)):
        if not alpha_eq(prems[i + 1].goal, Equals(b, a)):
            yield ("shape", f"premise {i + 1} must equate argument position {i}")
    if not same_ctx(*prems):
        yield ("context-mismatch", "context mismatch with premises")


# ---------------------------------------------------------------------------
# Whole-tree checking


def check_derivation(
    d: Derivation, sig: Signature, strict_group_e: bool = False
) -> CheckReport:
    """Check every node: formulas well-formed, one valid inference step each.
    All failures are aggregated with their node paths."""
    report = CheckReport()
    _check_tree(d, sig, strict_group_e, "root", report)
    return report


def _check_tree(node: Derivation, sig, strict_group_e, path, report: CheckReport):
    formulas = list(node.conclusion.hyps) + [node.conclusion.goal]
    for f in formulas:
        wf = well_formed(f, sig)
        for failure in wf.failures:
            report.add(path, f"ill-formed formula at {failure.path}: {failure.reason}",
                       "not-well-formed")
    local = check_rule_application(node, strict_group_e)
    for failure in local.failures:
        report.add(path, failure.reason, failure.tag)
    for i, premise in enumerate(node.premises):
        _check_tree(premise, sig, strict_group_e, f"{path}/{i}", report)


# ---------------------------------------------------------------------------
# JSON derivation files


def derivation_to_json(d: Derivation) -> dict:
    params: dict = {}
    if d.params.witness is not None:
        params["witness"] = render_term(d.params.witness)
    if d.params.principal is not None:
        params["principal"] = render_term(d.params.principal)
    if d.params.weakened is not None:
        params["weakened"] = render(d.params.weakened)
    if d.params.symbol is not None:
        params["symbol"] = d.params.symbol
    if d.params.args_before is not None:
        params["args_before"] = [render_term(t) for t in d.params.args_before]
    if d.params.args_after is not None:
        params["args_after"] = [render_term(t) for t in d.params.args_after]
    return {
        "rule": d.rule.value,
        "conclusion": {
            "hyps": sorted(render(h) for h in d.conclusion.hyps),
            "goal": render(d.conclusion.goal),
        },
        "params": params,
        "premises": [derivation_to_json(p) for p in d.premises],
    }


def derivation_from_json(data: dict, sig: Signature) -> Derivation:
    rule = RuleId(data["rule"])
    conclusion = Sequent.make(
        [parse_formula(h, sig) for h in data["conclusion"]["hyps"]],
        parse_formula(data["conclusion"]["goal"], sig),
    )
    raw = data.get("params", {})
    params = RuleParams(
        witness=parse_term(raw["witness"], sig) if "witness" in raw else None,
        principal=parse_term(raw["principal"], sig) if "principal" in raw else None,
        weakened=parse_formula(raw["weakened"], sig) if "weakened" in raw else None,
        symbol=raw.get("symbol"),
        args_before=tuple(parse_term(t, sig) for t in raw["args_before"])
        if "args_before" in raw else None,
        args_after=tuple(parse_term(t, sig) for t in raw["args_after"])
        if "args_after" in raw else None,
    )
    premises = tuple(derivation_from_json(p, sig) for p in data.get("premises", []))
    return Derivation(rule, conclusion, premises, params)


def load_derivation(path, sig: Signature) -> Derivation:
    with open(path, "r", encoding="utf-8") as fh:
        return derivation_from_json(json.load(fh), sig)


def save_derivation(path, d: Derivation) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(derivation_to_json(d), fh, indent=2, sort_keys=True)
        fh.write("\n")
