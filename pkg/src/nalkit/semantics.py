"""Term interpretation and the validity judgment over finite models.

Evaluation follows the clause-per-connective definition literally:

- implication, negation and universal quantification consult every world
  above the current one (universal quantification draws individuals from
  the successor world's domain);
- the existential draws from the current world's domain;
- ``p says phi`` consults, for every world above the current one, the
  worlds the principal considers possible there;
- delegation compares accessibility relations over all world pairs,
  independent of the current world;
- restricted delegation weakens that containment to membership up to the
  pattern-equivalence relation on worlds.

The principal named by a term is the current world's interpretation of
the term coerced through ``pi``.  Group principals interpret as the join
of every principal whose coerced individual satisfies the body.

Evaluation is pure; an Evaluator memoizes per model, so distinct models
may be evaluated in parallel.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .models import ModelError, NalModel, join_all
from .syntax import (
    And, Application, Equals, Exists, FalseF, Forall, Formula, Group,
    Implies, Node, Not, Or, Relation, Says, Sequent, Speaksfor,
    SpeaksforRestricted, Subprincipal, Term, TrueF, Variable,
    alpha_key, free_vars,
)


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class EvalPoint:
    model: NalModel
    world: str
    valuation: Mapping[str, str]


def valuations(variables, domain):
    """All total assignments of the given variables into the domain."""
    names = sorted(variables)
    for image in itertools.product(sorted(domain), repeat=len(names)):
        yield dict(zip(names, image))


class Evaluator:
    """Memoizing evaluator for one fixed model."""

    def __init__(self, model: NalModel):
        self.model = model
        self._holds: dict = {}
        self._equiv: dict = {}
        self._fv: dict = {}

    def _free(self, node: Node) -> frozenset[str]:
        out = self._fv.get(node)
        if out is None:
            out = free_vars(node)
            self._fv[node] = out
        return out

    # -- terms

    def interpret(self, world: str, v: Mapping[str, str], t: Term) -> str:
        m = self.model
        st = m.struct(world)
        match t:
            case Variable(name):
                try:
                    return v[name]
                except KeyError:
                    raise EvalError(f"unbound variable {name!r}") from None
            case Application(symbol, args):
                values = tuple(self.interpret(world, v, a) for a in args)
                try:
                    return st.functions[symbol][values]
                except KeyError:
                    raise EvalError(
                        f"no table entry for {symbol!r}{values!r} at {world!r}"
                    ) from None
            case Subprincipal(parent, child):
                principal = st.pi[self.interpret(world, v, parent)]
                individual = self.interpret(world, v, child)
                return st.delta[st.sub[(principal, individual)]]
            case Group(var, body):
                members = [
                    p for p in m.principals
                    if self.holds(world, {**v, var: st.delta[p]}, body)
                ]
                return st.delta[join_all(m, members)]
        raise TypeError(f"not a term: {t!r}")

    def _principal_of(self, world: str, v: Mapping[str, str], t: Term) -> str:
        st = self.model.struct(world)
        individual = self.interpret(world, v, t)
        try:
            return st.pi[individual]
        except KeyError:
            raise EvalError(
                f"individual {individual!r} not in the domain of {world!r}"
            ) from None

    # -- formulas

    def holds(self, world: str, v: Mapping[str, str], f: Formula) -> bool:
        key = (world, f, tuple(sorted((x, v[x]) for x in self._free(f))))
        cached = self._holds.get(key)
        if cached is None:
            cached = self._holds_uncached(world, dict(key[2]), f)
            self._holds[key] = cached
        return cached

    def _holds_uncached(self, world: str, v: dict[str, str], f: Formula) -> bool:
        m = self.model
        match f:
            case TrueF():
                return True
            case FalseF():
                return False
            case Relation(symbol, args):
                values = tuple(self.interpret(world, v, a) for a in args)
                return values in m.struct(world).relations.get(symbol, frozenset())
            case Equals(left, right):
                return m.same_at(
                    world, self.interpret(world, v, left), self.interpret(world, v, right)
                )
            case And(left, right):
                return self.holds(world, v, left) and self.holds(world, v, right)
            case Or(left, right):
                return self.holds(world, v, left) or self.holds(world, v, right)
            case Implies(left, right):
                return all(
                    not self.holds(w2, v, left) or self.holds(w2, v, right)
                    for w2 in m.above(world)
                )
            case Not(body):
                return not any(self.holds(w2, v, body) for w2 in m.above(world))
            case Forall(var, body):
                return all(
                    self.holds(w2, {**v, var: d}, body)
                    for w2 in m.above(world)
                    for d in sorted(m.struct(w2).domain)
                )
            case Exists(var, body):
                return any(
                    self.holds(world, {**v, var: d}, body)
                    for d in sorted(m.struct(world).domain)
                )
            case Says(principal, body):
                p = self._principal_of(world, v, principal)
                return all(
                    self.holds(w2, v, body)
                    for (w1, w2) in m.access[p]
                    if (world, w1) in m.leq
                )
            case Speaksfor(left, right):
                speaker = m.access[self._principal_of(world, v, left)]
                delegate = m.access[self._principal_of(world, v, right)]
                return delegate <= speaker
            case SpeaksforRestricted(left, right, var, pattern):
                speaker = m.access[self._principal_of(world, v, left)]
                delegate = m.access[self._principal_of(world, v, right)]
                return all(
                    any(
                        (w1, w3) in speaker
                        and self.equiv_worlds(w1, var, pattern, w2, w3)
                        for w3 in m.worlds
                    )
                    for (w1, w2) in delegate
                )
        raise TypeError(f"not a formula: {f!r}")

    # -- pattern equivalence on worlds

    def equiv_worlds(self, base: str, var: str, pattern: Formula,
                     w1: str, w2: str) -> bool:
        """Worlds agree on the pattern: for every individual of the base
        world, the two universally-valuated judgments coincide."""
        if w1 == w2:
            return True
        key = (base, w1, w2, alpha_key(Group(var, pattern)))
        cached = self._equiv.get(key)
        if cached is None:
            cached = self._equiv_uncached(base, var, pattern, w1, w2)
            self._equiv[key] = cached
        return cached

    def _equiv_uncached(self, base, var, pattern, w1, w2) -> bool:
        dom = self.model.struct(base).domain
        others = self._free(pattern) - {var}
        for d in sorted(dom):
            side1 = all(
                self.holds(w1, {**v, var: d}, pattern)
                for v in valuations(others, dom)
            )
            side2 = all(
                self.holds(w2, {**v, var: d}, pattern)
                for v in valuations(others, dom)
            )
            if side1 != side2:
                return False
        return True


# ---------------------------------------------------------------------------
# Operation-style wrappers


def interpret_term(pt: EvalPoint, t: Term) -> str:
    return Evaluator(pt.model).interpret(pt.world, pt.valuation, t)


def holds(pt: EvalPoint, f: Formula) -> bool:
    return Evaluator(pt.model).holds(pt.world, pt.valuation, f)


def equiv_worlds(m: NalModel, base: str, var: str, pattern: Formula,
                 w1: str, w2: str) -> bool:
    return Evaluator(m).equiv_worlds(base, var, pattern, w1, w2)


def entails_at(pt: EvalPoint, s: Sequent, ev: Evaluator | None = None) -> bool:
    """Pointwise entailment: all hypotheses holding implies the goal holds."""
    ev = ev or Evaluator(pt.model)
    if all(ev.holds(pt.world, pt.valuation, h) for h in s.hyps):
        return ev.holds(pt.world, pt.valuation, s.goal)
    return True


def valid_everywhere(m: NalModel, s: Sequent, ev: Evaluator | None = None) -> bool:
    """Entailment at every world under every valuation of the sequent's
    free variables into that world's domain."""
    ev = ev or Evaluator(m)
    fv = frozenset().union(free_vars(s.goal), *(free_vars(h) for h in s.hyps))
    for w in m.worlds:
        for v in valuations(fv, m.struct(w).domain):
            if not entails_at(EvalPoint(m, w, v), s, ev):
                return False
    return True


def falsifying_point(m: NalModel, s: Sequent, ev: Evaluator | None = None):
    """First (world, valuation) where the sequent entailment fails, if any."""
    ev = ev or Evaluator(m)
    fv = frozenset().union(free_vars(s.goal), *(free_vars(h) for h in s.hyps))
    for w in m.worlds:
        for v in valuations(fv, m.struct(w).domain):
            if not entails_at(EvalPoint(m, w, v), s, ev):
                return w, v
    return None
