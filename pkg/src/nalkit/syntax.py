"""Abstract syntax for authorization-logic terms and formulas.

Terms are variables, function applications, subprincipals (``a.b``) and
group principals (``{x : phi}``).  Formulas are the first-order
connectives and quantifiers plus term equality, the ``says`` modality,
delegation (``=>>``) and restricted delegation (``=>> on (x : phi)``).

Binding structure: ``Forall``/``Exists``/``Group``/``SpeaksforRestricted``
each bind exactly one variable.  Alpha-equivalence is decided through
``alpha_key``, a hashable de Bruijn encoding of the tree; hypothesis sets
and the proof kernel compare formulas through it.  Substitution is
capture-avoiding with a deterministic fresh-name scheme (stem plus the
smallest unused numeric suffix), so outputs are reproducible.

All values are immutable after construction and every operation here is a
pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .report import CheckReport, accept, reject

# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Application:
    symbol: str
    args: tuple["Term", ...] = ()


@dataclass(frozen=True)
class Subprincipal:
    parent: "Term"
    child: "Term"


@dataclass(frozen=True)
class Group:
    var: str
    body: "Formula"


Term = Union[Variable, Application, Subprincipal, Group]

# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Relation:
    symbol: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Says:
    principal: Term
    body: "Formula"


@dataclass(frozen=True)
class Speaksfor:
    left: Term
    right: Term


@dataclass(frozen=True)
class SpeaksforRestricted:
    left: Term
    right: Term
    var: str
    pattern: "Formula"


Formula = Union[
    TrueF, FalseF, Relation, Equals, And, Or, Implies, Not,
    Forall, Exists, Says, Speaksfor, SpeaksforRestricted,
]

TRUE = TrueF()
FALSE = FalseF()

Node = Union[Term, Formula]

# ---------------------------------------------------------------------------
# Signature


@dataclass(frozen=True)
class Signature:
    """Declared function and relation symbols with fixed arities.

    A name may be declared as both a function and a relation; occurrences
    are disambiguated by position (terms vs. formula atoms).
    """

    functions: dict[str, int]
    relations: dict[str, int]

    def __post_init__(self) -> None:
        for name, arity in list(self.functions.items()) + list(self.relations.items()):
            if arity < 0:
                raise ValueError(f"negative arity for symbol {name!r}")

    def to_json(self) -> dict:
        return {"functions": dict(self.functions), "relations": dict(self.relations)}

    @classmethod
    def from_json(cls, data: dict) -> "Signature":
        return cls(
            functions={str(k): int(v) for k, v in data.get("functions", {}).items()},
            relations={str(k): int(v) for k, v in data.get("relations", {}).items()},
        )


# ---------------------------------------------------------------------------
# Free variables


def free_vars(node: Node) -> frozenset[str]:
    """Variables with at least one free occurrence in the term or formula."""
    match node:
        case Variable(name):
            return frozenset((name,))
        case Application(_, args) | Relation(_, args):
            if not args:
                return frozenset()
            return frozenset().union(*(free_vars(a) for a in args))
        case Subprincipal(parent, child):
            return free_vars(parent) | free_vars(child)
        case Group(var, body):
            return free_vars(body) - {var}
        case TrueF() | FalseF():
            return frozenset()
        case Equals(left, right):
            return free_vars(left) | free_vars(right)
        case And(left, right) | Or(left, right) | Implies(left, right):
            return free_vars(left) | free_vars(right)
        case Not(body):
            return free_vars(body)
        case Forall(var, body) | Exists(var, body):
            return free_vars(body) - {var}
        case Says(principal, body):
            return free_vars(principal) | free_vars(body)
        case Speaksfor(left, right):
            return free_vars(left) | free_vars(right)
        case SpeaksforRestricted(left, right, var, pattern):
            return free_vars(left) | free_vars(right) | (free_vars(pattern) - {var})
    raise TypeError(f"not a term or formula: {node!r}")


def free_vars_of_all(nodes) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for n in nodes:
        out |= free_vars(n)
    return out


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_key(node: Node, _env: tuple[str, ...] = ()) -> tuple:
    """A hashable encoding that identifies trees up to renaming of bound
    variables: bound occurrences become de Bruijn distances, free ones keep
    their names."""
    match node:
        case Variable(name):
            for depth, bound in enumerate(reversed(_env)):
                if bound == name:
                    return ("bv", depth)
            return ("fv", name)
        case Application(symbol, args):
            return ("app", symbol, tuple(alpha_key(a, _env) for a in args))
        case Subprincipal(parent, child):
            return ("sub", alpha_key(parent, _env), alpha_key(child, _env))
        case Group(var, body):
            return ("group", alpha_key(body, _env + (var,)))
        case TrueF():
            return ("true",)
        case FalseF():
            return ("false",)
        case Relation(symbol, args):
            return ("rel", symbol, tuple(alpha_key(a, _env) for a in args))
        case Equals(left, right):
            return ("eq", alpha_key(left, _env), alpha_key(right, _env))
        case And(left, right):
            return ("and", alpha_key(left, _env), alpha_key(right, _env))
        case Or(left, right):
            return ("or", alpha_key(left, _env), alpha_key(right, _env))
        case Implies(left, right):
            return ("imp", alpha_key(left, _env), alpha_key(right, _env))
        case Not(body):
            return ("not", alpha_key(body, _env))
        case Forall(var, body):
            return ("forall", alpha_key(body, _env + (var,)))
        case Exists(var, body):
            return ("exists", alpha_key(body, _env + (var,)))
        case Says(principal, body):
            return ("says", alpha_key(principal, _env), alpha_key(body, _env))
        case Speaksfor(left, right):
            return ("sf", alpha_key(left, _env), alpha_key(right, _env))
        case SpeaksforRestricted(left, right, var, pattern):
            return (
                "sfr",
                alpha_key(left, _env),
                alpha_key(right, _env),
                alpha_key(pattern, _env + (var,)),
            )
    raise TypeError(f"not a term or formula: {node!r}")


def alpha_eq(a: Node, b: Node) -> bool:
    return alpha_key(a) == alpha_key(b)


def dedup_alpha(nodes) -> tuple:
    """Drop later members alpha-equivalent to an earlier one, keeping order."""
    seen: set[tuple] = set()
    out = []
    for n in nodes:
        k = alpha_key(n)
        if k not in seen:
            seen.add(k)
            out.append(n)
    return tuple(out)


# ---------------------------------------------------------------------------
# Substitution


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """Deterministic fresh variable: strip any numeric suffix from ``base``
    and append the smallest positive suffix not in ``avoid``."""
    stem = base.rstrip("0123456789") or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def _subst_binder(var_bound: str, body, var: str, replacement: Term):
    """Substitution under a one-variable binder; returns (new bound var, new body)."""
    repl_fv = free_vars(replacement)
    if var_bound in repl_fv:
        # Renaming is forced: the binder would capture a free variable of
        # the replacement.
        avoid = repl_fv | free_vars(body) | {var}
        renamed = fresh_name(var_bound, avoid)
        body = substitute(body, var_bound, Variable(renamed))
        var_bound = renamed
    return var_bound, substitute(body, var, replacement)


def substitute(node: Node, var: str, replacement: Term) -> Node:
    """Capture-avoiding substitution of ``replacement`` for every free
    occurrence of ``var``."""
    if var not in free_vars(node):
        return node
    match node:
        case Variable(name):
            return replacement if name == var else node
        case Application(symbol, args):
            return Application(symbol, tuple(substitute(a, var, replacement) for a in args))
        case Subprincipal(parent, child):
            return Subprincipal(
                substitute(parent, var, replacement), substitute(child, var, replacement)
            )
        case Group(bound, body):
            bound, body = _subst_binder(bound, body, var, replacement)
            return Group(bound, body)
        case Relation(symbol, args):
            return Relation(symbol, tuple(substitute(a, var, replacement) for a in args))
        case Equals(left, right):
            return Equals(substitute(left, var, replacement), substitute(right, var, replacement))
        case And(left, right):
            return And(substitute(left, var, replacement), substitute(right, var, replacement))
        case Or(left, right):
            return Or(substitute(left, var, replacement), substitute(right, var, replacement))
        case Implies(left, right):
            return Implies(
                substitute(left, var, replacement), substitute(right, var, replacement)
            )
        case Not(body):
            return Not(substitute(body, var, replacement))
        case Forall(bound, body):
            bound, body = _subst_binder(bound, body, var, replacement)
            return Forall(bound, body)
        case Exists(bound, body):
            bound, body = _subst_binder(bound, body, var, replacement)
            return Exists(bound, body)
        case Says(principal, body):
            return Says(substitute(principal, var, replacement), substitute(body, var, replacement))
        case Speaksfor(left, right):
            return Speaksfor(
                substitute(left, var, replacement), substitute(right, var, replacement)
            )
        case SpeaksforRestricted(left, right, bound, pattern):
            left = substitute(left, var, replacement)
            right = substitute(right, var, replacement)
            if var == bound:
                return SpeaksforRestricted(left, right, bound, pattern)
            bound, pattern = _subst_binder(bound, pattern, var, replacement)
            return SpeaksforRestricted(left, right, bound, pattern)
    raise TypeError(f"not a term or formula: {node!r}")


# ---------------------------------------------------------------------------
# Arity checking


def well_formed(node: Node, sig: Signature) -> CheckReport:
    """Accepts iff every applied symbol is declared with matching arity.

    Rejection names the first offending subterm by its path from the root.
    """
    problem = _first_arity_problem(node, sig, "root")
    if problem is None:
        return accept()
    return reject(*problem)


def _first_arity_problem(node: Node, sig: Signature, path: str):
    match node:
        case Variable(_) | TrueF() | FalseF():
            return None
        case Application(symbol, args):
            if symbol not in sig.functions:
                return (path, f"unknown function symbol {symbol!r}")
            if len(args) != sig.functions[symbol]:
                return (
                    path,
                    f"function {symbol!r} expects {sig.functions[symbol]} "
                    f"argument(s), got {len(args)}",
                )
            return _first_in_children(
                [(f"{path}/{symbol}.args[{i}]", a) for i, a in enumerate(args)], sig
            )
        case Relation(symbol, args):
            if symbol not in sig.relations:
                return (path, f"unknown relation symbol {symbol!r}")
            if len(args) != sig.relations[symbol]:
                return (
                    path,
                    f"relation {symbol!r} expects {sig.relations[symbol]} "
                    f"argument(s), got {len(args)}",
                )
            return _first_in_children(
                [(f"{path}/{symbol}.args[{i}]", a) for i, a in enumerate(args)], sig
            )
        case Subprincipal(parent, child):
            return _first_in_children(
                [(f"{path}/parent", parent), (f"{path}/child", child)], sig
            )
        case Group(_, body):
            return _first_arity_problem(body, sig, f"{path}/group-body")
        case Equals(left, right):
            return _first_in_children([(f"{path}/left", left), (f"{path}/right", right)], sig)
        case And(left, right) | Or(left, right) | Implies(left, right):
            return _first_in_children([(f"{path}/left", left), (f"{path}/right", right)], sig)
        case Not(body):
            return _first_arity_problem(body, sig, f"{path}/body")
        case Forall(_, body) | Exists(_, body):
            return _first_arity_problem(body, sig, f"{path}/body")
        case Says(principal, body):
            return _first_in_children(
                [(f"{path}/principal", principal), (f"{path}/body", body)], sig
            )
        case Speaksfor(left, right):
            return _first_in_children([(f"{path}/left", left), (f"{path}/right", right)], sig)
        case SpeaksforRestricted(left, right, _, pattern):
            return _first_in_children(
                [(f"{path}/left", left), (f"{path}/right", right), (f"{path}/pattern", pattern)],
                sig,
            )
    raise TypeError(f"not a term or formula: {node!r}")


def _first_in_children(children, sig: Signature):
    for child_path, child in children:
        problem = _first_arity_problem(child, sig, child_path)
        if problem is not None:
            return problem
    return None


# ---------------------------------------------------------------------------
# Sequents


@dataclass(frozen=True)
class Sequent:
    """Hypotheses (a finite set modulo alpha-equivalence) and a goal."""

    hyps: tuple[Formula, ...]
    goal: Formula

    @classmethod
    def make(cls, hyps, goal: Formula) -> "Sequent":
        return cls(dedup_alpha(hyps), goal)

    def hyp_keys(self) -> frozenset[tuple]:
        return frozenset(alpha_key(h) for h in self.hyps)

    def with_hyp(self, extra: Formula) -> "Sequent":
        return Sequent.make(self.hyps + (extra,), self.goal)


def same_context(a: Sequent, b: Sequent) -> bool:
    return a.hyp_keys() == b.hyp_keys()
