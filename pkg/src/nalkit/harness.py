"""Model generation, fixtures, soundness fuzzing, and countermodel search.

The generator samples candidate models from a family that satisfies the
non-negotiable conditions by construction: prefix domains growing along
the order, syntactic individual equality, constant coercions with the
principals pinned to the first pool individuals, world-constant function
values, chain semilattices, and access relations assembled from
frame-safe pieces.  ``repair_frame_conditions`` then satisfies any
remaining access existentials and the full validator gets the last word;
candidates the repair loop cannot fix are rejected and resampled.
Generation is deterministic per seed.  Models with coarser individual
equality are exercised through handcrafted fixtures instead.

``find_countermodel`` enumerates a documented canonical family
exhaustively: world-constant prefix domains, syntactic equality, constant
coercions, chain semilattices, and world-constant function tables, with
partial orders pruned up to isomorphism.  Reported exhaustion is relative
to that family.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CORPUS_SIGNATURE, golden_corpus, mutant_corpus, unit_bug_derivation
from .models import NalModel, WorldStructure, save_model, validate_model
from .proofs import save_derivation
from .report import CheckReport
from .semantics import EvalPoint, Evaluator, entails_at, valuations
from .syntax import (
    And, Application, Equals, Exists, FALSE, Forall, Formula, Group, Implies,
    Not, Or, Relation, Says, Sequent, Signature, Speaksfor,
    SpeaksforRestricted, Subprincipal, TRUE, Term, Variable, free_vars,
)


class GenerationError(Exception):
    pass


class RepairError(Exception):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int
    max_worlds: int = 4
    max_principals: int = 3
    max_domain: int = 3
    signature: Signature = CORPUS_SIGNATURE
    sample_count: int = 1
    max_attempts: int = 60

    def __post_init__(self):
        if min(self.max_worlds, self.max_principals, self.max_domain,
               self.sample_count) < 1:
            raise ValueError("all generation bounds must be at least 1")


# ---------------------------------------------------------------------------
# Assembly helpers


def _world_names(n: int) -> tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n))


def _principal_names(n: int) -> tuple[str, ...]:
    return ("bot",) + tuple(f"p{i}" for i in range(1, n))


def _individuals(n: int) -> tuple[str, ...]:
    return tuple(f"i{i}" for i in range(n))


def _reflexive_transitive(worlds, extra) -> frozenset[tuple[str, str]]:
    pairs = {(w, w) for w in worlds} | set(extra)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(pairs):
            for (c, d) in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    return frozenset(pairs)


def _chain_join(principals) -> dict[tuple[str, str], str]:
    rank = {p: i for i, p in enumerate(principals)}
    return {
        (p, q): (p if rank[p] >= rank[q] else q)
        for p in principals
        for q in principals
    }


def assemble_model(
    *,
    n_worlds: int,
    leq_extra=(),
    principals=("bot",),
    domain_size: int | None = None,
    relations=None,       # {symbol: {world: iterable of tuples}}
    nullary_functions=None,  # {symbol: individual or {world: individual}}
    unary_projections=(),    # symbols interpreted as the identity on individuals
    access=None,          # {principal: iterable of world pairs}
    sub_targets=None,     # {principal: principal}; defaults to the principal itself
    eq=None,              # {world: iterable of classes}; defaults to identity
    signature: Signature | None = None,
) -> NalModel:
    """Build a model with constant domains, constant coercions, and the
    chain semilattice; the workhorse behind fixtures and tests."""
    worlds = _world_names(n_worlds)
    size = max(domain_size or len(principals), len(principals))
    pool = _individuals(size)
    domain = frozenset(pool)
    delta = {p: pool[i] for i, p in enumerate(principals)}
    pi = {d: "bot" for d in pool}
    for p, d in delta.items():
        pi[d] = p
    sub_targets = sub_targets or {}
    relations = relations or {}
    nullary_functions = nullary_functions or {}

    structures = {}
    for w in worlds:
        rel_tables = {}
        for sym, per_world in relations.items():
            rel_tables[sym] = frozenset(tuple(t) for t in per_world.get(w, ()))
        fun_tables = {}
        for sym, value in nullary_functions.items():
            chosen = value[w] if isinstance(value, dict) else value
            fun_tables[sym] = {(): chosen}
        for sym in unary_projections:
            fun_tables[sym] = {(d,): d for d in pool}
        classes = (
            tuple(frozenset(cls) for cls in eq[w])
            if eq and w in eq
            else tuple(frozenset((d,)) for d in pool)
        )
        structures[w] = WorldStructure(
            domain=domain,
            eq=classes,
            relations=rel_tables,
            functions=fun_tables,
            sub={
                (p, d): sub_targets.get(p, p)
                for p in principals
                for d in pool
            },
            delta=delta,
            pi=pi,
        )
    access = access or {}
    return NalModel(
        worlds=worlds,
        leq=_reflexive_transitive(worlds, leq_extra),
        structures=structures,
        principals=tuple(principals),
        join=_chain_join(principals),
        bottom="bot",
        access={p: frozenset(access.get(p, ())) for p in principals},
        signature=signature,
    )


# ---------------------------------------------------------------------------
# Fixtures


def trivial_model(sig: Signature = CORPUS_SIGNATURE) -> NalModel:
    """One world, one principal, empty access, every function constant."""
    nullary = {s: "i0" for s, arity in sig.functions.items() if arity == 0}
    unary = tuple(s for s, arity in sig.functions.items() if arity == 1)
    return assemble_model(
        n_worlds=1,
        relations={s: {} for s in sig.relations},
        nullary_functions=nullary,
        unary_projections=unary,
        signature=sig,
    )


UNIT_SIGNATURE = Signature(functions={"p": 0}, relations={"r": 0})


def unit_countermodel() -> NalModel:
    """Falsifies ``not r() => p() says not r()`` at world w0: the fact
    ``not r()`` is settled on the branch above w0, but the principal can
    reach a world where ``r`` holds."""
    return assemble_model(
        n_worlds=3,
        leq_extra=[("w0", "w1")],
        principals=("bot", "p1"),
        relations={"r": {"w2": [()]}},
        nullary_functions={"p": "i1"},
        access={
            "p1": [("w1", "w2"), ("w2", "w2")],
            "bot": [("w1", "w2"), ("w2", "w2")],
        },
        signature=UNIT_SIGNATURE,
    )


HANDOFF_SIGNATURE = Signature(functions={"a": 0, "b": 0}, relations={})


def handoff_gap_model() -> NalModel:
    """A validated model where the general handoff sequent
    ``{ b() says (a() =>> b()) } |- a() =>> b()`` fails pointwise: at w0
    the premise is vacuous because the only access pair sits at an
    incomparable world, while the delegation claim ranges over all pairs."""
    return assemble_model(
        n_worlds=2,
        principals=("bot", "p1"),
        nullary_functions={"a": "i1", "b": "i0"},
        access={"bot": [("w1", "w1")], "p1": []},
        signature=HANDOFF_SIGNATURE,
    )


BAD_MODEL_TAGS = (
    "frame-F1", "frame-F2", "frame-IT", "frame-ID",
    "leq-monotonicity", "access-monotonicity", "semilattice",
    "join-access", "sub-access", "delta-injective",
)


def seeded_bad_models() -> dict[str, NalModel]:
    """One model per violated condition, keyed by the validator tag it
    must be rejected with."""
    sig = Signature(functions={}, relations={"r": 0})
    bad: dict[str, NalModel] = {}

    bad["frame-F1"] = assemble_model(
        n_worlds=2, leq_extra=[("w0", "w1")],
        relations={"r": {}},
        access={"bot": [("w0", "w0"), ("w0", "w1")]},
        signature=sig,
    )
    bad["frame-F2"] = assemble_model(
        n_worlds=2, leq_extra=[("w0", "w1")],
        relations={"r": {}},
        access={"bot": [("w1", "w0"), ("w0", "w0")]},
        signature=sig,
    )
    bad["frame-IT"] = assemble_model(
        n_worlds=3,
        relations={"r": {}},
        access={"bot": [("w0", "w1"), ("w1", "w1"), ("w1", "w2")]},
        signature=sig,
    )
    bad["frame-ID"] = assemble_model(
        n_worlds=2,
        relations={"r": {}},
        access={"bot": [("w0", "w1")]},
        signature=sig,
    )
    bad["leq-monotonicity"] = assemble_model(
        n_worlds=2, leq_extra=[("w0", "w1")],
        relations={"r": {"w0": [()]}},
        signature=sig,
    )
    bad["access-monotonicity"] = assemble_model(
        n_worlds=2,
        relations={"r": {"w0": [()]}},
        access={"bot": [("w0", "w1"), ("w1", "w1")]},
        signature=sig,
    )
    semilattice = assemble_model(
        n_worlds=1, principals=("bot", "p1"), relations={"r": {}}, signature=sig,
    )
    semilattice.join[("p1", "p1")] = "bot"
    bad["semilattice"] = semilattice
    bad["join-access"] = assemble_model(
        n_worlds=1, principals=("bot", "p1"),
        relations={"r": {}},
        access={"p1": [("w0", "w0")], "bot": []},
        signature=sig,
    )
    bad["sub-access"] = assemble_model(
        n_worlds=1, principals=("bot", "p1"),
        relations={"r": {}},
        access={"bot": [("w0", "w0")], "p1": []},
        sub_targets={"p1": "bot"},
        signature=sig,
    )
    delta_clash = assemble_model(
        n_worlds=1, principals=("bot", "p1"), relations={"r": {}}, signature=sig,
    )
    st = delta_clash.structures["w0"]
    delta_clash.structures["w0"] = WorldStructure(
        domain=st.domain, eq=st.eq, relations=st.relations,
        functions=st.functions, sub=st.sub,
        delta={"bot": "i0", "p1": "i0"},
        pi={"i0": "bot", "i1": "bot"},
    )
    bad["delta-injective"] = delta_clash

    assert set(bad) == set(BAD_MODEL_TAGS)
    return bad


# ---------------------------------------------------------------------------
# Frame-condition repair


def _containment_demands(m: NalModel) -> list[tuple[str, str]]:
    """(subset, superset) principal pairs required by the join table and
    the sub functions."""
    demands = []
    for p in m.principals:
        for q in m.principals:
            demands.append((m.join[(p, q)], p))
    for w in m.worlds:
        for (p, _d), q in m.structures[w].sub.items():
            demands.append((q, p))
    return demands


def _compatible_edge(m: NalModel, w1: str, w2: str) -> bool:
    """The access-monotonicity clauses that relation extension cannot fix:
    domain growth, equality refinement, and function agreement."""
    a, b = m.structures[w1], m.structures[w2]
    if not a.domain <= b.domain:
        return False
    index = b.eq_class_index()
    for cls in a.eq:
        if len({index[d] for d in cls}) > 1:
            return False
    for sym, table in a.functions.items():
        other = b.functions.get(sym)
        if other is None:
            return False
        for args, value in table.items():
            if not m.same_at(w1, value, other[args]):
                return False
    return True


def repair_frame_conditions(m: NalModel) -> NalModel:
    """Satisfy violated access existentials (F1, F2, IT, ID) and the
    containment demands by adding accessibility pairs, then restore
    relation monotonicity by extending relation extensions, iterating to a
    fixed point.  Raises RepairError when an addition would breach a
    constraint extension cannot fix."""
    access = {p: set(pairs) for p, pairs in m.access.items()}
    relations = {
        w: {sym: set(tuples) for sym, tuples in m.structures[w].relations.items()}
        for w in m.worlds
    }
    demands = _containment_demands(m)

    def add_pair(p: str, pair: tuple[str, str]) -> bool:
        if pair in access[p]:
            return False
        if not _compatible_edge(m, *pair):
            raise RepairError(
                f"cannot add {pair!r} to access[{p!r}]: the worlds disagree on "
                "domain, equality, or functions"
            )
        access[p].add(pair)
        return True

    max_rounds = len(m.worlds) ** 2 * max(1, len(m.principals)) * 4 + 8
    for _ in range(max_rounds):
        changed = False
        for sub_p, super_p in demands:
            for pair in list(access[sub_p]):
                if pair not in access[super_p]:
                    changed |= add_pair(super_p, pair)
        for p in m.principals:
            pairs = access[p]
            for w, v in list(pairs):
                for v2 in m.above(v):
                    if not any((w, w2) in m.leq and (w2, v2) in pairs
                               for w2 in m.worlds):
                        changed |= add_pair(p, (w, v2))  # F2, taking w' = w
            for w, v in list(pairs):
                for v2, u in list(pairs):
                    if v2 == v and not any(
                        (w, w2) in m.leq and (w2, u) in pairs for w2 in m.worlds
                    ):
                        changed |= add_pair(p, (w, u))  # IT, taking w' = w
            for w, u in list(pairs):
                if not any(
                    (w, w2) in m.leq and (w2, v) in pairs and (v, u) in pairs
                    for w2 in m.worlds for v in m.worlds
                ):
                    changed |= add_pair(p, (u, u))  # ID, taking v = u
            for w, v in list(pairs):
                for w2 in m.above(w):
                    if not any((v, v2) in m.leq and (w2, v2) in pairs
                               for v2 in m.worlds):
                        changed |= add_pair(p, (w2, v))  # F1, taking v' = v
        # Relation extension along access edges, propagated up leq and
        # closed pointwise under the equality partition.
        edges = {pair for pairs in access.values() for pair in pairs} | set(m.leq)
        for w1, w2 in edges:
            for sym, tuples in relations[w1].items():
                missing = tuples - relations[w2][sym]
                if missing:
                    relations[w2][sym] |= missing
                    changed = True
        for w in m.worlds:
            index = m.structures[w].eq_class_index()
            classes = m.structures[w].eq
            for sym, tuples in relations[w].items():
                closure = set()
                for t in tuples:
                    variants = [()]
                    for d in t:
                        variants = [
                            vt + (d2,) for vt in variants
                            for d2 in classes[index[d]]
                        ]
                    closure.update(variants)
                if closure - tuples:
                    relations[w][sym] = tuples | closure
                    changed = True
        if not changed:
            break
    else:
        raise RepairError("repair did not reach a fixed point")

    structures = {
        w: WorldStructure(
            domain=st.domain,
            eq=st.eq,
            relations={sym: frozenset(ts) for sym, ts in relations[w].items()},
            functions=st.functions,
            sub=st.sub,
            delta=st.delta,
            pi=st.pi,
        )
        for w, st in m.structures.items()
    }
    return NalModel(
        worlds=m.worlds,
        leq=m.leq,
        structures=structures,
        principals=m.principals,
        join=dict(m.join),
        bottom=m.bottom,
        access={p: frozenset(pairs) for p, pairs in access.items()},
        signature=m.signature,
    )


# ---------------------------------------------------------------------------
# Random model generation


def generate_model(cfg: GenConfig) -> NalModel:
    """A random validated model, deterministic per seed.  Gives up with a
    GenerationError after ``cfg.max_attempts`` rejected candidates."""
    rng = random.Random(cfg.seed)
    last_rejection = "none"
    for _attempt in range(cfg.max_attempts):
        candidate = _sample_candidate(rng, cfg)
        try:
            repaired = repair_frame_conditions(candidate)
        except RepairError as err:
            last_rejection = str(err)
            continue
        report = validate_model(repaired)
        if report.accepted:
            return repaired
        last_rejection = str(report.failures[0])
    raise GenerationError(
        f"gave up after {cfg.max_attempts} attempts (seed {cfg.seed}); "
        f"last rejection: {last_rejection}"
    )


def generate_models(cfg: GenConfig) -> list[NalModel]:
    """``cfg.sample_count`` models from independent per-index seeds, in
    deterministic (seed, index) order."""
    out = []
    for i in range(cfg.sample_count):
        sub = GenConfig(
            seed=cfg.seed * 100003 + i,
            max_worlds=cfg.max_worlds,
            max_principals=cfg.max_principals,
            max_domain=cfg.max_domain,
            signature=cfg.signature,
            sample_count=1,
            max_attempts=cfg.max_attempts,
        )
        out.append(generate_model(sub))
    return out


def _sample_candidate(rng: random.Random, cfg: GenConfig) -> NalModel:
    n_worlds = rng.randint(1, cfg.max_worlds)
    worlds = _world_names(n_worlds)
    extra = [
        (worlds[i], worlds[j])
        for i in range(n_worlds)
        for j in range(i + 1, n_worlds)
        if rng.random() < 0.4
    ]
    leq = _reflexive_transitive(worlds, extra)

    n_principals = rng.randint(1, cfg.max_principals)
    principals = _principal_names(n_principals)

    pool_size = max(cfg.max_domain, n_principals)
    pool = _individuals(pool_size)

    # Domain sizes grow along leq; domains are prefixes of the pool, so the
    # principals' representatives exist everywhere.
    sizes: dict[str, int] = {}
    for w in worlds:
        floor = max(
            [sizes[v] for v in worlds if (v, w) in leq and v != w and v in sizes],
            default=n_principals,
        )
        bump = rng.random() < 0.35 and floor < pool_size
        sizes[w] = floor + (1 if bump else 0)
    domains = {w: frozenset(pool[: sizes[w]]) for w in worlds}

    # One value per (function, argument tuple), drawn from the smallest
    # prefix containing the arguments; every world then shares the element,
    # which settles congruence and both monotonicity clauses.
    fun_values: dict[tuple[str, tuple[str, ...]], str] = {}
    for sym, arity in sorted(cfg.signature.functions.items()):
        for args in itertools.product(pool, repeat=arity):
            need = max([pool.index(a) + 1 for a in args], default=1)
            need = max(need, 1)
            fun_values[(sym, args)] = pool[rng.randrange(need)]

    # Relation extensions: inherited up leq plus sparse new tuples.
    relations: dict[str, dict[str, set[tuple[str, ...]]]] = {
        w: {sym: set() for sym in cfg.signature.relations} for w in worlds
    }
    for w in worlds:
        for sym, arity in cfg.signature.relations.items():
            tuples = set()
            for v in worlds:
                if v != w and (v, w) in leq:
                    tuples |= relations[v][sym]
            for t in itertools.product(sorted(domains[w]), repeat=arity):
                if rng.random() < 0.25:
                    tuples.add(t)
            relations[w][sym] = tuples

    delta = {p: pool[i] for i, p in enumerate(principals)}
    pi_map = {d: "bot" for d in pool}
    for p, d in delta.items():
        pi_map[d] = p
    sub_choice = {p: rng.choice(principals[i:]) for i, p in enumerate(principals)}

    structures = {
        w: WorldStructure(
            domain=domains[w],
            eq=tuple(frozenset((d,)) for d in sorted(domains[w])),
            relations={sym: frozenset(ts) for sym, ts in relations[w].items()},
            functions={
                sym: {
                    args: fun_values[(sym, args)]
                    for args in itertools.product(sorted(domains[w]), repeat=arity)
                }
                for sym, arity in cfg.signature.functions.items()
            },
            sub={(p, d): sub_choice[p] for p in principals for d in domains[w]},
            delta=delta,
            pi={d: pi_map[d] for d in domains[w]},
        )
        for w in worlds
    }
    model = NalModel(
        worlds=worlds,
        leq=leq,
        structures=structures,
        principals=principals,
        join=_chain_join(principals),
        bottom="bot",
        access={p: frozenset() for p in principals},
        signature=cfg.signature,
    )

    compatible = [
        (w1, w2)
        for w1 in worlds
        for w2 in worlds
        if sizes[w1] <= sizes[w2]
    ]
    access = _sample_access(rng, model, compatible)
    return NalModel(
        worlds=worlds,
        leq=leq,
        structures=structures,
        principals=principals,
        join=model.join,
        bottom="bot",
        access=access,
        signature=cfg.signature,
    )


def _up_closed(rng: random.Random, m: NalModel) -> set[str]:
    seed_worlds = [w for w in m.worlds if rng.random() < 0.5]
    out = set(seed_worlds)
    for w in seed_worlds:
        out.update(m.above(w))
    return out


def _sample_access(rng, m: NalModel, compatible) -> dict[str, frozenset]:
    """Access relations, sampled at the top of the principal chain first so
    the required antitone containments hold by construction."""
    comp = set(compatible)

    def safe_piece() -> set[tuple[str, str]]:
        kind = rng.random()
        if kind < 0.3:
            return set()
        if kind < 0.7:
            s = _up_closed(rng, m)
            return {(w, w) for w in s if (w, w) in comp}
        xs, ys = _up_closed(rng, m), _up_closed(rng, m)
        if not xs & ys:
            return set()
        piece = {(w, v) for w in xs for v in ys}
        if piece <= comp:
            return piece
        return set()

    access: dict[str, frozenset] = {}
    higher: set[tuple[str, str]] = set()
    for p in reversed(m.principals):
        pairs = set(higher) | safe_piece()
        if rng.random() < 0.25 and comp:
            pairs.add(rng.choice(sorted(comp)))
        access[p] = frozenset(pairs)
        higher = pairs
    return access


# ---------------------------------------------------------------------------
# Random formulas and terms


def random_term(rng: random.Random, sig: Signature, scope=(), depth: int = 2,
                allow_groups: bool = True) -> Term:
    choices = ["app"]
    if scope:
        choices.append("var")
    if depth > 0:
        choices += ["app", "subprin"]
        if allow_groups:
            choices.append("group")
    kind = rng.choice(choices)
    if kind == "var":
        return Variable(rng.choice(sorted(scope)))
    if kind == "subprin":
        return Subprincipal(
            random_term(rng, sig, scope, depth - 1, allow_groups),
            random_term(rng, sig, scope, depth - 1, allow_groups),
        )
    if kind == "group":
        var = f"g{depth}"
        return Group(
            var,
            random_formula(rng, sig, tuple(scope) + (var,), 1, allow_groups),
        )
    nullary = sorted(s for s, a in sig.functions.items() if a == 0)
    symbol = rng.choice(sorted(sig.functions))
    if depth <= 0 and sig.functions[symbol] > 0 and nullary:
        symbol = rng.choice(nullary)
    arity = sig.functions[symbol]
    return Application(symbol, tuple(
        random_term(rng, sig, scope, depth - 1, allow_groups) for _ in range(arity)
    ))


def random_formula(rng: random.Random, sig: Signature, scope=(), depth: int = 3,
                   allow_groups: bool = True) -> Formula:
    def term(d: int = 1) -> Term:
        return random_term(rng, sig, scope, d, allow_groups)

    atoms = ["true", "false", "rel", "eq", "sf"]
    if depth <= 0:
        kind = rng.choice(atoms)
    else:
        kind = rng.choice(
            atoms + ["and", "or", "implies", "not", "forall", "exists",
                     "says", "sfr"]
        )
    match kind:
        case "true":
            return TRUE
        case "false":
            return FALSE
        case "rel":
            symbol = rng.choice(sorted(sig.relations))
            return Relation(
                symbol, tuple(term() for _ in range(sig.relations[symbol]))
            )
        case "eq":
            return Equals(term(), term())
        case "sf":
            return Speaksfor(term(), term())
        case "and":
            return And(
                random_formula(rng, sig, scope, depth - 1, allow_groups),
                random_formula(rng, sig, scope, depth - 1, allow_groups),
            )
        case "or":
            return Or(
                random_formula(rng, sig, scope, depth - 1, allow_groups),
                random_formula(rng, sig, scope, depth - 1, allow_groups),
            )
        case "implies":
            return Implies(
                random_formula(rng, sig, scope, depth - 1, allow_groups),
                random_formula(rng, sig, scope, depth - 1, allow_groups),
            )
        case "not":
            return Not(random_formula(rng, sig, scope, depth - 1, allow_groups))
        case "forall" | "exists":
            var = f"v{depth}"
            body = random_formula(
                rng, sig, tuple(scope) + (var,), depth - 1, allow_groups
            )
            return Forall(var, body) if kind == "forall" else Exists(var, body)
        case "says":
            return Says(term(), random_formula(rng, sig, scope, depth - 1, allow_groups))
        case "sfr":
            var = f"v{depth}"
            return SpeaksforRestricted(
                term(), term(), var,
                random_formula(rng, sig, tuple(scope) + (var,), depth - 1,
                               allow_groups),
            )
    raise AssertionError(kind)


# ---------------------------------------------------------------------------
# Soundness fuzzing


@dataclass
class SoundnessReport:
    proofs: int
    models: int
    points_checked: int
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "proofs": self.proofs,
            "models": self.models,
            "points_checked": self.points_checked,
            "violations": self.violations,
            "passed": self.passed,
        }

    def text(self) -> str:
        lines = [
            f"soundness: {self.proofs} proof(s) x {self.models} model(s), "
            f"{self.points_checked} point(s) checked",
        ]
        if self.passed:
            lines.append("no violations")
        else:
            lines.append(f"{len(self.violations)} VIOLATION(S):")
            for v in self.violations:
                lines.append(
                    f"  proof {v['proof']} on model {v['model']} at world "
                    f"{v['world']} under {v['valuation']}"
                )
        return "\n".join(lines)


def soundness_check(proofs, models, proof_labels=None, model_labels=None) -> SoundnessReport:
    """Check every proof's root sequent at every (world, valuation) point
    of every model.  A violation names its full witness; any violation at
    all indicates a kernel or semantics bug, or a genuinely unsound rule,
    and is never a tolerated outcome."""
    proof_labels = proof_labels or [str(i) for i in range(len(proofs))]
    model_labels = model_labels or [str(i) for i in range(len(models))]
    report = SoundnessReport(proofs=len(proofs), models=len(models), points_checked=0)
    for m_label, model in zip(model_labels, models):
        ev = Evaluator(model)
        for p_label, derivation in zip(proof_labels, proofs):
            root = derivation.conclusion
            fv = frozenset().union(
                free_vars(root.goal), *(free_vars(h) for h in root.hyps)
            )
            for world in model.worlds:
                for valuation in valuations(fv, model.struct(world).domain):
                    report.points_checked += 1
                    if not entails_at(EvalPoint(model, world, valuation), root, ev):
                        report.violations.append({
                            "proof": p_label,
                            "model": m_label,
                            "world": world,
                            "valuation": dict(valuation),
                        })
    return report


# ---------------------------------------------------------------------------
# Bounded countermodel search


@dataclass
class CountermodelResult:
    found: bool
    model: NalModel | None = None
    world: str | None = None
    valuation: dict | None = None
    candidates: int = 0


FAMILY_NOTE = (
    "canonical enumeration family: world-constant prefix domains, syntactic "
    "equality, constant coercions, chain semilattices, world-constant "
    "function tables"
)


def _canonical_posets(n: int) -> list[frozenset[tuple[str, str]]]:
    """All partial orders on n labelled worlds, pruned up to isomorphism."""
    worlds = _world_names(n)
    idx = {w: i for i, w in enumerate(worlds)}
    seen = set()
    out = []
    base_pairs = [(worlds[i], worlds[j]) for i in range(n) for j in range(n) if i != j]
    for bits in itertools.product([0, 1], repeat=len(base_pairs)):
        extra = [p for p, b in zip(base_pairs, bits) if b]
        pairs = _reflexive_transitive(worlds, extra)
        if any((v, w) in pairs and w != v for w, v in pairs):
            continue
        canon = min(
            tuple(sorted((perm[idx[w]], perm[idx[v]]) for w, v in pairs))
            for perm in itertools.permutations(range(n))
        )
        if canon in seen:
            continue
        seen.add(canon)
        out.append(pairs)
    return out


def _frame_valid_sets(worlds, leq) -> list[frozenset[tuple[str, str]]]:
    """All subsets of world pairs satisfying the frame conditions."""
    pairs = [(w, v) for w in worlds for v in worlds]
    above = {w: [v for v in worlds if (w, v) in leq] for w in worlds}
    out = []
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        chosen = frozenset(p for p, b in zip(pairs, bits) if b)
        if _frame_ok(chosen, worlds, leq, above):
            out.append(chosen)
    return out


def _frame_ok(chosen, worlds, leq, above) -> bool:
    for w, v in chosen:
        for v2 in above[v]:
            if not any((w, w2) in leq and (w2, v2) in chosen for w2 in worlds):
                return False  # F2
    for w, v in chosen:
        for v2, u in chosen:
            if v2 == v and not any(
                (w, w2) in leq and (w2, u) in chosen for w2 in worlds
            ):
                return False  # IT
    for w, u in chosen:
        if not any(
            (w, w2) in leq and (w2, v) in chosen and (v, u) in chosen
            for w2 in worlds for v in worlds
        ):
            return False  # ID
    for w, v in chosen:
        for w2 in above[w]:
            if not any((v, v2) in leq and (w2, v2) in chosen for v2 in worlds):
                return False  # F1
    return True


def _mentions_subprincipal(f: Formula) -> bool:
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Subprincipal):
            return True
        for name in ("left", "right", "body", "pattern", "principal",
                     "parent", "child"):
            child = getattr(node, name, None)
            if child is not None and not isinstance(child, str):
                stack.append(child)
        stack.extend(getattr(node, "args", ()))
    return False


def _symbols_in(f: Formula) -> tuple[dict[str, int], dict[str, int]]:
    functions: dict[str, int] = {}
    relations: dict[str, int] = {}
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Application):
            functions[node.symbol] = len(node.args)
        elif isinstance(node, Relation):
            relations[node.symbol] = len(node.args)
        for name in ("left", "right", "body", "pattern", "principal",
                     "parent", "child"):
            child = getattr(node, name, None)
            if child is not None and not isinstance(child, str):
                stack.append(child)
        stack.extend(getattr(node, "args", ()))
    return functions, relations


def find_countermodel(f: Formula, bound: GenConfig,
                      max_candidates: int = 2_000_000) -> CountermodelResult:
    """First validated model (and point) falsifying a closed formula, by
    exhaustive enumeration of the canonical family within the bounds; or
    exhaustion (relative to the family).  Enumeration prefers fewer
    worlds, then fewer principals, then smaller domains."""
    if free_vars(f):
        raise ValueError("countermodel search expects a closed formula")
    functions, relations = _symbols_in(f)
    needs_sub = _mentions_subprincipal(f)
    sig = Signature(functions=functions, relations=relations)
    checked = 0

    for n_worlds in range(1, bound.max_worlds + 1):
        for leq in _canonical_posets(n_worlds):
            worlds = _world_names(n_worlds)
            valid_sets = _frame_valid_sets(worlds, leq)
            for n_principals in range(1, bound.max_principals + 1):
                for domain_size in range(n_principals,
                                         max(bound.max_domain, n_principals) + 1):
                    result = _search_stratum(
                        f, sig, worlds, leq, valid_sets,
                        _principal_names(n_principals),
                        _individuals(domain_size),
                        needs_sub, checked, max_candidates,
                    )
                    checked = result.candidates
                    if result.found:
                        return result
    return CountermodelResult(found=False, candidates=checked)


def _monotone_relation_tables(worlds, leq, pool, arity):
    """Per-world tuple sets that only grow along leq."""
    tuples = list(itertools.product(pool, repeat=arity))
    subsets = [
        frozenset(s)
        for r in range(len(tuples) + 1)
        for s in itertools.combinations(tuples, r)
    ]

    def backtrack(i, chosen):
        if i == len(worlds):
            yield dict(chosen)
            return
        w = worlds[i]
        lower = [v for v in worlds[:i] if (v, w) in leq]
        floor = frozenset().union(*(chosen[v] for v in lower)) if lower else frozenset()
        for s in subsets:
            if floor <= s:
                chosen[w] = s
                yield from backtrack(i + 1, chosen)
                del chosen[w]

    yield from backtrack(0, {})


def _search_stratum(f, sig, worlds, leq, valid_sets, principals, pool,
                    needs_sub, checked, max_candidates) -> CountermodelResult:
    rel_syms = sorted(sig.relations)
    rel_options = [
        list(_monotone_relation_tables(worlds, leq, pool, sig.relations[s]))
        for s in rel_syms
    ]
    fun_syms = sorted(sig.functions)
    fun_options = [
        list(itertools.product(pool, repeat=len(pool) ** sig.functions[s]))
        for s in fun_syms
    ]
    if needs_sub:
        sub_options = [
            combo
            for combo in itertools.product(range(len(principals)),
                                           repeat=len(principals))
            if all(combo[i] >= i for i in range(len(principals)))
        ]
    else:
        sub_options = [tuple(range(len(principals)))]

    def access_chains():
        def extend(i, chain):
            if i == len(principals):
                yield tuple(chain)
                return
            for s in valid_sets:
                if not chain or s <= chain[-1]:
                    chain.append(s)
                    yield from extend(i + 1, chain)
                    chain.pop()
        yield from extend(0, [])

    chains = list(access_chains())
    for rel_choice in itertools.product(*rel_options):
        for fun_choice in itertools.product(*fun_options):
            for sub_combo in sub_options:
                for chain in chains:
                    checked += 1
                    if checked > max_candidates:
                        raise GenerationError(
                            f"countermodel enumeration exceeded "
                            f"{max_candidates} candidates; tighten the bounds"
                        )
                    model = _build_candidate(
                        worlds, leq, principals, pool, rel_syms, rel_choice,
                        fun_syms, fun_choice, sub_combo, chain, sig,
                    )
                    if model is None:
                        continue
                    ev = Evaluator(model)
                    witness = next(
                        (w for w in worlds if not ev.holds(w, {}, f)), None
                    )
                    if witness is not None and validate_model(model).accepted:
                        return CountermodelResult(
                            found=True, model=model, world=witness,
                            valuation={}, candidates=checked,
                        )
    return CountermodelResult(found=False, candidates=checked)


def _build_candidate(worlds, leq, principals, pool, rel_syms, rel_choice,
                     fun_syms, fun_choice, sub_combo, chain, sig):
    access = {p: chain[i] for i, p in enumerate(principals)}
    # Relation tables must also be monotone along every access edge.
    for pairs in access.values():
        for w1, w2 in pairs:
            for i in range(len(rel_syms)):
                if not rel_choice[i][w1] <= rel_choice[i][w2]:
                    return None
    delta = {p: pool[i] for i, p in enumerate(principals)}
    pi = {d: "bot" for d in pool}
    for p, d in delta.items():
        pi[d] = p
    structures = {}
    for w in worlds:
        functions = {}
        for i, sym in enumerate(fun_syms):
            arity = sig.functions[sym]
            args_list = list(itertools.product(pool, repeat=arity))
            functions[sym] = {
                args: fun_choice[i][j] for j, args in enumerate(args_list)
            }
        structures[w] = WorldStructure(
            domain=frozenset(pool),
            eq=tuple(frozenset((d,)) for d in pool),
            relations={sym: rel_choice[i][w] for i, sym in enumerate(rel_syms)},
            functions=functions,
            sub={
                (p, d): principals[sub_combo[i]]
                for i, p in enumerate(principals)
                for d in pool
            },
            delta=delta,
            pi=pi,
        )
    return NalModel(
        worlds=worlds,
        leq=leq,
        structures=structures,
        principals=principals,
        join=_chain_join(principals),
        bottom="bot",
        access=access,
        signature=sig,
    )


# ---------------------------------------------------------------------------
# Corpus directory


def corpus_path() -> Path:
    """Location of the versioned corpus shipped with the package."""
    return Path(__file__).resolve().parent / "corpus"


def write_corpus(root: Path) -> None:
    """Emit the versioned corpus tree: golden proofs, rejected proofs,
    fuzzing models (all over the corpus signature), seeded bad models,
    special-purpose example models, and the shared signature."""
    root = Path(root)
    for sub in ("proofs", "bad-proofs", "models", "bad-models", "examples"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    with open(root / "signature.json", "w", encoding="utf-8") as fh:
        json.dump(CORPUS_SIGNATURE.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    for rule, derivation in sorted(golden_corpus().items()):
        save_derivation(root / "proofs" / f"{rule.lower()}.json", derivation)
    for rule, derivation in sorted(mutant_corpus().items()):
        save_derivation(root / "bad-proofs" / f"{rule.lower()}-mutant.json", derivation)
    save_derivation(root / "bad-proofs" / "unit-bug.json", unit_bug_derivation())
    save_model(root / "models" / "trivial.json", trivial_model())
    fuzz = generate_models(GenConfig(seed=7, sample_count=4))
    for i, model in enumerate(fuzz):
        save_model(root / "models" / f"fuzz-{i:02d}.json", model)
    save_model(root / "examples" / "unit-countermodel.json", unit_countermodel())
    save_model(root / "examples" / "handoff-gap.json", handoff_gap_model())
    for tag, model in sorted(seeded_bad_models().items()):
        save_model(root / "bad-models" / f"{tag}.json", model)
