"""Finite models and the model validator.

A model fixes: a finite set of worlds with a constructive partial order
``leq``; a first-order structure per world (domain, equality partition,
relation extensions, total function tables); a model-wide principal set
with a join semilattice and a bottom element; a per-principal
accessibility relation; a per-world ``sub`` function interpreting
subprincipals; and per-world coercions ``delta`` (principal to
individual, injective) and ``pi`` (individual to principal, bottom off
the image of delta).

``validate_model`` is the single authority on acceptance.  Each violated
condition is reported with a stable tag; the interesting ones are

    leq-partial-order   leq-monotonicity   access-monotonicity
    semilattice         join-access        sub-access
    delta-injective     pi-delta           eq-congruence
    frame-F1  frame-F2  frame-IT  frame-ID

Frame condition F1 is only needed for a possibility modality the logic
does not have, so its enforcement is a flag (default on).

Models are immutable after load; validation and lookups are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .report import CheckReport
from .syntax import Signature


class ModelError(Exception):
    pass


@dataclass(frozen=True)
class WorldStructure:
    domain: frozenset[str]
    eq: tuple[frozenset[str], ...]
    relations: dict[str, frozenset[tuple[str, ...]]]
    functions: dict[str, dict[tuple[str, ...], str]]
    sub: dict[tuple[str, str], str]
    delta: dict[str, str]
    pi: dict[str, str]

    def eq_class_index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for i, cls in enumerate(self.eq):
            for d in cls:
                index[d] = i
        return index


@dataclass
class NalModel:
    worlds: tuple[str, ...]
    leq: frozenset[tuple[str, str]]
    structures: dict[str, WorldStructure]
    principals: tuple[str, ...]
    join: dict[tuple[str, str], str]
    bottom: str
    access: dict[str, frozenset[tuple[str, str]]]
    signature: Signature | None = None
    # Per-world individual -> equality class index, built lazily.
    _eq_index: dict[str, dict[str, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def struct(self, world: str) -> WorldStructure:
        try:
            return self.structures[world]
        except KeyError:
            raise ModelError(f"unknown world {world!r}") from None

    def same_at(self, world: str, d1: str, d2: str) -> bool:
        """Individual equality at a world (the per-world partition)."""
        if world not in self._eq_index:
            self._eq_index[world] = self.struct(world).eq_class_index()
        index = self._eq_index[world]
        try:
            return index[d1] == index[d2]
        except KeyError as missing:
            raise ModelError(
                f"individual {missing.args[0]!r} not in the domain of {world!r}"
            ) from None

    def above(self, world: str) -> list[str]:
        return [v for v in self.worlds if (world, v) in self.leq]


def join_all(m: NalModel, ps) -> str:
    """Least upper bound of a set of principals; empty set gives bottom."""
    out = m.bottom
    for p in sorted(ps):
        out = m.join[(out, p)]
    return out


def accessible(m: NalModel, world: str, individual: str) -> frozenset[tuple[str, str]]:
    """Accessibility relation of the principal an individual denotes at a
    world; non-principal individuals coerce to bottom."""
    st = m.struct(world)
    if individual not in st.domain:
        raise ModelError(
            f"individual {individual!r} not in the domain of {world!r}"
        )
    principal = st.pi[individual]
    return m.access[principal]


def principals_equal(m: NalModel, p: str, q: str) -> bool:
    """Derived principal equality: the representatives coincide (up to the
    world's equality) everywhere.  Deliberately a predicate only: equal
    principals need not share an accessibility relation."""
    return all(
        m.same_at(w, m.struct(w).delta[p], m.struct(w).delta[q])
        for w in m.worlds
    )


# ---------------------------------------------------------------------------
# Validation


def validate_model(m: NalModel, check_f1: bool = True) -> CheckReport:
    report = CheckReport()
    _check_structure(m, report)
    if not report.accepted:
        # Deeper checks assume structural integrity.
        return report
    _check_leq(m, report)
    _check_partitions(m, report)
    _check_eq_congruence(m, report)
    _check_coercions(m, report)
    _check_leq_monotonicity(m, report)
    _check_access_monotonicity(m, report)
    _check_semilattice(m, report)
    _check_join_access(m, report)
    _check_sub_access(m, report)
    _check_frame_conditions(m, report, check_f1)
    return report


def _check_structure(m: NalModel, report: CheckReport) -> None:
    worlds = set(m.worlds)
    if len(m.worlds) != len(worlds):
        report.add("worlds", "duplicate world ids", "structure")
    if set(m.structures) != worlds:
        report.add("structures", "structures must cover exactly the worlds", "structure")
        return
    principals = set(m.principals)
    if len(m.principals) != len(principals):
        report.add("principals", "duplicate principals", "structure")
    if m.bottom not in principals:
        report.add("bottom", f"bottom {m.bottom!r} is not a principal", "structure")
    for w, v in m.leq:
        if w not in worlds or v not in worlds:
            report.add("leq", f"pair ({w!r}, {v!r}) mentions unknown worlds", "structure")
    if set(m.access) != principals:
        report.add("access", "access must cover exactly the principals", "structure")
    else:
        for p, pairs in m.access.items():
            for w, v in pairs:
                if w not in worlds or v not in worlds:
                    report.add(
                        f"access[{p}]",
                        f"pair ({w!r}, {v!r}) mentions unknown worlds",
                        "structure",
                    )
    for pair in ((p, q) for p in m.principals for q in m.principals):
        if pair not in m.join:
            report.add("join", f"join undefined on {pair!r}", "semilattice")
        elif m.join[pair] not in principals:
            report.add("join", f"join{pair!r} is not a principal", "semilattice")
    if report.accepted:
        _check_world_tables(m, report)


def _check_world_tables(m: NalModel, report: CheckReport) -> None:
    rel_arity: dict[str, int] = {}
    fun_arity: dict[str, int] = {}
    if m.signature is not None:
        rel_arity. update(m.signature.relations)
        fun_arity.update(m.signature.functions)
    for w in m.worlds:
        st = m.structures[w]
        dom = st.domain
        for sym, tuples in st.relations.items():
            for t in tuples:
                if sym in rel_arity and len(t) != rel_arity[sym]:
                    report.add(
                        f"{w}/relations[{sym}]",
                        f"tuple {t!r} has arity {len(t)}, expected {rel_arity[sym]}",
                        "relation-arity",
                    )
                rel_arity.setdefault(sym, len(t))
                if not set(t) <= dom:
                    report.add(
                        f"{w}/relations[{sym}]",
                        f"tuple {t!r} leaves the domain",
                        "relation-arity",
                    )
        for sym, table in st.functions.items():
            arities = {len(args) for args in table}
            if sym in fun_arity:
                arities.add(fun_arity[sym])
            if len(arities) > 1:
                report.add(
                    f"{w}/functions[{sym}]",
                    f"inconsistent arity {sorted(arities)}",
                    "function-total",
                )
                continue
            if arities:
                fun_arity.setdefault(sym, next(iter(arities)))
            arity = fun_arity.get(sym, 0)
            expected = _tuples(sorted(dom), arity)
            if set(table) != set(expected):
                report.add(
                    f"{w}/functions[{sym}]",
                    "table is not total on the domain",
                    "function-total",
                )
            for args, value in table.items():
                if value not in dom:
                    report.add(
                        f"{w}/functions[{sym}]",
                        f"value {value!r} at {args!r} leaves the domain",
                        "function-total",
                    )
        expected_sub = {(p, d) for p in m.principals for d in dom}
        if set(st.sub) != expected_sub:
            report.add(f"{w}/sub", "sub is not total on principals x domain", "sub-total")
        else:
            for key, value in st.sub.items():
                if value not in m.principals:
                    report.add(
                        f"{w}/sub", f"sub{key!r} = {value!r} is not a principal",
                        "sub-total",
                    )
        if set(st.delta) != set(m.principals):
            report.add(f"{w}/delta", "delta is not total on the principals", "delta-total")
        elif not set(st.delta.values()) <= dom:
            report.add(f"{w}/delta", "delta leaves the domain", "delta-total")
        if set(st.pi) != dom:
            report.add(f"{w}/pi", "pi is not total on the domain", "pi-total")
        elif not set(st.pi.values()) <= set(m.principals):
            report.add(f"{w}/pi", "pi maps outside the principals", "pi-total")


def _tuples(items, arity):
    if arity == 0:
        return [()]
    out = [()]
    for _ in range(arity):
        out = [t + (d,) for t in out for d in items]
    return out


def _check_leq(m: NalModel, report: CheckReport) -> None:
    for w in m.worlds:
        if (w, w) not in m.leq:
            report.add("leq", f"not reflexive at {w!r}", "leq-partial-order")
    for w, v in m.leq:
        if w != v and (v, w) in m.leq:
            report.add("leq", f"not antisymmetric on ({w!r}, {v!r})", "leq-partial-order")
        for u in m.worlds:
            if (v, u) in m.leq and (w, u) not in m.leq:
                report.add(
                    "leq",
                    f"not transitive: ({w!r}, {v!r}) and ({v!r}, {u!r})",
                    "leq-partial-order",
                )


def _check_partitions(m: NalModel, report: CheckReport) -> None:
    for w in m.worlds:
        st = m.structures[w]
        seen: set[str] = set()
        for cls in st.eq:
            if not cls:
                report.add(f"{w}/eq", "empty equality class", "eq-partition")
            if cls & seen:
                report.add(f"{w}/eq", "overlapping equality classes", "eq-partition")
            seen |= cls
        if seen != st.domain:
            report.add(f"{w}/eq", "classes do not cover the domain", "eq-partition")


def _check_eq_congruence(m: NalModel, report: CheckReport) -> None:
    """Equality must be indistinguishable by relations, functions, and sub."""
    for w in m.worlds:
        st = m.structures[w]
        if not all(len(cls) == 1 for cls in st.eq):
            classes = st.eq_class_index()
            for sym, tuples in st.relations.items():
                for t in tuples:
                    for variant in _eq_variants(t, st.eq, classes):
                        if variant not in tuples:
                            report.add(
                                f"{w}/relations[{sym}]",
                                f"{t!r} holds but equal tuple {variant!r} does not",
                                "eq-congruence",
                            )
            for sym, table in st.functions.items():
                for args, value in table.items():
                    for variant in _eq_variants(args, st.eq, classes):
                        if not m.same_at(w, value, table[variant]):
                            report.add(
                                f"{w}/functions[{sym}]",
                                f"values at equal tuples {args!r} and {variant!r} differ",
                                "eq-congruence",
                            )
            for (p, d), value in st.sub.items():
                for d2 in st.eq[classes[d]]:
                    other = st.sub[(p, d2)]
                    if not m.same_at(w, st.delta[value], st.delta[other]):
                        report.add(
                            f"{w}/sub",
                            f"sub({p!r}, {d!r}) and sub({p!r}, {d2!r}) denote "
                            "unequal individuals",
                            "eq-congruence",
                        )


def _eq_variants(t, eq_classes, index):
    variants = [()]
    for d in t:
        cls = eq_classes[index[d]]
        variants = [v + (d2,) for v in variants for d2 in sorted(cls)]
    return [v for v in variants if v != t]


def _check_coercions(m: NalModel, report: CheckReport) -> None:
    for w in m.worlds:
        st = m.structures[w]
        image: dict[str, str] = {}
        for p, d in st.delta.items():
            if d in image:
                report.add(
                    f"{w}/delta",
                    f"delta({image[d]!r}) = delta({p!r}) = {d!r}",
                    "delta-injective",
                )
            image[d] = p
        for p, d in st.delta.items():
            if st.pi.get(d) != p:
                report.add(
                    f"{w}/pi", f"pi(delta({p!r})) = {st.pi.get(d)!r}, expected {p!r}",
                    "pi-delta",
                )
        for d in st.domain - set(image):
            if st.pi.get(d) != m.bottom:
                report.add(
                    f"{w}/pi",
                    f"pi({d!r}) = {st.pi.get(d)!r} but {d!r} represents no principal",
                    "pi-delta",
                )


def _monotone_edge(m: NalModel, w: str, v: str, where: str, tag: str,
                   report: CheckReport) -> None:
    """The four growth clauses for one edge (w, v): domain, equality,
    relations, and functions; plus the per-world coercion tables that
    behave as functions."""
    a, b = m.structures[w], m.structures[v]
    if not a.domain <= b.domain:
        report.add(where, f"domain of {w!r} is not contained in {v!r}", tag)
        return
    index = b.eq_class_index()
    for cls in a.eq:
        images = {index[d] for d in cls}
        if len(images) > 1:
            report.add(where, f"equal individuals at {w!r} split at {v!r}", tag)
    for sym, tuples in a.relations.items():
        if not tuples <= b.relations.get(sym, frozenset()):
            report.add(where, f"relation {sym!r} shrinks from {w!r} to {v!r}", tag)
    for sym, table in a.functions.items():
        for args, value in table.items():
            if not m.same_at(w, value, b.functions[sym][args]):
                report.add(
                    where,
                    f"function {sym!r} at {args!r} changes from {w!r} to {v!r}",
                    tag,
                )
                break


def _check_leq_monotonicity(m: NalModel, report: CheckReport) -> None:
    for w, v in sorted(m.leq):
        if w == v:
            continue
        where = f"leq ({w}, {v})"
        _monotone_edge(m, w, v, where, "leq-monotonicity", report)
        if not report.accepted and report.failures[-1].path == where:
            continue
        a, b = m.structures[w], m.structures[v]
        for p in m.principals:
            if not m.same_at(w, a.delta[p], b.delta[p]):
                report.add(
                    where, f"delta({p!r}) changes from {w!r} to {v!r}",
                    "leq-monotonicity",
                )
        for p in m.principals:
            for d in sorted(a.domain):
                q1, q2 = a.sub[(p, d)], b.sub[(p, d)]
                if not m.same_at(w, a.delta[q1], a.delta[q2]):
                    report.add(
                        where,
                        f"sub({p!r}, {d!r}) disagrees between {w!r} and {v!r}",
                        "leq-monotonicity",
                    )


def _check_access_monotonicity(m: NalModel, report: CheckReport) -> None:
    for p in m.principals:
        for w, v in sorted(m.access[p]):
            _monotone_edge(m, w, v, f"access[{p}] ({w}, {v})",
                           "access-monotonicity", report)


def _check_semilattice(m: NalModel, report: CheckReport) -> None:
    ps = m.principals
    for p in ps:
        if m.join[(p, p)] != p:
            report.add("join", f"join not idempotent at {p!r}", "semilattice")
        if m.join[(m.bottom, p)] != p:
            report.add("join", f"bottom is not neutral at {p!r}", "semilattice")
    for p in ps:
        for q2 in ps:
            if m.join[(p, q2)] != m.join[(q2, p)]:
                report.add("join", f"join not commutative on ({p!r}, {q2!r})", "semilattice")
            for r2 in ps:
                if m.join[(m.join[(p, q2)], r2)] != m.join[(p, m.join[(q2, r2)])]:
                    report.add(
                        "join",
                        f"join not associative on ({p!r}, {q2!r}, {r2!r})",
                        "semilattice",
                    )


def _check_join_access(m: NalModel, report: CheckReport) -> None:
    for p in m.principals:
        for q2 in m.principals:
            joined = m.join[(p, q2)]
            extra = m.access[joined] - m.access[p]
            if extra:
                report.add(
                    "access",
                    f"access of {joined!r} = join({p!r}, {q2!r}) is not contained "
                    f"in access of {p!r}: {sorted(extra)}",
                    "join-access",
                )


def _check_sub_access(m: NalModel, report: CheckReport) -> None:
    for w in m.worlds:
        st = m.structures[w]
        for (p, d), q2 in sorted(st.sub.items()):
            extra = m.access[q2] - m.access[p]
            if extra:
                report.add(
                    f"{w}/sub",
                    f"sub({p!r}, {d!r}) = {q2!r} but access of {q2!r} is not "
                    f"contained in access of {p!r}",
                    "sub-access",
                )


def _check_frame_conditions(m: NalModel, report: CheckReport, check_f1: bool) -> None:
    for p in m.principals:
        pairs = m.access[p]
        if check_f1:
            for w, v in sorted(pairs):
                for w2 in m.above(w):
                    if not any((v, v2) in m.leq and (w2, v2) in pairs for v2 in m.worlds):
                        report.add(
                            f"access[{p}]",
                            f"F1 fails: {w!r} <= {w2!r} and ({w!r}, {v!r}) in "
                            f"access, but no successor of {v!r} is accessible "
                            f"from {w2!r}",
                            "frame-F1",
                        )
        for w, v in sorted(pairs):
            for v2 in m.above(v):
                if not any((w, w2) in m.leq and (w2, v2) in pairs for w2 in m.worlds):
                    report.add(
                        f"access[{p}]",
                        f"F2 fails: ({w!r}, {v!r}) in access and {v!r} <= {v2!r}, "
                        f"but {v2!r} is not accessible from above {w!r}",
                        "frame-F2",
                    )
        for w, v in sorted(pairs):
            for v2, u in sorted(pairs):
                if v2 != v:
                    continue
                if not any((w, w2) in m.leq and (w2, u) in pairs for w2 in m.worlds):
                    report.add(
                        f"access[{p}]",
                        f"IT fails: ({w!r}, {v!r}) and ({v!r}, {u!r}) in access, "
                        f"but {u!r} is not accessible from above {w!r}",
                        "frame-IT",
                    )
        for w, u in sorted(pairs):
            if not any(
                (w, w2) in m.leq and (w2, v) in pairs and (v, u) in pairs
                for w2 in m.worlds
                for v in m.worlds
            ):
                report.add(
                    f"access[{p}]",
                    f"ID fails: ({w!r}, {u!r}) in access, but no intermediate "
                    f"world splits it from above {w!r}",
                    "frame-ID",
                )


# ---------------------------------------------------------------------------
# Signature derivation and JSON files


def derive_signature(m: NalModel) -> Signature:
    """Infer symbol arities from the model tables.  Function arities come
    from the (total) tables; relation arities need at least one tuple at
    some world, otherwise the symbol is dropped."""
    if m.signature is not None:
        return m.signature
    functions: dict[str, int] = {}
    relations: dict[str, int] = {}
    for w in m.worlds:
        st = m.structures[w]
        for sym, table in st.functions.items():
            for args in table:
                functions.setdefault(sym, len(args))
        for sym, tuples in st.relations.items():
            for t in tuples:
                relations.setdefault(sym, len(t))
    return Signature(functions=functions, relations=relations)


def model_to_json(m: NalModel) -> dict:
    out: dict = {
        "worlds": list(m.worlds),
        "leq": sorted([w, v] for w, v in m.leq),
        "principals": list(m.principals),
        "bottom": m.bottom,
        "join": sorted([p, q2, r2] for (p, q2), r2 in m.join.items()),
        "access": {p: sorted([w, v] for w, v in pairs) for p, pairs in m.access.items()},
        "structures": {
            w: {
                "domain": sorted(st.domain),
                "eq": sorted(sorted(cls) for cls in st.eq),
                "relations": {
                    sym: sorted(list(t) for t in tuples)
                    for sym, tuples in sorted(st.relations.items())
                },
                "functions": {
                    sym: sorted([list(args), value] for args, value in table.items())
                    for sym, table in sorted(st.functions.items())
                },
                "sub": sorted([p, d, v] for (p, d), v in st.sub.items()),
                "delta": dict(sorted(st.delta.items())),
                "pi": dict(sorted(st.pi.items())),
            }
            for w, st in sorted(m.structures.items())
        },
    }
    if m.signature is not None:
        out["signature"] = m.signature.to_json()
    return out


def model_from_json(data: dict) -> NalModel:
    structures = {}
    for w, raw in data["structures"].items():
        structures[w] = WorldStructure(
            domain=frozenset(raw["domain"]),
            eq=tuple(frozenset(cls) for cls in raw["eq"]),
            relations={
                sym: frozenset(tuple(t) for t in tuples)
                for sym, tuples in raw.get("relations", {}).items()
            },
            functions={
                sym: {tuple(args): value for args, value in table}
                for sym, table in raw.get("functions", {}).items()
            },
            sub={(p, d): v for p, d, v in raw.get("sub", [])},
            delta=dict(raw.get("delta", {})),
            pi=dict(raw.get("pi", {})),
        )
    return NalModel(
        worlds=tuple(data["worlds"]),
        leq=frozenset((w, v) for w, v in data["leq"]),
        structures=structures,
        principals=tuple(data["principals"]),
        join={(p, q2): r2 for p, q2, r2 in data["join"]},
        bottom=data["bottom"],
        access={
            p: frozenset((w, v) for w, v in pairs)
            for p, pairs in data["access"].items()
        },
        signature=Signature.from_json(data["signature"]) if "signature" in data else None,
    )


def load_model(path) -> NalModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def save_model(path, m: NalModel) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(m), fh, indent=2, sort_keys=True)
        fh.write("\n")
