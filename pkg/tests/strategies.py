"""Random generators shared by the test suite.

Two flavors: hypothesis strategies for algebraic property tests over the
syntax, and a plain ``random.Random`` generator (mirroring the harness
signature) used where tests need an exact sample count.
"""

from __future__ import annotations

import hypothesis.strategies as st

from nalkit.syntax import (
    And, Application, Equals, Exists, FALSE, Forall, Group, Implies, Not, Or,
    Relation, Says, Signature, Speaksfor, SpeaksforRestricted, Subprincipal,
    TRUE, Variable,
)

SIG = Signature(
    functions={"a": 0, "b": 0, "c": 0, "f": 1},
    relations={"r": 0, "s": 0, "q": 1},
)

VAR_NAMES = ("x", "y", "z", "w1")

var_names = st.sampled_from(VAR_NAMES)


def terms(max_depth: int = 3, allow_groups: bool = True):
    base = st.one_of(
        var_names.map(Variable),
        st.sampled_from(["a", "b", "c"]).map(lambda s: Application(s, ())),
    )

    def extend(children):
        opts = [
            st.builds(Application, st.just("f"), st.tuples(children)),
            st.builds(Subprincipal, children, children),
        ]
        if allow_groups:
            opts.append(
                st.builds(Group, var_names, formulas(max_depth=1, allow_groups=False))
            )
        return st.one_of(opts)

    return st.recursive(base, extend, max_leaves=max_depth + 1)


def formulas(max_depth: int = 4, allow_groups: bool = True):
    t = terms(max_depth=2, allow_groups=allow_groups)
    base = st.one_of(
        st.just(TRUE),
        st.just(FALSE),
        st.builds(Relation, st.just("r"), st.just(())),
        st.builds(Relation, st.just("s"), st.just(())),
        st.builds(Relation, st.just("q"), st.tuples(t)),
        st.builds(Equals, t, t),
        st.builds(Speaksfor, t, t),
    )

    def extend(children):
        return st.one_of(
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Not, children),
            st.builds(Forall, var_names, children),
            st.builds(Exists, var_names, children),
            st.builds(Says, t, children),
            st.builds(SpeaksforRestricted, t, t, var_names, children),
        )

    return st.recursive(base, extend, max_leaves=max_depth + 2)
