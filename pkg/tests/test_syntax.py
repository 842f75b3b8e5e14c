"""Core AST operations: free variables, substitution, alpha-equivalence,
arity checking."""

import pytest
from hypothesis import given, settings

from nalkit.syntax import (
    And, Application, Equals, Forall, Group, Not, Relation, Says, Sequent,
    Signature, Speaksfor, Subprincipal, TRUE, Variable,
    alpha_eq, alpha_key, dedup_alpha, free_vars, fresh_name, substitute,
    well_formed,
)

from strategies import SIG, formulas, terms, var_names

A = Application("a")
B = Application("b")


def rel(sym, *args):
    return Relation(sym, tuple(args))


class TestFreeVars:
    def test_bound_variable_excluded(self):
        f = Forall("x", rel("q", Variable("x")))
        # forall x : q(x, y)-style example collapsed to arity-1 signature:
        g = Forall("x", And(rel("q", Variable("x")), rel("q", Variable("y"))))
        assert free_vars(f) == frozenset()
        assert free_vars(g) == {"y"}

    def test_closed_says_delegation(self):
        f = Says(A, Speaksfor(B, A))
        assert free_vars(f) == frozenset()

    def test_group_binds_its_variable(self):
        t = Group("x", rel("q", Variable("z")))
        assert free_vars(t) == {"z"}
        t2 = Group("x", rel("q", Variable("x")))
        assert free_vars(t2) == frozenset()


class TestSubstitute:
    def test_simple_replacement(self):
        f = rel("q", Variable("x"))
        assert substitute(f, "x", Application("f", (A,))) == rel(
            "q", Application("f", (A,))
        )

    def test_no_free_occurrence_is_identity(self):
        f = Forall("x", rel("q", Variable("x")))
        assert substitute(f, "x", A) == f

    def test_capture_forces_rename(self):
        # (forall y : q(x) and q(y))[y/x] must rename the binder.
        f = Forall("y", And(rel("q", Variable("x")), rel("q", Variable("y"))))
        out = substitute(f, "x", Variable("y"))
        expected = Forall("y1", And(rel("q", Variable("y")), rel("q", Variable("y1"))))
        assert out == expected
        assert alpha_eq(out, expected)

    def test_group_capture(self):
        t = Group("x", Equals(Variable("x"), Variable("z")))
        out = substitute(t, "z", Variable("x"))
        assert alpha_eq(out, Group("x1", Equals(Variable("x1"), Variable("x"))))

    @given(formulas(), var_names)
    @settings(max_examples=200, deadline=None)
    def test_rename_roundtrip(self, f, x):
        fresh = fresh_name("rt", free_vars(f) | {x})
        there = substitute(f, x, Variable(fresh))
        back = substitute(there, fresh, Variable(x))
        assert alpha_eq(back, f)

    @given(formulas(), var_names, terms())
    @settings(max_examples=200, deadline=None)
    def test_free_vars_equation(self, f, x, t):
        out = substitute(f, x, t)
        if x in free_vars(f):
            assert free_vars(out) == (free_vars(f) - {x}) | free_vars(t)
        else:
            assert out == f


class TestAlphaEq:
    def test_binder_rename(self):
        assert alpha_eq(
            Forall("x", rel("q", Variable("x"))), Forall("y", rel("q", Variable("y")))
        )

    def test_group_terms_in_delegation(self):
        g1 = Group("x", Says(Variable("p"), rel("q", Variable("x"))))
        g2 = Group("y", Says(Variable("p"), rel("q", Variable("y"))))
        assert alpha_eq(Speaksfor(g1, A), Speaksfor(g2, A))

    def test_different_relation(self):
        assert not alpha_eq(
            Forall("x", rel("q", Variable("x"))),
            Forall("x", Not(rel("q", Variable("x")))),
        )

    def test_free_variables_matter(self):
        assert not alpha_eq(rel("q", Variable("x")), rel("q", Variable("y")))

    @given(formulas())
    @settings(max_examples=150, deadline=None)
    def test_reflexive(self, f):
        assert alpha_eq(f, f)

    @given(formulas(), formulas())
    @settings(max_examples=150, deadline=None)
    def test_symmetric(self, f, g):
        assert alpha_eq(f, g) == alpha_eq(g, f)

    @given(formulas(), var_names, var_names)
    @settings(max_examples=150, deadline=None)
    def test_transitive_via_renames(self, f, x, y):
        # Three alpha-variants of the same formula must be pairwise equal.
        fa = Forall(x, substitute_free(f, "x", x))
        fb = Forall(y, substitute_free(f, "x", y))
        if alpha_eq(fa, fb):
            assert alpha_key(fa) == alpha_key(fb)


def substitute_free(f, x, y):
    return substitute(f, x, Variable(y))


class TestWellFormed:
    def test_accepts_matching_arities(self):
        f = rel("q", Application("f", (A,)))
        assert well_formed(f, SIG).accepted

    def test_wrong_relation_arity(self):
        f = Relation("q", ())
        report = well_formed(f, SIG)
        assert not report.accepted
        assert "expects 1" in report.failures[0].reason

    def test_unknown_symbol(self):
        report = well_formed(Relation("nope", ()), SIG)
        assert not report.accepted
        assert "unknown relation" in report.failures[0].reason

    def test_path_names_offending_subterm(self):
        f = And(TRUE, rel("q", Application("f", ())))
        report = well_formed(f, SIG)
        assert not report.accepted
        assert "right" in report.failures[0].path

    @given(formulas())
    @settings(max_examples=150, deadline=None)
    def test_closed_under_subformulas(self, f):
        # Acceptance of a conjunction/etc. implies acceptance of its parts.
        if well_formed(f, SIG).accepted:
            for child in _immediate_subformulas(f):
                assert well_formed(child, SIG).accepted


def _immediate_subformulas(f):
    for name in ("left", "right", "body", "pattern"):
        child = getattr(f, name, None)
        if child is not None and not isinstance(child, (str, tuple)):
            from nalkit.syntax import Formula

            if type(child).__name__ in {
                "TrueF", "FalseF", "Relation", "Equals", "And", "Or", "Implies",
                "Not", "Forall", "Exists", "Says", "Speaksfor", "SpeaksforRestricted",
            }:
                yield child


class TestSequent:
    def test_dedup_modulo_alpha(self):
        h1 = Forall("x", rel("q", Variable("x")))
        h2 = Forall("y", rel("q", Variable("y")))
        s = Sequent.make([h1, h2, rel("r")], rel("r"))
        assert len(s.hyps) == 2

    def test_hyp_keys_order_independent(self):
        s1 = Sequent.make([rel("r"), rel("s")], TRUE)
        s2 = Sequent.make([rel("s"), rel("r")], TRUE)
        assert s1.hyp_keys() == s2.hyp_keys()


def test_fresh_name_is_deterministic():
    assert fresh_name("y", {"y"}) == "y1"
    assert fresh_name("y", {"y", "y1"}) == "y2"
    assert fresh_name("y3", {"y3"}) == "y1"
