"""Toolkit for the NAL authorization logic.

Submodules:

- ``syntax``: terms, formulas, sequents, substitution, alpha-equivalence
- ``surface``: text syntax (parser and renderer)
- ``proofs``: natural-deduction proof checking
- ``models``: finite Kripke models and the model validator
- ``semantics``: term interpretation and the validity judgment
- ``harness``: model generation, golden corpus, soundness fuzzing,
  countermodel search
- ``cli``: the ``nalkit`` command-line entry point
"""

from .syntax import (  # noqa: F401
    And, Application, Equals, Exists, FALSE, FalseF, Forall, Formula, Group,
    Implies, Not, Or, Relation, Says, Sequent, Signature, Speaksfor,
    SpeaksforRestricted, Subprincipal, TRUE, Term, TrueF, Variable,
    alpha_eq, free_vars, substitute, well_formed,
)
from .surface import ParseError, WellFormednessError, parse_formula, parse_term, render  # noqa: F401
