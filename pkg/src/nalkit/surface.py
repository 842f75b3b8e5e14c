"""Concrete text syntax: parser and pretty-printer for formulas and terms.

Grammar, loosest binding first::

    formula   := ("forall" | "exists") VAR ":" formula   (scope to end)
               | delegation
    delegation:= term "=>>" term ["on" "(" VAR ":" formula ")"]
               | implication
    implication := disjunction ["=>" implication]        (right-assoc)
    disjunction := conjunction ("or" conjunction)*
    conjunction := says ("and" says)*
    says      := term "says" says                        (right-assoc)
               | negation
    negation  := "not" negation | atom
    atom      := "true" | "false"
               | term "=" term
               | NAME "(" terms ")"                      (relation)
               | "(" formula ")"
    term      := primary ("." primary)*                  (left-assoc)
    primary   := NAME "(" terms ")" | VAR
               | "{" VAR ":" formula "}"
               | "(" term ")"

Variables are bare lowercase names; function and relation symbols always
appear applied, with parentheses (possibly empty).  Whether an applied
name is a relation or a function is decided by position: formula atoms
are relations, everything inside a term is a function.  Arity and
undeclared-symbol errors are delegated to ``well_formed``; the grammar
itself is total.

``render`` emits minimal parentheses for this grammar, so
``parse_formula(render(f), sig)`` is alpha-equivalent to ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .report import CheckReport
from .syntax import (
    And, Application, Equals, Exists, FALSE, FalseF, Forall, Formula, Group,
    Implies, Not, Or, Relation, Says, Sequent, Signature, Speaksfor,
    SpeaksforRestricted, Subprincipal, TRUE, Term, TrueF, Variable,
    well_formed,
)

KEYWORDS = {"true", "false", "and", "or", "not", "says", "forall", "exists", "on"}

_PUNCT = ("=>>", "=>", "=", "(", ")", "{", "}", ":", ",", ".")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(Exception):
    def __init__(self, message: str, text: str, span: SourceSpan):
        self.span = span
        self.line, self.column = _line_col(text, span.start)
        super().__init__(f"{self.line}:{self.column}: {message}")
        self.message = message


class WellFormednessError(Exception):
    """Raised when a parsed formula fails arity/symbol checking."""

    def __init__(self, report: CheckReport):
        self.report = report
        super().__init__(str(report))


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    last_nl = text.rfind("\n", 0, offset)
    return line, offset - last_nl


# ---------------------------------------------------------------------------
# Lexer


@dataclass(frozen=True)
class _Token:
    kind: str  # "name", "keyword", punctuation literal, or "eof"
    value: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "name"
            tokens.append(_Token(kind, word, i, j))
            i = j
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(_Token(punct, punct, i, i + len(punct)))
                i += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", text, SourceSpan(i, i + 1))
    tokens.append(_Token("eof", "", n, n))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        # Furthest failure, for error messages after backtracking.
        self.best_error: tuple[int, str] | None = None

    # -- token helpers

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, kind: str, value: str | None = None) -> _Token | None:
        if self.at(kind, value):
            return self.advance()
        return None

    def fail(self, message: str):
        tok = self.peek()
        if self.best_error is None or tok.start >= self.best_error[0]:
            self.best_error = (tok.start, message)
        raise _Backtrack()

    def expect(self, kind: str, value: str | None = None, what: str | None = None) -> _Token:
        tok = self.accept(kind, value)
        if tok is None:
            self.fail(what or f"expected {value or kind!r}")
        return tok

    # -- formulas

    def formula(self) -> Formula:
        quant = self.accept("keyword", "forall") or self.accept("keyword", "exists")
        if quant:
            var = self.variable_name()
            self.expect(":", what="expected ':' after quantified variable")
            body = self.formula()
            return Forall(var, body) if quant.value == "forall" else Exists(var, body)
        return self.delegation()

    def delegation(self) -> Formula:
        save = self.pos
        try:
            left = self.term()
            if self.accept("=>>") is None:
                raise _Backtrack()
        except _Backtrack:
            self.pos = save
            return self.implication()
        right = self.term()
        if self.accept("keyword", "on"):
            self.expect("(", what="expected '(' after 'on'")
            var = self.variable_name()
            self.expect(":", what="expected ':' in restriction pattern")
            pattern = self.formula()
            self.expect(")", what="expected ')' closing restriction pattern")
            return SpeaksforRestricted(left, right, var, pattern)
        return Speaksfor(left, right)

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("=>"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.accept("keyword", "or"):
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.says_level()
        while self.accept("keyword", "and"):
            out = And(out, self.says_level())
        return out

    def says_level(self) -> Formula:
        save = self.pos
        try:
            principal = self.term()
            if self.accept("keyword", "says") is None:
                raise _Backtrack()
        except _Backtrack:
            self.pos = save
            return self.negation()
        return Says(principal, self.says_level())

    def negation(self) -> Formula:
        if self.accept("keyword", "not"):
            return Not(self.negation())
        return self.atom()

    def atom(self) -> Formula:
        if self.accept("keyword", "true"):
            return TRUE
        if self.accept("keyword", "false"):
            return FALSE
        save = self.pos
        try:
            left = self.term()
            if self.accept("="):
                return Equals(left, self.term())
            if isinstance(left, Application):
                # An applied name in formula position is a relation atom.
                return Relation(left.symbol, left.args)
            self.fail("expected a formula")
        except _Backtrack:
            self.pos = save
        if self.accept("("):
            inner = self.formula()
            self.expect(")", what="expected ')'")
            return inner
        self.fail("expected a formula")

    # -- terms

    def term(self) -> Term:
        out = self.primary()
        while self.accept("."):
            out = Subprincipal(out, self.primary())
        return out

    def primary(self) -> Term:
        if self.at("name"):
            tok = self.advance()
            if self.accept("("):
                args = self.term_list()
                self.expect(")", what="expected ')' closing argument list")
                return Application(tok.value, args)
            if not tok.value[0].islower():
                self.fail("bare names are variables and must be lowercase")
            return Variable(tok.value)
        if self.accept("{"):
            var = self.variable_name()
            self.expect(":", what="expected ':' in group")
            body = self.formula()
            self.expect("}", what="expected '}' closing group")
            return Group(var, body)
        if self.accept("("):
            inner = self.term()
            self.expect(")", what="expected ')' closing term")
            return inner
        self.fail("expected a term")

    def term_list(self) -> tuple[Term, ...]:
        if self.at(")"):
            return ()
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        return tuple(args)

    def variable_name(self) -> str:
        tok = self.expect("name", what="expected a variable name")
        if not tok.value[0].islower():
            self.fail("variables must be lowercase")
        return tok.value


class _Backtrack(Exception):
    pass


def _run(parser: _Parser, production) :
    try:
        node = production()
    except _Backtrack:
        pos, message = parser.best_error or (parser.peek().start, "could not parse")
        raise ParseError(message, parser.text, SourceSpan(pos, pos + 1)) from None
    tok = parser.peek()
    if tok.kind != "eof":
        if parser.best_error is not None and parser.best_error[0] >= tok.start:
            message = parser.best_error[1]
        else:
            message = f"unexpected {tok.value!r}"
        raise ParseError(message, parser.text, SourceSpan(tok.start, tok.end))
    return node


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse a formula and check it against the signature.

    Raises ParseError for syntax errors (with position) and
    WellFormednessError for arity or unknown-symbol problems.
    """
    parser = _Parser(text)
    node = _run(parser, parser.formula)
    report = well_formed(node, sig)
    if not report.accepted:
        raise WellFormednessError(report)
    return node


def parse_term(text: str, sig: Signature | None = None) -> Term:
    parser = _Parser(text)
    node = _run(parser, parser.term)
    if sig is not None:
        report = well_formed(node, sig)
        if not report.accepted:
            raise WellFormednessError(report)
    return node


def parse_sequent(hyps: list[str], goal: str, sig: Signature) -> Sequent:
    return Sequent.make([parse_formula(h, sig) for h in hyps], parse_formula(goal, sig))


# ---------------------------------------------------------------------------
# Renderer

# Precedence ranks, loosest = highest.  A child whose rank exceeds what its
# context admits gets wrapped in parentheses.
_ATOM, _NOT, _SAYS, _AND, _OR, _IMP, _DELEG, _QUANT = range(8)


def _rank(f: Formula) -> int:
    match f:
        case TrueF() | FalseF() | Relation() | Equals():
            return _ATOM
        case Not():
            return _NOT
        case Says():
            return _SAYS
        case And():
            return _AND
        case Or():
            return _OR
        case Implies():
            return _IMP
        case Speaksfor() | SpeaksforRestricted():
            return _DELEG
        case Forall() | Exists():
            return _QUANT
    raise TypeError(f"not a formula: {f!r}")


def render(f: Formula) -> str:
    """Concrete syntax with minimal parentheses."""
    return _render(f, _QUANT)


def _render(f: Formula, allowed: int) -> str:
    if _rank(f) > allowed:
        return f"({_render(f, _QUANT)})"
    match f:
        case TrueF():
            return "true"
        case FalseF():
            return "false"
        case Relation(symbol, args):
            return _render_application(symbol, args)
        case Equals(left, right):
            return f"{render_term(left)} = {render_term(right)}"
        case Not(body):
            return f"not {_render(body, _NOT)}"
        case Says(principal, body):
            return f"{render_term(principal)} says {_render(body, _SAYS)}"
        case And(left, right):
            return f"{_render(left, _AND)} and {_render(right, _SAYS)}"
        case Or(left, right):
            return f"{_render(left, _OR)} or {_render(right, _AND)}"
        case Implies(left, right):
            return f"{_render(left, _OR)} => {_render(right, _IMP)}"
        case Speaksfor(left, right):
            return f"{render_term(left)} =>> {render_term(right)}"
        case SpeaksforRestricted(left, right, var, pattern):
            return (
                f"{render_term(left)} =>> {render_term(right)} "
                f"on ({var} : {_render(pattern, _QUANT)})"
            )
        case Forall(var, body):
            return f"forall {var} : {_render(body, _QUANT)}"
        case Exists(var, body):
            return f"exists {var} : {_render(body, _QUANT)}"
    raise TypeError(f"not a formula: {f!r}")


def render_term(t: Term) -> str:
    match t:
        case Variable(name):
            return name
        case Application(symbol, args):
            return _render_application(symbol, args)
        case Subprincipal(parent, child):
            left = render_term(parent)
            right = render_term(child)
            if isinstance(child, Subprincipal):
                right = f"({right})"
            return f"{left}.{right}"
        case Group(var, body):
            return f"{{{var} : {_render(body, _QUANT)}}}"
    raise TypeError(f"not a term: {t!r}")


def _render_application(symbol: str, args: tuple[Term, ...]) -> str:
    return f"{symbol}({', '.join(render_term(a) for a in args)})"
