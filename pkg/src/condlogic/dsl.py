"""The query language: tokens, a recursive-descent parser and a canonical printer.

One statement per line; ``#`` starts a comment.

    atoms A B C
    event e := A | B
    cond c := C given A
    assess c = 1/2
    query coherent { c = 1/2, (B given A) = 1/3 }
    query extend target (C given A & B)
    query pentails { c, (B given A) } => (C given A & B)

Events use ``~`` (not), ``&`` (and), ``|`` (or), ``T``, ``F`` and
parentheses; conditionals are written ``E given H`` inside parentheses or
named with ``cond``. A braced assignment list after ``coherent`` or
``extend`` overrides the script's ``assess`` lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .events import MAX_ATOMS, BOTTOM, TOP, And, Atom, ConditionalEvent, Event, LogicError, Not, Or, render_event
from .rational import fmt
from .trivalent import ValidityMode

QUERY_KINDS = (
    "coherent", "extend", "pconsistent", "pentails", "valid", "pdt", "pdt-weak", "gie",
    "classify", "conj-table", "iterated-prevision", "frechet", "biconditional",
)
KEYWORDS = {"atoms", "event", "cond", "assess", "query", "given", "target", "hstar", "T", "F"}
WEAK_MODES = ("asymmetric", "symmetric")


class ParseError(ValueError):
    """A diagnostic with a 1-based position and the tokens that would have fit."""

    def __init__(self, message: str, line: int, column: int, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}: {self.message}"
        if self.expected:
            where += f" (expected {' or '.join(self.expected)})"
        return where


# ---------------------------------------------------------------------------
# Tokens


@dataclass(frozen=True)
class Token:
    kind: str  # name, number, op, newline, end
    text: str
    line: int
    column: int


_TOKEN = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<newline>\n)"
    r"|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*)"
    r"|(?P<op>:=|=>|[~&|(){},=*])"
)


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "newline":
            out.append(Token("newline", "\n", line, col))
            line, start = line + 1, m.end()
        elif kind in ("number", "name", "op"):
            out.append(Token(kind, m.group(), line, col))  # type: ignore[arg-type]
        pos = m.end()
    out.append(Token("newline", "\n", line, pos - start + 1))
    out.append(Token("end", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------------------
# Script model


Term = Union[Event, ConditionalEvent]


@dataclass(frozen=True)
class Query:
    """One query. Unused fields stay at their defaults.

    ``assignment`` is ``None`` when the query reads the script's assessments.
    """

    kind: str
    items: tuple[ConditionalEvent, ...] = ()
    assignment: tuple[tuple[ConditionalEvent, Fraction], ...] | None = None
    target: ConditionalEvent | None = None
    first: ConditionalEvent | None = None
    second: ConditionalEvent | None = None
    numbers: tuple[Fraction, ...] = ()
    mode: str = ""
    hstar: Event | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Definition:
    name: str
    value: Term
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Script:
    atoms: tuple[str, ...] = ()
    definitions: tuple[Definition, ...] = ()
    assessments: tuple[tuple[ConditionalEvent, Fraction], ...] = ()
    queries: tuple[Query, ...] = ()


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, text: str, max_atoms: int):
        self.toks = tokenize(text)
        self.i = 0
        self.max_atoms = max_atoms
        self.atoms: list[str] = []
        self.names: dict[str, Term] = {}
        self.definitions: list[Definition] = []
        self.assessments: list[tuple[ConditionalEvent, Fraction]] = []
        self.queries: list[Query] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, message: str, *expected: str, tok: Token | None = None) -> ParseError:
        t = tok or self.tok
        return ParseError(message, t.line, t.column, tuple(expected))

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "name")

    def take(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(f"unexpected {self._show(self.tok)}", repr(text))
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    @staticmethod
    def _show(t: Token) -> str:
        return {"newline": "end of line", "end": "end of input"}.get(t.kind, repr(t.text))

    def name(self, what: str) -> Token:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            raise self.fail(f"unexpected {self._show(t)}", what)
        self.i += 1
        return t

    def end_of_statement(self) -> None:
        if self.tok.kind != "newline":
            raise self.fail(f"unexpected {self._show(self.tok)}", "end of line")
        self.i += 1

    # statements
    def script(self) -> Script:
        while self.tok.kind != "end":
            if self.tok.kind == "newline":
                self.i += 1
                continue
            t = self.tok
            handler = {"atoms": self.s_atoms, "event": self.s_event, "cond": self.s_cond,
                       "assess": self.s_assess, "query": self.s_query}.get(t.text if t.kind == "name" else "")
            if handler is None:
                raise self.fail(f"unexpected {self._show(t)}", "atoms", "event", "cond", "assess", "query")
            self.i += 1
            handler()
            self.end_of_statement()
        return Script(tuple(self.atoms), tuple(self.definitions), tuple(self.assessments), tuple(self.queries))

    def s_atoms(self) -> None:
        first = True
        while self.tok.kind == "name" or first:
            t = self.name("an atom name")
            if t.text in self.atoms or t.text in self.names:
                raise self.fail(f"{t.text} is already declared", tok=t)
            if len(self.atoms) >= self.max_atoms:
                raise self.fail(f"more than {self.max_atoms} atoms", tok=t)
            self.atoms.append(t.text)
            first = False

    def _define(self, value_of) -> None:
        t = self.name("a name")
        if t.text in self.names or t.text in self.atoms:
            raise self.fail(f"{t.text} is already defined", tok=t)
        self.take(":=")
        value = value_of()
        self.names[t.text] = value
        self.definitions.append(Definition(t.text, value, t.line))

    def s_event(self) -> None:
        self._define(self.expr)

    def s_cond(self) -> None:
        self._define(self.conditional_body)

    def s_assess(self) -> None:
        c = self.cterm()
        self.take("=")
        self.assessments.append((c, self.probability()))

    # expressions
    def conditional_body(self) -> ConditionalEvent:
        e = self.expr()
        h_tok = self.tok
        h = self.expr() if self.accept("given") else TOP
        return self._conditional(e, h, h_tok)

    def _conditional(self, e: Event, h: Event, tok: Token) -> ConditionalEvent:
        try:
            return ConditionalEvent(e, h)
        except LogicError as exc:
            raise self.fail(str(exc), tok=tok) from None

    def expr(self) -> Event:
        parts = [self.conj()]
        while self.accept("|"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Event:
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Event:
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("("):
            e = self.expr()
            self.take(")")
            return e
        t = self.tok
        if t.kind == "name" and t.text in ("T", "F"):
            self.i += 1
            return TOP if t.text == "T" else BOTTOM
        if t.kind != "name" or t.text in KEYWORDS:
            raise self.fail(f"unexpected {self._show(t)}", "an event")
        self.i += 1
        if t.text in self.atoms:
            return Atom(t.text)
        value = self.names.get(t.text)
        if value is None:
            raise self.fail(f"undefined name {t.text}", tok=t)
        if isinstance(value, ConditionalEvent):
            if value.antecedent != TOP:
                raise self.fail(f"{t.text} is a conditional and cannot be used inside an event", tok=t)
            return value.consequent
        return value

    def cterm(self) -> ConditionalEvent:
        """A named conditional, ``( E [given H] )`` or a bare event expression."""
        t = self.tok
        if self.accept("("):
            c = self.conditional_body()
            self.take(")")
            return c
        value = self.names.get(t.text) if t.kind == "name" else None
        if isinstance(value, ConditionalEvent) and value.antecedent != TOP:
            self.i += 1
            return value
        return ConditionalEvent.of(self.expr())

    def event_term(self) -> Event:
        t = self.tok
        c = self.cterm()
        if c.antecedent != TOP:
            raise self.fail("an event is needed here, not a conditional", tok=t)
        return c.consequent

    def number(self) -> Fraction:
        t = self.tok
        if t.kind != "number":
            raise self.fail(f"unexpected {self._show(t)}", "a rational like 1/2")
        self.i += 1
        num, _, den = t.text.partition("/")
        if den and int(den) == 0:
            raise self.fail("zero denominator", tok=t)
        return Fraction(int(num), int(den or 1))

    def probability(self) -> Fraction:
        t = self.tok
        v = self.number()
        if not 0 <= v <= 1:
            raise self.fail(f"{fmt(v)} is outside [0, 1]", tok=t)
        return v

    def term_list(self) -> tuple[ConditionalEvent, ...]:
        self.take("{")
        out: list[ConditionalEvent] = []
        if not self.at("}"):
            out.append(self.cterm())
            while self.accept(","):
                out.append(self.cterm())
        self.take("}")
        return tuple(out)

    def assignment_list(self) -> tuple[tuple[ConditionalEvent, Fraction], ...] | None:
        if not self.at("{"):
            return None
        self.take("{")
        out: list[tuple[ConditionalEvent, Fraction]] = []
        while True:
            c = self.cterm()
            self.take("=")
            out.append((c, self.probability()))
            if not self.accept(","):
                break
        self.take("}")
        return tuple(out)

    # queries
    def s_query(self) -> None:
        t = self.tok
        if t.kind != "name" or t.text not in QUERY_KINDS:
            raise self.fail(f"unknown query {self._show(t)}", *QUERY_KINDS)
        self.i += 1
        body = getattr(self, "q_" + t.text.replace("-", "_"))
        fields = body()
        self.queries.append(Query(t.text, line=t.line, **fields))

    def q_coherent(self) -> dict:
        return {"assignment": self.assignment_list()}

    def q_extend(self) -> dict:
        assignment = self.assignment_list()
        self.take("target")
        return {"assignment": assignment, "target": self.cterm()}

    def q_pconsistent(self) -> dict:
        return {"items": self.term_list()}

    def _entailment(self) -> dict:
        items = self.term_list()
        self.take("=>")
        return {"items": items, "target": self.cterm()}

    q_pentails = q_gie = q_classify = q_iterated_prevision = _entailment

    def q_valid(self) -> dict:
        t = self.tok
        mode = self.name("a validity mode").text
        if self.accept("*"):
            mode += "*"
        if mode not in {m.value for m in ValidityMode}:
            raise self.fail(f"unknown validity mode {mode}", *(m.value for m in ValidityMode), tok=t)
        return {"mode": mode, **self._entailment()}

    def q_pdt(self) -> dict:
        items = self.term_list()
        first = self.cterm()
        self.take("=>")
        return {"items": items, "first": first, "second": self.cterm()}

    def q_pdt_weak(self) -> dict:
        items = self.term_list()
        first = self.event_term()
        self.take("=>")
        second = self.event_term()
        hstar = None
        if self.accept("hstar"):
            hstar = self.event_term()
        mode = "asymmetric"
        if self.tok.kind == "name" and self.tok.text in WEAK_MODES:
            mode = self.tok.text
            self.i += 1
        return {"items": items, "first": ConditionalEvent.of(first), "second": ConditionalEvent.of(second),
                "hstar": hstar, "mode": mode}

    def q_conj_table(self) -> dict:
        return {"items": self.term_list()}

    def _numbers(self, count: int | None) -> dict:
        out = [self.probability()]
        while self.tok.kind == "number":
            out.append(self.probability())
        if count is not None and len(out) != count:
            raise self.fail(f"{count} values are needed, got {len(out)}")
        return {"numbers": tuple(out)}

    def q_frechet(self) -> dict:
        return self._numbers(None)

    def q_biconditional(self) -> dict:
        return self._numbers(2)


def parse_script(text: str, max_atoms: int = MAX_ATOMS) -> Script:
    """Parse a script; raises :class:`ParseError` with a position."""
    return _Parser(text, max_atoms).script()


# ---------------------------------------------------------------------------
# Canonical printing


def render_term(c: Term) -> str:
    if isinstance(c, Event):
        return f"({render_event(c)})"
    if c.antecedent == TOP:
        return f"({render_event(c.consequent)})"
    return f"({render_event(c.consequent)} given {render_event(c.antecedent)})"


def _terms(items: tuple[ConditionalEvent, ...]) -> str:
    return "{" + ", ".join(render_term(c) for c in items) + "}"


def _assignment(pairs: tuple[tuple[ConditionalEvent, Fraction], ...]) -> str:
    return "{" + ", ".join(f"{render_term(c)} = {fmt(v)}" for c, v in pairs) + "}"


def render_query(q: Query) -> str:
    head = f"query {q.kind}"
    if q.kind == "coherent":
        return head + (f" {_assignment(q.assignment)}" if q.assignment is not None else "")
    if q.kind == "extend":
        lead = f" {_assignment(q.assignment)}" if q.assignment is not None else ""
        return f"{head}{lead} target {render_term(q.target)}"  # type: ignore[arg-type]
    if q.kind in ("pconsistent", "conj-table"):
        return f"{head} {_terms(q.items)}"
    if q.kind == "valid":
        return f"{head} {q.mode} {_terms(q.items)} => {render_term(q.target)}"  # type: ignore[arg-type]
    if q.kind == "pdt":
        return f"{head} {_terms(q.items)} {render_term(q.first)} => {render_term(q.second)}"  # type: ignore[arg-type]
    if q.kind == "pdt-weak":
        text = f"{head} {_terms(q.items)} {render_term(q.first)} => {render_term(q.second)}"  # type: ignore[arg-type]
        if q.hstar is not None:
            text += f" hstar {render_term(q.hstar)}"
        return f"{text} {q.mode}"
    if q.kind in ("frechet", "biconditional"):
        return f"{head} " + " ".join(fmt(v) for v in q.numbers)
    return f"{head} {_terms(q.items)} => {render_term(q.target)}"  # type: ignore[arg-type]


def render_script(s: Script) -> str:
    """Canonical text; names are expanded, so ``parse_script`` gives ``s`` back."""
    lines = []
    if s.atoms:
        lines.append("atoms " + " ".join(s.atoms))
    for d in s.definitions:
        if isinstance(d.value, ConditionalEvent):
            body = render_term(d.value)[1:-1]
            lines.append(f"cond {d.name} := {body}")
        else:
            lines.append(f"event {d.name} := {render_event(d.value)}")
    for c, v in s.assessments:
        lines.append(f"assess {render_term(c)} = {fmt(v)}")
    lines.extend(render_query(q) for q in s.queries)
    return "\n".join(lines) + "\n"
