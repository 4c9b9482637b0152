"""Text format for frameworks, programs and queries.

One clause per ``.``::

    p :- not q, -r.         % rule
    abducible a.            % declares a and -a
    :- p, -a.               % integrity rule, head bottom

``not q`` and ``not(q)`` are both accepted for default negation.  Atom names
are ground: lowercase/digit-initial identifiers (``*`` and ``'`` allowed) with
optional ground arguments.  Capitalised or ``_``-initial names are variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import AbducibleHeadError, NonGroundError, ParseError, QueryShapeError, ReservedSymbolError
from .model import (
    BOTTOM,
    AbductiveFramework,
    Literal,
    ObjectiveLiteral,
    Program,
    Rule,
    conj_e,
    is_reserved_name,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<neck>:-)
  | (?P<query>\?-)
  | (?P<name>[a-z0-9][A-Za-z0-9_*']*)
  | (?P<var>[A-Z_][A-Za-z0-9_*']*)
  | (?P<punct>[(),.\-])
    """,
    re.VERBOSE,
)


@dataclass(slots=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind if kind != "punct" else chunk, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + chunk.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


@dataclass(frozen=True)
class SourceDocument:
    """Parsed clauses with the position of every rule head, kept for diagnostics."""

    rules: tuple[Rule, ...]
    integrity: tuple[Rule, ...]
    abducibles: tuple[ObjectiveLiteral, ...]
    positions: dict  # rule -> (line, column) of its first occurrence

    def framework(self) -> AbductiveFramework:
        abds = set()
        for a in self.abducibles:
            abds.add(a)
            abds.add(conj_e(a))
        for r in self.rules:
            if r.head.objective in abds:
                line, col = self.positions[r]
                raise AbducibleHeadError(f"abducible {r.head} is the head of a rule", line, col)
        return AbductiveFramework(Program(self.rules), frozenset(abds), self.integrity)


class _Parser:
    def __init__(self, text: str, allow_reserved: bool, allow_negative_heads: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved
        self.allow_negative_heads = allow_negative_heads

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.tok
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.advance()

    def term(self) -> str:
        t = self.tok
        if t.kind == "var":
            raise NonGroundError(f"variable {t.text} in a ground program", t.line, t.col)
        if t.kind != "name":
            raise ParseError(f"expected a name, found {t.text or 'end of input'!r}", t.line, t.col)
        self.advance()
        if self.tok.kind != "(":
            return t.text
        self.advance()
        args = [self.term()]
        while self.tok.kind == ",":
            self.advance()
            args.append(self.term())
        self.expect(")")
        return f"{t.text}({','.join(args)})"

    def objective(self) -> ObjectiveLiteral:
        start = self.tok
        negated = False
        if start.kind == "-":
            self.advance()
            negated = True
        if self.tok.kind == "name" and self.tok.text == "not":
            raise ParseError("'not' cannot follow explicit negation", self.tok.line, self.tok.col)
        name = self.term()
        if is_reserved_name(name) and (negated or not self.allow_reserved):
            raise ReservedSymbolError(f"reserved symbol {name!r}", start.line, start.col)
        return ObjectiveLiteral(name, negated)

    def literal(self) -> Literal:
        t = self.tok
        if t.kind == "name" and t.text == "not":
            self.advance()
            if self.tok.kind == "(":
                self.advance()
                o = self.objective()
                self.expect(")")
            else:
                o = self.objective()
            return Literal(o, True)
        return Literal(self.objective())

    def body(self) -> tuple[Literal, ...]:
        lits = [self.literal()]
        while self.tok.kind == ",":
            self.advance()
            lits.append(self.literal())
        return tuple(lits)

    def document(self) -> SourceDocument:
        rules, integrity, abducibles, positions = [], [], [], {}
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "neck":
                self.advance()
                integrity.append(Rule(BOTTOM, self.body()))
            elif t.kind == "name" and t.text == "abducible" and self.toks[self.i + 1].kind in ("name", "-", "var"):
                self.advance()
                abducibles.append(self.objective())
                while self.tok.kind == ",":
                    self.advance()
                    abducibles.append(self.objective())
            else:
                head = self.literal()
                if head.default_negated and not self.allow_negative_heads:
                    raise ParseError("rule heads must be objective literals", t.line, t.col)
                body = ()
                if self.tok.kind == "neck":
                    self.advance()
                    body = self.body()
                rule = Rule(head, body)
                rules.append(rule)
                positions.setdefault(rule, (t.line, t.col))
            self.expect(".")
        return SourceDocument(tuple(rules), tuple(integrity), tuple(abducibles), positions)


def parse_document(text: str) -> SourceDocument:
    return _Parser(text, allow_reserved=False, allow_negative_heads=False).document()


def parse_framework(text: str) -> AbductiveFramework:
    """Parse a user framework; abducible declarations are closed under explicit negation."""
    return parse_document(text).framework()


def parse_program(text: str, dual: bool = False) -> Program:
    """Parse a rule list.  With ``dual=True`` reserved names and ``not`` heads are allowed."""
    doc = _Parser(text, allow_reserved=dual, allow_negative_heads=dual).document()
    if doc.abducibles:
        raise ParseError("abducible declarations are not allowed in a plain program", 1, 1)
    return Program(doc.rules + doc.integrity)


def parse_query(text: str) -> Literal:
    """Parse a single ground literal such as ``q``, ``not -p`` or ``?- s.``."""
    p = _Parser(text, allow_reserved=False, allow_negative_heads=False)
    if p.tok.kind == "query":
        p.advance()
    lit = p.literal()
    if p.tok.kind == ".":
        p.advance()
    t = p.tok
    if t.kind == ",":
        raise QueryShapeError("queries must be a single literal", t.line, t.col)
    if t.kind != "eof":
        raise ParseError(f"unexpected {t.text!r} after query", t.line, t.col)
    return lit


def serialize(p: Program) -> str:
    """Canonical text, one rule per line; ``parse_program(serialize(p), dual=True) == p``."""
    return "".join(f"{r}\n" for r in p)


def serialize_framework(fw: AbductiveFramework) -> str:
    lines = [str(r) for r in fw.program]
    for a in sorted(fw.abducibles):
        if not a.negated:
            lines.append(f"abducible {a}.")
    for r in fw.integrity:
        lines.append(f":- {', '.join(map(str, r.body))}.")
    return "".join(f"{line}\n" for line in lines)
