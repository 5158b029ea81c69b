"""Reader and writer for the ``.pde`` system-description language.

The grammar lives in ``docs/grammar.md``. A short example::

    system wave {
      coordinates x y z t;
      fields Phi;
      eq: d(t,t)Phi - d(x,x)Phi - d(y,y)Phi - d(z,z)Phi = 0;
    }

Parameters are substituted while parsing, so the resulting system only holds
rational coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .combinatorics import MultiIndex
from .system import InvalidSystemError, JetCoordinate, LinearEquation, PDESystem, fraction_to_str

KEYWORDS = frozenset({"system", "coordinates", "fields", "param", "gammas", "eq", "d"})
MAX_COMPONENTS = 4096
MAX_DERIVATIVES = 64


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    col_start: int
    col_end: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col_start}-{self.col_end}"


class ParseError(Exception):
    def __init__(self, span: SourceSpan, message: str, expected: tuple[str, ...] = ()):
        if not message:
            raise ValueError("parse errors need a message")
        self.span = span
        self.message = message
        self.expected = tuple(expected)
        super().__init__(str(self))

    def __str__(self) -> str:
        text = f"{self.span}: {self.message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text


class SerializeError(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, PUNCT, EOF
    text: str
    line: int
    col: int

    @property
    def end(self) -> int:
        return self.col + max(len(self.text), 1)


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\f\v]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)"
    r"|(?P<punct>[{};,\[\]()=+\-*:/])"
)


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if match is None:
            raise ParseError(SourceSpan(filename, line, col, col + 1), f"unexpected character {text[pos]!r}")
        kind = match.lastgroup
        value = match.group()
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind == "ident":
            tokens.append(Token("IDENT", value, line, col))
        elif kind == "int":
            tokens.append(Token("INT", value, line, col))
        elif kind == "punct":
            tokens.append(Token("PUNCT", value, line, col))
        pos = match.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


@dataclass
class _Declarations:
    coordinates: dict[str, int] = field(default_factory=dict)
    scalars: dict[str, int] = field(default_factory=dict)
    vectors: dict[str, tuple[int, int]] = field(default_factory=dict)  # name -> (first index, size)
    field_names: list[str] = field(default_factory=list)
    params: dict[str, Fraction] = field(default_factory=dict)

    def taken(self, name: str) -> bool:
        return name in self.coordinates or name in self.scalars or name in self.vectors or name in self.params


class _Parser:
    def __init__(self, text: str, filename: str, overrides: Mapping[str, Fraction]):
        self.filename = filename
        self.tokens = tokenize(text, filename)
        self.pos = 0
        self.overrides = {k: Fraction(v) for k, v in overrides.items()}
        self.decl = _Declarations()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def span(self, tok: Token | None = None) -> SourceSpan:
        tok = tok or self.tok
        return SourceSpan(self.filename, tok.line, tok.col, tok.end)

    def error(self, message: str, expected: tuple[str, ...] = (), tok: Token | None = None) -> ParseError:
        return ParseError(self.span(tok), message, expected)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("PUNCT", "IDENT") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"unexpected {found!r}", (repr(text),))
        tok = self.tok
        self.pos += 1
        return tok

    def ident(self, what: str) -> Token:
        tok = self.tok
        if tok.kind != "IDENT":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}", (what,))
        if tok.text in KEYWORDS:
            raise self.error(f"keyword {tok.text!r} cannot be used as {what}", (what,))
        self.pos += 1
        return tok

    def integer(self, what: str) -> int:
        tok = self.tok
        if tok.kind != "INT":
            raise self.error(f"unexpected {tok.text or 'end of input'!r}", (what,))
        self.pos += 1
        return int(tok.text)

    def rational(self) -> Fraction:
        start = self.tok
        num = self.integer("rational number")
        if self.at("/"):
            self.pos += 1
            den = self.integer("denominator")
            if den == 0:
                raise self.error("zero denominator", tok=start)
            return Fraction(num, den)
        return Fraction(num)

    # grammar
    def parse(self) -> PDESystem:
        self.expect("system")
        name = self.ident("system name").text
        self.expect("{")
        self.coordinates()
        self.fields()
        while self.at("param"):
            self.param()
        gammas: tuple[int, ...] = ()
        if self.at("gammas"):
            gammas = self.gammas()
        equations = []
        if not self.at("eq"):
            raise self.error("a system needs at least one equation", ("'eq'",))
        while self.at("eq"):
            equations.append(self.equation())
        self.expect("}")
        if self.tok.kind != "EOF":
            raise self.error(f"unexpected {self.tok.text!r} after the system", ("end of input",))
        unknown = set(self.overrides) - set(self.decl.params)
        if unknown:
            raise ParseError(
                SourceSpan(self.filename, 1, 1, 2), f"override for undeclared parameter {sorted(unknown)[0]!r}"
            )
        try:
            return PDESystem(
                name=name,
                coordinate_names=tuple(self.decl.coordinates),
                field_names=tuple(self.decl.field_names),
                equations=tuple(equations),
                gammas=gammas,
                params=tuple(self.decl.params.items()),
            )
        except InvalidSystemError as exc:
            raise ParseError(SourceSpan(self.filename, 1, 1, 2), str(exc)) from None

    def coordinates(self) -> None:
        self.expect("coordinates")
        while self.tok.kind == "IDENT" and self.tok.text not in KEYWORDS:
            tok = self.ident("coordinate name")
            if self.decl.taken(tok.text):
                raise self.error(f"duplicate name {tok.text!r}", tok=tok)
            self.decl.coordinates[tok.text] = len(self.decl.coordinates) + 1
        if not self.decl.coordinates:
            raise self.error("at least one coordinate is required", ("coordinate name",))
        self.expect(";")

    def fields(self) -> None:
        self.expect("fields")
        while True:
            tok = self.ident("field name")
            if self.decl.taken(tok.text):
                raise self.error(f"duplicate name {tok.text!r}", tok=tok)
            if self.at("["):
                self.pos += 1
                size_tok = self.tok
                size = self.integer("component count")
                if not 1 <= size <= MAX_COMPONENTS:
                    raise self.error(f"component count must lie in 1..{MAX_COMPONENTS}", tok=size_tok)
                self.expect("]")
                self.decl.vectors[tok.text] = (len(self.decl.field_names) + 1, size)
                self.decl.field_names.extend(f"{tok.text}[{i}]" for i in range(1, size + 1))
            else:
                self.decl.scalars[tok.text] = len(self.decl.field_names) + 1
                self.decl.field_names.append(tok.text)
            if len(self.decl.field_names) > MAX_COMPONENTS:
                raise self.error("too many field components", tok=tok)
            if self.at(","):
                self.pos += 1
                continue
            self.expect(";")
            return

    def param(self) -> None:
        self.expect("param")
        tok = self.ident("parameter name")
        if self.decl.taken(tok.text):
            raise self.error(f"duplicate name {tok.text!r}", tok=tok)
        self.expect("=")
        sign = 1
        if self.at("-"):
            self.pos += 1
            sign = -1
        value = sign * self.rational()
        self.expect(";")
        self.decl.params[tok.text] = self.overrides.get(tok.text, value)

    def gammas(self) -> tuple[int, ...]:
        self.expect("gammas")
        self.expect("=")
        self.expect("[")
        values = [self.integer("gauge count")]
        while self.at(","):
            self.pos += 1
            values.append(self.integer("gauge count"))
        close = self.expect("]")
        self.expect(";")
        while values and values[-1] == 0:
            values.pop()
        if any(v > MAX_COMPONENTS for v in values):
            raise self.error("gauge count too large", tok=close)
        return tuple(values)

    def equation(self) -> LinearEquation:
        start = self.expect("eq")
        self.expect(":")
        terms: dict[JetCoordinate, Fraction] = {}
        sign = Fraction(1)
        if self.at("-"):
            self.pos += 1
            sign = Fraction(-1)
        elif self.at("+"):
            self.pos += 1
        self.term(sign, terms)
        while self.at("+") or self.at("-"):
            sign = Fraction(1) if self.tok.text == "+" else Fraction(-1)
            self.pos += 1
            self.term(sign, terms)
        self.expect("=")
        zero = self.tok
        if zero.kind != "INT" or int(zero.text) != 0:
            raise self.error("the right-hand side must be 0 (only homogeneous equations are admitted)", ("'0'",))
        self.pos += 1
        self.expect(";")
        cleaned = {c: v for c, v in terms.items() if v}
        if not cleaned:
            raise self.error("equation has no non-zero terms", tok=start)
        return LinearEquation(tuple(cleaned.items()))

    def term(self, sign: Fraction, terms: dict[JetCoordinate, Fraction]) -> None:
        first = self.tok
        coeff = sign
        had_factor = False
        # coefficient factors: rationals and parameter names joined by '*'
        while True:
            if self.tok.kind == "INT":
                coeff *= self.rational()
                had_factor = True
            elif self.tok.kind == "IDENT" and self.tok.text in self.decl.params:
                coeff *= self.decl.params[self.tok.text]
                had_factor = True
                self.pos += 1
            else:
                break
            if self.at("*"):
                self.pos += 1
                continue
            break
        derivs: list[int] = []
        if self.at("d") and self.peek().text == "(":
            self.pos += 2
            derivs.append(self.coordinate())
            while self.at(","):
                self.pos += 1
                derivs.append(self.coordinate())
                if len(derivs) > MAX_DERIVATIVES:
                    raise self.error("too many derivatives in one term")
            self.expect(")")
        if self.tok.kind != "IDENT" or self.tok.text in KEYWORDS:
            if had_factor and not derivs:
                raise self.error("inhomogeneous term (a constant without a field)", ("field name",), tok=first)
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}", ("field name", "'d('"))
        name_tok = self.tok
        name = name_tok.text
        self.pos += 1
        if name in self.decl.vectors:
            first_index, size = self.decl.vectors[name]
            self.expect("[")
            comp_tok = self.tok
            comp = self.integer("component index")
            if not 1 <= comp <= size:
                raise self.error(f"component {comp} of {name!r} outside 1..{size}", tok=comp_tok)
            self.expect("]")
            field_index = first_index + comp - 1
        elif name in self.decl.scalars:
            field_index = self.decl.scalars[name]
        elif name in self.decl.coordinates:
            raise self.error(f"coordinate {name!r} used where a field is expected", ("field name",), tok=name_tok)
        else:
            raise self.error(f"unknown name {name!r}", ("field name", "parameter name"), tok=name_tok)
        n = len(self.decl.coordinates)
        coord = JetCoordinate(field_index, MultiIndex.from_coordinates(n, derivs))
        terms[coord] = terms.get(coord, Fraction(0)) + coeff

    def coordinate(self) -> int:
        tok = self.tok
        if tok.kind != "IDENT" or tok.text not in self.decl.coordinates:
            what = tok.text or "end of input"
            raise self.error(f"unknown coordinate {what!r}", ("coordinate name",))
        self.pos += 1
        return self.decl.coordinates[tok.text]


def parse(text: str, filename: str = "<input>", overrides: Mapping[str, Fraction] | None = None) -> PDESystem:
    """Parse DSL text; raises ParseError pointing at the first problem."""
    return _Parser(text, filename, overrides or {}).parse()


def parse_file(path, overrides: Mapping[str, Fraction] | None = None) -> PDESystem:
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    return parse(text, str(path), overrides)


_VECTOR_NAME = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[([0-9]+)\]$")


def _field_groups(names: tuple[str, ...]) -> list[tuple[str, int]]:
    """Collapse ``A[1]..A[k]`` runs back into ``(A, k)``; scalars get size 0."""
    groups: list[tuple[str, int]] = []
    i = 0
    while i < len(names):
        match = _VECTOR_NAME.match(names[i])
        if match and match.group(2) == "1":
            base = match.group(1)
            size = 1
            while i + size < len(names) and names[i + size] == f"{base}[{size + 1}]":
                size += 1
            groups.append((base, size))
            i += size
        elif match:
            raise SerializeError(f"field {names[i]!r} is not part of a contiguous vector")
        else:
            groups.append((names[i], 0))
            i += 1
    return groups


def serialize(S: PDESystem) -> str:
    """Canonical DSL text; terms appear in column order (class descending)."""
    if not S.equations:
        raise SerializeError("cannot serialize a system without equations")
    groups = _field_groups(S.field_names)
    field_decl = ", ".join(f"{name}[{size}]" if size else name for name, size in groups)
    lines = [f"system {S.name} {{", f"  coordinates {' '.join(S.coordinate_names)};", f"  fields {field_decl};"]
    for key, value in S.params:
        lines.append(f"  param {key} = {fraction_to_str(value)};")
    if S.gammas:
        lines.append(f"  gammas = [{', '.join(str(g) for g in S.gammas)}];")
    for eq in S.equations:
        lines.append(f"  eq: {_equation_text(eq, S)} = 0;")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _equation_text(eq: LinearEquation, S: PDESystem) -> str:
    pieces = []
    for i, (coord, coeff) in enumerate(eq.terms):
        mag = abs(coeff)
        sign = "-" if coeff < 0 else "+"
        deriv = ""
        if coord.order:
            deriv = "d(" + ",".join(S.coordinate_names[mu - 1] for mu in coord.multi_index.coordinates()) + ")"
        body = deriv + S.field_names[coord.field_index - 1]
        if mag != 1:
            body = f"{fraction_to_str(mag)}*{body}"
        if i == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)
