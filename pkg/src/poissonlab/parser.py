"""Expression and problem-file parser.

Expression grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' (INT | DERIV))*
    atom    := INT ['/' INT] | NAME | DERIV | '(' expr ')'

``d<i>`` is the i-th coordinate derivation.  ``^`` followed by an integer is
a power, followed by a derivation it is a wedge.  Products of terms that
repeat a derivation index are rejected rather than silently set to zero.

Problem files are ``key: value`` lines, ``#`` starts a comment and an
indented line continues the previous value::

    vars: x1, x2, x3
    params: c12, c13, c23
    bivector: c12*x1*x2 * d1^d2 + c13*x1*x3 * d1^d3
              + c23*x2*x3 * d2^d3
    specialize: c12=1, c13=2, c23=3      # or: specialize: generic
    subvariety L12: x1, x2
    field Z: x1*d1 - x2*d2
    homogeneous: false
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .multivector import Multivector
from .polyalg import Poly, VarContext

_DERIV = re.compile(r"d([1-9][0-9]*)\Z")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Syntax or semantic error with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        text = f"line {line}, column {column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str   # INT NAME DERIV OP END
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"\s+|[0-9]+|[A-Za-z_][A-Za-z0-9_]*|[-+*/^(),=]|.", re.S)


def tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        s = m.group()
        if s.isspace():
            pass
        elif s[0].isdigit():
            tokens.append(Token("INT", s, line, column))
        elif s[0].isalpha() or s[0] == "_":
            kind = "DERIV" if _DERIV.match(s) else "NAME"
            tokens.append(Token(kind, s, line, column))
        elif s in "-+*/^(),=":
            tokens.append(Token("OP", s, line, column))
        else:
            raise ParseError(f"unexpected character {s!r}", line, column)
        for ch in s:
            if ch == "\n":
                line += 1
                column = 1
            else:
                column += 1
    tokens.append(Token("END", "", line, column))
    return tokens


class _Graded:
    """Mixed-degree multivector used while parsing: sorted index tuple -> Poly."""

    __slots__ = ("comps",)

    def __init__(self, comps):
        self.comps = {k: v for k, v in comps.items() if v}

    def __add__(self, other):
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return _Graded(out)

    def __neg__(self):
        return _Graded({k: -v for k, v in self.comps.items()})

    def mul(self, other, tok: Token):
        out = {}
        for ka, va in self.comps.items():
            for kb, vb in other.comps.items():
                if set(ka) & set(kb):
                    rep = sorted(set(ka) & set(kb))[0]
                    raise ParseError(f"repeated derivation index d{rep} in one term", tok.line, tok.column)
                inv = sum(1 for x in ka for y in kb if x > y)
                key = tuple(sorted(ka + kb))
                v = va * vb if inv % 2 == 0 else -(va * vb)
                out[key] = out[key] + v if key in out else v
        return _Graded(out)

    def degrees(self):
        return {len(k) for k in self.comps}


class ExpressionParser:
    def __init__(self, ctx: VarContext, tokens: List[Token]):
        self.ctx = ctx
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def _is(self, text: str) -> bool:
        return self.tok.kind == "OP" and self.tok.text == text

    def _fail(self, message: str, expected=()):
        t = self.tok
        found = "end of input" if t.kind == "END" else repr(t.text)
        raise ParseError(f"{message}, found {found}", t.line, t.column, expected)

    def _const(self, c) -> _Graded:
        return _Graded({(): self.ctx.const(c)})

    def expr(self) -> _Graded:
        value = self.term()
        while self._is("+") or self._is("-"):
            op = self._advance()
            rhs = self.term()
            value = value + rhs if op.text == "+" else value + (-rhs)
        return value

    def term(self) -> _Graded:
        value = self.unary()
        while self._is("*"):
            op = self._advance()
            value = value.mul(self.unary(), op)
        return value

    def unary(self) -> _Graded:
        if self._is("-"):
            self._advance()
            return -self.unary()
        if self._is("+"):
            self._advance()
            return self.unary()
        return self.power()

    def power(self) -> _Graded:
        value = self.atom()
        while self._is("^"):
            op = self._advance()
            if self.tok.kind == "INT":
                k = int(self._advance().text)
                if value.degrees() - {0}:
                    raise ParseError("power of a derivation; use ^ between derivations for wedge", op.line, op.column)
                base = value.comps.get((), self.ctx.zero())
                value = _Graded({(): base ** k})
            elif self.tok.kind == "DERIV":
                value = value.mul(self.atom(), op)
            else:
                self._fail("expected exponent or derivation after '^'", ("integer", "d<i>"))
        return value

    def atom(self) -> _Graded:
        t = self.tok
        if t.kind == "INT":
            self._advance()
            num = int(t.text)
            if self._is("/"):
                self._advance()
                if self.tok.kind != "INT":
                    self._fail("expected denominator", ("integer",))
                den_tok = self._advance()
                den = int(den_tok.text)
                if den == 0:
                    raise ParseError("zero denominator", den_tok.line, den_tok.column)
                return self._const(Fraction(num, den))
            return self._const(num)
        if t.kind == "NAME":
            self._advance()
            if t.text not in self.ctx:
                raise ParseError(f"undeclared symbol {t.text!r}", t.line, t.column)
            return _Graded({(): self.ctx.symbol(t.text)})
        if t.kind == "DERIV":
            self._advance()
            i = int(_DERIV.match(t.text).group(1))
            if i > self.ctx.nvars:
                raise ParseError(f"derivation {t.text} out of range d1..d{self.ctx.nvars}", t.line, t.column)
            return _Graded({(i,): self.ctx.one()})
        if self._is("("):
            self._advance()
            value = self.expr()
            if not self._is(")"):
                self._fail("unbalanced parenthesis", ("')'", "'+'", "'-'", "'*'", "'^'"))
            self._advance()
            return value
        self._fail("expected an operand", ("integer", "name", "d<i>", "'('", "'-'"))

    def finish(self):
        if self.tok.kind != "END":
            self._fail("unexpected trailing input", ("'+'", "'-'", "'*'", "'^'", "end of input"))


def _parse_graded(text: str, ctx: VarContext, line: int = 1, column: int = 1) -> Tuple[_Graded, Token]:
    tokens = tokenize(text, line, column)
    p = ExpressionParser(ctx, tokens)
    value = p.expr()
    p.finish()
    return value, tokens[0]


def parse_poly(text: str, ctx: VarContext, line: int = 1, column: int = 1) -> Poly:
    value, first = _parse_graded(text, ctx, line, column)
    if value.degrees() - {0}:
        raise ParseError("expected a function, got a multivector", first.line, first.column)
    return value.comps.get((), ctx.zero())


def parse_multivector(text: str, ctx: VarContext, degree: Optional[int] = None,
                      line: int = 1, column: int = 1) -> Multivector:
    value, first = _parse_graded(text, ctx, line, column)
    degs = value.degrees()
    if len(degs) > 1:
        raise ParseError(f"mixed degrees {sorted(degs)} in one multivector", first.line, first.column)
    got = degs.pop() if degs else degree
    if got is None:
        got = 0
    if degree is not None and got != degree:
        raise ParseError(f"expected a degree {degree} multivector, got degree {got}", first.line, first.column)
    return Multivector(ctx, got, value.comps)


def parse_rational(text: str, line: int = 1, column: int = 1) -> Fraction:
    tokens = tokenize(text, line, column)
    i = 0
    sign = 1
    if tokens[i].kind == "OP" and tokens[i].text in "+-":
        sign = -1 if tokens[i].text == "-" else 1
        i += 1
    t = tokens[i]
    if t.kind != "INT":
        raise ParseError("expected a rational literal", t.line, t.column, ("integer",))
    value = Fraction(int(t.text))
    i += 1
    if tokens[i].kind == "OP" and tokens[i].text == "/":
        d = tokens[i + 1]
        if d.kind != "INT" or int(d.text) == 0:
            raise ParseError("expected a nonzero denominator", d.line, d.column, ("integer",))
        value /= int(d.text)
        i += 2
    if tokens[i].kind != "END":
        t = tokens[i]
        raise ParseError("unexpected trailing input", t.line, t.column, ("end of input",))
    return sign * value


# ---------------------------------------------------------------------------
# problem files


@dataclass
class ProblemFile:
    vars: List[str]
    params: List[str]
    bivector: str
    specialize: Union[None, str, Dict[str, Fraction]] = None
    subvarieties: Dict[str, List[str]] = field(default_factory=dict)
    connection_fields: Dict[str, str] = field(default_factory=dict)
    homogeneous: bool = False
    # parsed forms
    ctx: Optional[VarContext] = None
    pi: Optional[Multivector] = None
    ideals: Dict[str, List[Poly]] = field(default_factory=dict)
    fields: Dict[str, Multivector] = field(default_factory=dict)


_KEY_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:[ \t]+([A-Za-z_][A-Za-z0-9_]*))?[ \t]*:")
_NAMED_KEYS = {"subvariety", "field"}
_PLAIN_KEYS = {"vars", "params", "bivector", "specialize", "homogeneous"}


@dataclass
class _Entry:
    key: str
    name: Optional[str]
    text: str
    line: int
    column: int


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_top(entry: _Entry) -> List[Tuple[str, int, int]]:
    """Split a value at top-level commas, keeping source positions."""
    parts = []
    depth = 0
    line, col = entry.line, entry.column
    start = (0, line, col)
    for i, ch in enumerate(entry.text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((entry.text[start[0]:i], start[1], start[2]))
            start = (i + 1, line, col + 1)
        if ch == "\n":
            line += 1
            col = 1
            if start[0] == i + 1:
                start = (i + 1, line, col)
        else:
            col += 1
    parts.append((entry.text[start[0]:], start[1], start[2]))
    return parts


def _names(entry: _Entry) -> List[str]:
    out = []
    if not entry.text.strip():
        return out
    for chunk, line, col in _split_top(entry):
        s = chunk.strip()
        lead = len(chunk) - len(chunk.lstrip(" \t"))
        if not _NAME.match(s):
            raise ParseError(f"invalid name {s!r}", line, col + lead, ("identifier",))
        if _DERIV.match(s):
            raise ParseError(f"name {s!r} clashes with derivation syntax", line, col + lead)
        out.append(s)
    return out


def _read_entries(text: str) -> List[_Entry]:
    entries: List[_Entry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        if line[0] in " \t":
            if not entries:
                raise ParseError("continuation line before any key", lineno, 1)
            entries[-1].text += "\n" + line
            continue
        m = _KEY_RE.match(line)
        if not m:
            raise ParseError("expected 'key: value'", lineno, 1, ("key",))
        key, name = m.group(1), m.group(2)
        if key in _NAMED_KEYS:
            if name is None:
                raise ParseError(f"'{key}' needs a name", lineno, m.end(), ("name",))
        elif key in _PLAIN_KEYS:
            if name is not None:
                raise ParseError(f"'{key}' takes no name", lineno, m.start(2) + 1)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1, sorted(_NAMED_KEYS | _PLAIN_KEYS))
        entries.append(_Entry(key, name, line[m.end():], lineno, m.end() + 1))
    return entries


def parse_problem_file(text: str) -> ProblemFile:
    entries = _read_entries(text)
    seen = {}
    for e in entries:
        ident = (e.key, e.name)
        if ident in seen:
            raise ParseError(f"duplicate entry {e.key}{' ' + e.name if e.name else ''}", e.line, 1)
        seen[ident] = e
    if ("vars", None) not in seen:
        raise ParseError("missing 'vars'", 1, 1, ("vars",))
    if ("bivector", None) not in seen:
        raise ParseError("missing 'bivector'", 1, 1, ("bivector",))

    vars_ = _names(seen[("vars", None)])
    if not vars_:
        e = seen[("vars", None)]
        raise ParseError("at least one chart variable is required", e.line, e.column)
    params = _names(seen[("params", None)]) if ("params", None) in seen else []
    declared = vars_ + params
    if len(set(declared)) != len(declared):
        dup = next(n for n in declared if declared.count(n) > 1)
        e = seen[("params", None)] if dup in params else seen[("vars", None)]
        raise ParseError(f"symbol {dup!r} declared twice", e.line, e.column)
    ctx = VarContext(vars_, params)

    biv = seen[("bivector", None)]
    pf = ProblemFile(vars=vars_, params=params, bivector=biv.text.strip(), ctx=ctx)
    pf.pi = parse_multivector(biv.text, ctx, 2, biv.line, biv.column)

    if ("specialize", None) in seen:
        e = seen[("specialize", None)]
        if e.text.strip() == "generic":
            pf.specialize = "generic"
        else:
            pf.specialize = parse_assignments(e.text, ctx, e.line, e.column)

    if ("homogeneous", None) in seen:
        e = seen[("homogeneous", None)]
        v = e.text.strip().lower()
        if v not in ("true", "false"):
            raise ParseError("expected true or false", e.line, e.column, ("true", "false"))
        pf.homogeneous = v == "true"

    names = set(declared)
    for e in entries:
        if e.key not in _NAMED_KEYS:
            continue
        if e.name in names:
            raise ParseError(f"name {e.name!r} already in use", e.line, 1)
        names.add(e.name)
        if e.key == "subvariety":
            srcs, polys = [], []
            for chunk, line, col in _split_top(e):
                srcs.append(chunk.strip())
                polys.append(parse_poly(chunk, ctx, line, col))
            pf.subvarieties[e.name] = srcs
            pf.ideals[e.name] = polys
        else:
            pf.connection_fields[e.name] = e.text.strip()
            pf.fields[e.name] = parse_multivector(e.text, ctx, 1, e.line, e.column)
    return pf


def parse_assignments(text: str, ctx: VarContext, line: int = 1, column: int = 1) -> Dict[str, Fraction]:
    """Parse ``name=rational, ...`` against the parameters of ``ctx``."""
    entry = _Entry("specialize", None, text, line, column)
    out: Dict[str, Fraction] = {}
    for chunk, ln, col in _split_top(entry):
        if "=" not in chunk:
            lead = len(chunk) - len(chunk.lstrip())
            raise ParseError("expected name=value", ln, col + lead, ("'='",))
        name_part, value_part = chunk.split("=", 1)
        name = name_part.strip()
        lead = len(name_part) - len(name_part.lstrip())
        if name not in ctx.params:
            raise ParseError(f"{name!r} is not a declared parameter", ln, col + lead)
        if name in out:
            raise ParseError(f"parameter {name!r} assigned twice", ln, col + lead)
        out[name] = parse_rational(value_part, ln, col + len(name_part) + 1)
    return out
