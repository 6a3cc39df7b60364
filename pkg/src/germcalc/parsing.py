"""Textual grammar: parsing and printing of scalars, polynomials, vector
fields, diffeomorphism tuples and commutator words.

Grammar (whitespace insignificant between tokens):

    poly    := ['-'] pterm (('+'|'-') pterm)*
    pterm   := factor ('*' factor)*
    factor  := atom ['^' ['-'] INT]
    atom    := INT ['/' INT] | 'i' | VAR | '(' poly ')'
    field   := ['-'] fterm (('+'|'-') fterm)*
    fterm   := pterm DERIV
    diffeo  := '(' poly (',' poly)* ')'
    word    := 'g' INT ['^-1'] | '[' word ',' word ']'

with VAR = x1, x2, ... and DERIV = d1, d2, ...  '^' binds tighter than '*',
which binds tighter than '+'/'-'.  Exponents may be negative; rational
literals are INT or INT/INT; 'i' is the imaginary unit.  Dimension is always
explicit: a variable index above the declared dimension is an error, never a
reason to silently grow the ambient space.

Printers emit canonical graded-lex term order, so parse(print(v)) == v
exactly for every value and printed ASTs reparse to equal ASTs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .diffeos import FormalDiffeo, WordComm, WordLeaf
from .fields import VectorField
from .laurent import LaurentPoly
from .scalars import Scalar


class ParseError(ValueError):
    """Syntax or lowering error, carrying the offending position."""

    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos
        self.line = line
        self.column = col


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<var>x(?P<varidx>\d+))"
    r"|(?P<deriv>d(?P<deridx>\d+))"
    r"|(?P<int>\d+)"
    r"|(?P<imag>i)"
    r"|(?P<gen>g\d+)"
    r"|(?P<op>[-+*/^(),;\[\]]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        for kind in ("var", "deriv", "int", "imag", "gen", "op"):
            val = m.group(kind)
            if val is not None:
                tokens.append(Token(kind, val, m.start(kind)))
                break
        pos = m.end()
    return tokens


# -- AST ------------------------------------------------------------------------


@dataclass(frozen=True)
class NumberLit:
    value: Fraction
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class ImagLit:
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class VarRef:
    index: int
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class PowExpr:
    base: "Expr"
    exponent: int
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class MulExpr:
    factors: tuple["Expr", ...]
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class AddExpr:
    # (sign, term) pairs; sign is +1 or -1
    terms: tuple[tuple[int, "Expr"], ...]
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class FieldTerm:
    sign: int
    coeff: "Expr"
    direction: int
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class FieldExpr:
    terms: tuple[FieldTerm, ...]
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


@dataclass(frozen=True)
class DiffeoExpr:
    components: tuple["Expr", ...]
    span: tuple[int, int] = dataclass_field(compare=False, default=(0, 0))


Expr = NumberLit | ImagLit | VarRef | PowExpr | MulExpr | AddExpr


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.text, len(self.text))
        self.i += 1
        return tok

    def expect_op(self, op: str) -> Token:
        tok = self.next()
        if tok.kind != "op" or tok.value != op:
            raise ParseError(f"expected {op!r}, found {tok.value!r}", self.text, tok.pos)
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "op" and tok.value in ops

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok.value!r}", self.text, tok.pos)

    # poly ----------------------------------------------------------------

    def parse_poly(self) -> AddExpr:
        start = self.peek().pos if self.peek() else 0
        terms = []
        sign = 1
        if self.at_op("-"):
            self.next()
            sign = -1
        elif self.at_op("+"):
            self.next()
        terms.append((sign, self.parse_pterm()))
        while self.at_op("+", "-"):
            op = self.next()
            terms.append((1 if op.value == "+" else -1, self.parse_pterm()))
        end = self.tokens[self.i - 1].pos if self.i else start
        return AddExpr(terms=tuple(terms), span=(start, end))

    def parse_pterm(self) -> Expr:
        factors = [self.parse_factor()]
        while self.at_op("*"):
            self.next()
            factors.append(self.parse_factor())
        if len(factors) == 1:
            return factors[0]
        return MulExpr(factors=tuple(factors), span=factors[0].span)

    def parse_factor(self) -> Expr:
        base = self.parse_atom()
        if self.at_op("^"):
            self.next()
            negative = False
            if self.at_op("-"):
                self.next()
                negative = True
            tok = self.next()
            if tok.kind != "int":
                raise ParseError("expected an integer exponent", self.text, tok.pos)
            e = int(tok.value)
            return PowExpr(base=base, exponent=-e if negative else e, span=base.span)
        return base

    def parse_atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "int":
            value = Fraction(int(tok.value))
            if self.at_op("/"):
                self.next()
                den = self.next()
                if den.kind != "int":
                    raise ParseError("expected a denominator", self.text, den.pos)
                if int(den.value) == 0:
                    raise ParseError("zero denominator", self.text, den.pos)
                value = Fraction(int(tok.value), int(den.value))
            return NumberLit(value=value, span=(tok.pos, tok.pos))
        if tok.kind == "imag":
            return ImagLit(span=(tok.pos, tok.pos))
        if tok.kind == "var":
            return VarRef(index=int(tok.value[1:]), span=(tok.pos, tok.pos))
        if tok.kind == "op" and tok.value == "(":
            inner = self.parse_poly()
            self.expect_op(")")
            # canonical form: parens around a single unsigned term are
            # transparent, so printed trees reparse to themselves
            if len(inner.terms) == 1 and inner.terms[0][0] > 0:
                return inner.terms[0][1]
            return inner
        raise ParseError(f"unexpected token {tok.value!r}", self.text, tok.pos)

    # field ----------------------------------------------------------------

    def parse_field(self) -> FieldExpr:
        start = self.peek().pos if self.peek() else 0
        terms = []
        sign = 1
        if self.at_op("-"):
            self.next()
            sign = -1
        terms.append(self.parse_fterm(sign))
        while self.at_op("+", "-"):
            op = self.next()
            terms.append(self.parse_fterm(1 if op.value == "+" else -1))
        return FieldExpr(terms=tuple(terms), span=(start, terms[-1].span[1]))

    def parse_fterm(self, sign: int) -> FieldTerm:
        coeff = self.parse_pterm()
        tok = self.next()
        if tok.kind != "deriv":
            raise ParseError("expected a direction d<i> after the coefficient", self.text, tok.pos)
        return FieldTerm(
            sign=sign, coeff=coeff, direction=int(tok.value[1:]), span=(coeff.span[0], tok.pos)
        )

    # diffeo ----------------------------------------------------------------

    def parse_diffeo(self) -> DiffeoExpr:
        start = self.expect_op("(").pos
        comps = [self.parse_poly()]
        while self.at_op(","):
            self.next()
            comps.append(self.parse_poly())
        end = self.expect_op(")").pos
        return DiffeoExpr(components=tuple(comps), span=(start, end))

    # commutator word ----------------------------------------------------------

    def parse_word(self):
        tok = self.next()
        if tok.kind == "gen":
            index = int(tok.value[1:])
            inverse = False
            if self.at_op("^"):
                self.next()
                minus = self.next()
                one = self.next()
                if minus.kind != "op" or minus.value != "-" or one.kind != "int" or one.value != "1":
                    raise ParseError("only ^-1 is meaningful on a generator", self.text, tok.pos)
                inverse = True
            return WordLeaf(index, inverse)
        if tok.kind == "op" and tok.value == "[":
            left = self.parse_word()
            self.expect_op(",")
            right = self.parse_word()
            self.expect_op("]")
            return WordComm(left, right)
        raise ParseError(f"unexpected token {tok.value!r} in word", self.text, tok.pos)


# -- lowering ------------------------------------------------------------------


def lower_poly(expr: Expr, dim: int, text: str = "") -> LaurentPoly:
    if isinstance(expr, NumberLit):
        return LaurentPoly.constant(dim, Scalar(expr.value))
    if isinstance(expr, ImagLit):
        return LaurentPoly.constant(dim, Scalar(0, 1))
    if isinstance(expr, VarRef):
        if not 1 <= expr.index <= dim:
            raise ParseError(
                f"variable x{expr.index} exceeds the declared dimension {dim}",
                text, expr.span[0],
            )
        return LaurentPoly.variable(dim, expr.index)
    if isinstance(expr, PowExpr):
        base = lower_poly(expr.base, dim, text)
        if expr.exponent < 0 and len(base.terms) != 1:
            raise ParseError(
                "negative powers are only defined for single-term values",
                text, expr.span[0],
            )
        return base ** expr.exponent
    if isinstance(expr, MulExpr):
        out = LaurentPoly.one(dim)
        for f in expr.factors:
            out = out * lower_poly(f, dim, text)
        return out
    if isinstance(expr, AddExpr):
        out = LaurentPoly.zero(dim)
        for sign, term in expr.terms:
            t = lower_poly(term, dim, text)
            out = out + (t if sign > 0 else -t)
        return out
    raise TypeError(f"not a polynomial expression: {expr!r}")


def lower_field(expr: FieldExpr, dim: int, text: str = "") -> VectorField:
    coeffs = [LaurentPoly.zero(dim) for _ in range(dim)]
    for term in expr.terms:
        if not 1 <= term.direction <= dim:
            raise ParseError(
                f"direction d{term.direction} exceeds the declared dimension {dim}",
                text, term.span[0],
            )
        p = lower_poly(term.coeff, dim, text)
        if term.sign < 0:
            p = -p
        coeffs[term.direction - 1] = coeffs[term.direction - 1] + p
    return VectorField(coeffs)


def lower_diffeo(expr: DiffeoExpr, dim: int, order: int, text: str = "") -> FormalDiffeo:
    if len(expr.components) != dim:
        raise ParseError(
            f"diffeomorphism has {len(expr.components)} components, expected {dim}",
            text, expr.span[0],
        )
    comps = [lower_poly(c, dim, text) for c in expr.components]
    return FormalDiffeo(comps, order)


# -- public entry points ----------------------------------------------------------


def parse_expression(text: str, kind: str):
    """Parse to an AST; kind is 'poly', 'field' or 'diffeo'."""
    p = _Parser(text)
    if kind == "poly":
        out = p.parse_poly()
    elif kind == "field":
        out = p.parse_field()
    elif kind == "diffeo":
        out = p.parse_diffeo()
    else:
        raise ValueError(f"unknown expression kind {kind!r}")
    p.done()
    return out


def parse_poly(text: str, dim: int) -> LaurentPoly:
    return lower_poly(parse_expression(text, "poly"), dim, text)


def parse_field(text: str, dim: int) -> VectorField:
    return lower_field(parse_expression(text, "field"), dim, text)


def parse_diffeo(text: str, dim: int, order: int) -> FormalDiffeo:
    return lower_diffeo(parse_expression(text, "diffeo"), dim, order, text)


def parse_fields(text: str, dim: int) -> list[VectorField]:
    """Semicolon-separated vector fields."""
    return [parse_field(chunk, dim) for chunk in text.split(";") if chunk.strip()]


def parse_word(text: str):
    p = _Parser(text)
    out = p.parse_word()
    p.done()
    return out


# -- printers ---------------------------------------------------------------------


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(s: Scalar) -> str:
    if not s.im:
        return format_rational(s.re)
    if not s.re:
        if s.im == 1:
            return "i"
        if s.im == -1:
            return "-i"
        return f"{format_rational(s.im)}*i"
    im = format_scalar(Scalar(0, s.im))
    if s.im > 0:
        return f"{format_rational(s.re)}+{im}"
    return f"{format_rational(s.re)}{im}"


def _scalar_needs_parens(s: Scalar) -> bool:
    return bool(s.re and s.im)


def _format_term(exps, coeff: Scalar) -> str:
    monomial = "*".join(
        f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
        for i, e in enumerate(exps)
        if e
    )
    if not monomial:
        c = format_scalar(coeff)
        return f"({c})" if _scalar_needs_parens(coeff) else c
    if coeff == Scalar(1):
        return monomial
    if coeff == Scalar(-1):
        return f"-{monomial}"
    c = format_scalar(coeff)
    if _scalar_needs_parens(coeff) or (not coeff.re and coeff.im not in (1, -1)):
        c = f"({c})"
    return f"{c}*{monomial}"


def format_poly(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, coeff in p.sorted_terms():
        term = _format_term(exps, coeff)
        if not parts:
            parts.append(term)
        elif term.startswith("-"):
            parts.append(f" - {term[1:]}")
        else:
            parts.append(f" + {term}")
    return "".join(parts)


def format_field(X: VectorField) -> str:
    parts = []
    for i, c in enumerate(X.coeffs, start=1):
        if c.is_zero():
            continue
        body = format_poly(c)
        if len(c.terms) == 1 and not body.startswith("-"):
            coeff_str = body
        else:
            coeff_str = f"({body})"
        parts.append(f"{coeff_str} d{i}")
    if not parts:
        return "0 d1"
    return " + ".join(parts)


def format_diffeo(phi: FormalDiffeo) -> str:
    return "(" + ", ".join(format_poly(c) for c in phi.components) + ")"


def format_word(word) -> str:
    if isinstance(word, WordLeaf):
        return f"g{word.index}^-1" if word.inverse else f"g{word.index}"
    return f"[{format_word(word.left)},{format_word(word.right)}]"


def format_monomial_header(basis) -> str:
    return " ".join(_format_term(exps, Scalar(1)) for exps in basis)


# -- AST printing (round-trip support for randomly generated trees) ---------------


def format_ast(expr) -> str:
    if isinstance(expr, NumberLit):
        return format_rational(expr.value)
    if isinstance(expr, ImagLit):
        return "i"
    if isinstance(expr, VarRef):
        return f"x{expr.index}"
    if isinstance(expr, PowExpr):
        base = format_ast(expr.base)
        if not isinstance(expr.base, (ImagLit, VarRef)):
            base = f"({base})"
        return f"{base}^{expr.exponent}"
    if isinstance(expr, MulExpr):
        parts = []
        for f in expr.factors:
            s = format_ast(f)
            if isinstance(f, AddExpr):
                s = f"({s})"
            parts.append(s)
        return "*".join(parts)
    if isinstance(expr, AddExpr):
        out = ""
        for k, (sign, term) in enumerate(expr.terms):
            s = format_ast(term)
            if isinstance(term, AddExpr):
                s = f"({s})"
            if k == 0:
                out = s if sign > 0 else f"-{s}"
            else:
                out += f" + {s}" if sign > 0 else f" - {s}"
        return out
    if isinstance(expr, FieldTerm):
        s = format_ast(expr.coeff)
        if isinstance(expr.coeff, AddExpr):
            s = f"({s})"
        return f"{s} d{expr.direction}"
    if isinstance(expr, FieldExpr):
        out = ""
        for k, term in enumerate(expr.terms):
            s = format_ast(term)
            if k == 0:
                out = s if term.sign > 0 else f"-{s}"
            else:
                out += f" + {s}" if term.sign > 0 else f" - {s}"
        return out
    if isinstance(expr, DiffeoExpr):
        return "(" + ", ".join(format_ast(c) for c in expr.components) + ")"
    raise TypeError(f"cannot print {expr!r}")
