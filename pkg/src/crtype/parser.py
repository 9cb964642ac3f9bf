"""Expression frontend for defining functions.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*          # '/' only by a constant
    unary  := '-' unary | '+' unary | factor
    factor := base ('^' nat)?
    base   := rational | 'i' | var | '(' expr ')' | '{' expr '}'
            | func '(' expr ')' | func '{' expr '}'
    func   := 'conj' | 'Re' | 'Im' | 'abs2'
    var    := 'z1' .. 'z9'

Power binds tighter than unary minus, so ``-z1^2`` is ``-(z1^2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .algebra import ExactScalar, HermitianPolynomial
from .errors import ParseError

__all__ = ["parse_expression", "lower", "parse_polynomial", "serialize", "max_variable"]

FUNCS = ("conj", "Re", "Im", "abs2")


@dataclass(frozen=True)
class Span:
    line: int
    column: int


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: Span


@dataclass(frozen=True)
class Imag:
    span: Span


@dataclass(frozen=True)
class Var:
    index: int
    span: Span


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Node"
    span: Span


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    span: Span


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    span: Span


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    span: Span


Node = Union[Num, Imag, Var, Func, Neg, BinOp, Pow]

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<num>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(){}])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span.line, span.column)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tok = m.group()
            tokens.append(Token("op" if kind == "op" else kind, "^" if tok == "**" else tok, span))
        pos = m.end()
    tokens.append(Token("eof", "", Span(line, pos - line_start + 1)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.n = n

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.span.line, tok.span.column)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text:
            found = "end of input" if tok.kind == "eof" else repr(tok.text)
            self.fail(f"expected {text!r}, found {found}")
        return self.advance()

    def parse(self) -> Node:
        if self.peek().kind == "eof":
            self.fail("empty expression")
        node = self.expr()
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().text in ("+", "-"):
            tok = self.advance()
            node = BinOp(tok.text, node, self.term(), tok.span)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek().text in ("*", "/"):
            tok = self.advance()
            node = BinOp(tok.text, node, self.unary(), tok.span)
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok.text == "-":
            self.advance()
            return Neg(self.unary(), tok.span)
        if tok.text == "+":
            self.advance()
            return self.unary()
        return self.factor()

    def factor(self) -> Node:
        base = self.base()
        tok = self.peek()
        if tok.text == "^":
            self.advance()
            exp = self.peek()
            if exp.kind != "num" or not exp.text.isdigit():
                self.fail("exponent must be a non-negative integer literal")
            self.advance()
            if self.peek().text == "^":
                self.fail("chained powers are ambiguous; use parentheses")
            return Pow(base, int(exp.text), tok.span)
        return base

    def _group(self, open_tok: Token) -> Node:
        close = ")" if open_tok.text == "(" else "}"
        inner = self.expr()
        self.expect(close)
        return inner

    def base(self) -> Node:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(Fraction(tok.text), tok.span)
        if tok.text in ("(", "{"):
            self.advance()
            return self._group(tok)
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name == "i":
                return Imag(tok.span)
            if name in FUNCS:
                open_tok = self.peek()
                if open_tok.text not in ("(", "{"):
                    self.fail(f"expected '(' after {name}")
                self.advance()
                return Func(name, self._group(open_tok), tok.span)
            m = re.fullmatch(r"z([1-9])", name)
            if m:
                k = int(m.group(1))
                if self.n is not None and k > self.n:
                    self.fail(f"variable {name} exceeds declared dimension n={self.n}", tok)
                return Var(k, tok.span)
            self.fail(f"unknown identifier {name!r}", tok)
        if tok.kind == "eof":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {tok.text!r}")


def parse_expression(text: str, n: int | None = None) -> Node:
    """Parse text into an AST; ``n`` bounds the admissible variable indices."""
    return _Parser(text, n).parse()


def max_variable(node: Node) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, (Func, Neg)):
        return max_variable(node.arg)
    if isinstance(node, Pow):
        return max_variable(node.base)
    if isinstance(node, BinOp):
        return max(max_variable(node.left), max_variable(node.right))
    return 0


def lower(node: Node, n: int) -> HermitianPolynomial:
    """Lower an AST to its canonical polynomial in ``n`` variables."""
    H = HermitianPolynomial
    if isinstance(node, Num):
        return H.constant(n, node.value)
    if isinstance(node, Imag):
        return H.constant(n, ExactScalar(0, 1))
    if isinstance(node, Var):
        if node.index > n:
            raise ParseError(f"variable z{node.index} exceeds dimension n={n}", node.span.line, node.span.column)
        return H.z(node.index, n)
    if isinstance(node, Neg):
        return -lower(node.arg, n)
    if isinstance(node, Pow):
        return lower(node.base, n) ** node.exponent
    if isinstance(node, Func):
        e = lower(node.arg, n)
        if node.name == "conj":
            return e.conjugate()
        if node.name == "Re":
            return e.real_part()
        if node.name == "Im":
            return e.imag_part()
        return e * e.conjugate()
    left, right = lower(node.left, n), lower(node.right, n)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if right.degree() > 0:
        raise ParseError("division is only allowed by a constant", node.span.line, node.span.column)
    c = right.constant_term()
    if not c:
        raise ParseError("division by zero", node.span.line, node.span.column)
    return left / c


def parse_polynomial(text: str, n: int | None = None) -> HermitianPolynomial:
    """Parse and lower; without ``n`` the dimension is the largest variable index (at least 1)."""
    node = parse_expression(text, n)
    dim = n if n is not None else max(1, max_variable(node))
    return lower(node, dim)


def _monomial_text(exps: tuple, n: int) -> str:
    parts = []
    for offset, fmt in ((0, "z{}"), (n, "conj(z{})")):
        for j in range(n):
            e = exps[j + offset]
            if e:
                v = fmt.format(j + 1)
                parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def serialize(p: HermitianPolynomial) -> str:
    """Canonical text form; parsing it back yields the same polynomial."""
    if not p.terms:
        return "0"
    out = []
    for exps, c in p.sorted_terms():
        mono = _monomial_text(exps, p.n)
        negative = False
        if c.im == 0:
            negative = c.re < 0
            mag = abs(c.re)
            coeff = "" if mag == 1 and mono else str(mag)
        elif c.re == 0:
            negative = c.im < 0
            mag = abs(c.im)
            coeff = "i" if mag == 1 else f"{mag}*i"
        else:
            sign = "+" if c.im > 0 else "-"
            coeff = f"({c.re} {sign} {abs(c.im)}*i)"
        body = "*".join(x for x in (coeff, mono) if x)
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)
