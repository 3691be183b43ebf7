"""A small arithmetic grammar for coordinate expressions in scenario files.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := number | name | name '(' expr ')' | '(' expr ')'

Names are coordinates, the constants ``pi`` and ``e``, or user parameters.
Compiled expressions evaluate on floats and on jets alike.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from . import jets
from .errors import ParseError

FUNCTIONS: dict[str, Callable] = {
    "exp": jets.exp,
    "log": jets.log,
    "sqrt": jets.sqrt,
    "sin": jets.sin,
    "cos": jets.cos,
    "sinh": jets.sinh,
    "cosh": jets.cosh,
}
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^(),]))")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out, i = [], 0
    while i < len(src):
        if src[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(src, i)
        if m is None or m.end() == i:
            raise ParseError(f"unexpected character {src[i]!r}", i)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        out.append(Token(kind, m.group(m.lastindex), start))
        i = m.end()
    out.append(Token("end", "", len(src)))
    return out


# expression tree ------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    index: int
    name: str


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


class _Parser:
    def __init__(self, src: str, variables: Sequence[str], params: Mapping[str, float]):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.vars = {v: k for k, v in enumerate(variables)}
        self.params = dict(params)

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str):
        t = self.take()
        if t.text != text:
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {text!r}, found {found}", t.pos)

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            op = self.take().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text in ("+", "-"):
            self.take()
            arg = self.unary()
            return Neg(arg) if t.text == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text in ("^", "**"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return Num(float(t.text))
        if t.kind == "name":
            if self.peek().text == "(":
                if t.text not in FUNCTIONS:
                    raise ParseError(f"unknown function {t.text!r}", t.pos)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text in FUNCTIONS:
                raise ParseError(f"function {t.text!r} needs an argument", t.pos)
            if t.text in self.vars:
                return Var(self.vars[t.text], t.text)
            if t.text in self.params:
                return Num(float(self.params[t.text]))
            if t.text in CONSTANTS:
                return Num(CONSTANTS[t.text])
            raise ParseError(f"unknown name {t.text!r}", t.pos)
        if t.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)


def parse(src: str, variables: Sequence[str], params: Mapping[str, float] | None = None):
    """Parse ``src`` into a tree; raises :class:`ParseError` with a character position."""
    if not isinstance(src, str):
        src = repr(src)
    return _Parser(src, variables, params or {}).parse()


def evaluate(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x[node.index]
    if isinstance(node, Neg):
        return -evaluate(node.arg, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.fn](evaluate(node.arg, x))
    a, b = evaluate(node.left, x), evaluate(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b
    # integer exponents keep negative bases legal
    if isinstance(node.right, Num) and float(node.right.value).is_integer():
        return a ** int(node.right.value)
    return a ** b


@dataclass(frozen=True)
class Expression:
    source: str
    tree: object
    variables: tuple

    def __call__(self, x):
        return evaluate(self.tree, x)


def compile_expr(src, variables: Sequence[str], params: Mapping[str, float] | None = None) -> Expression:
    return Expression(str(src), parse(src, variables, params), tuple(variables))
