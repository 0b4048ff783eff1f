"""Scalar expressions in one variable ``x``.

A small recursive-descent parser over the grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := number | "x" | ident "(" expr ")" | "(" expr ")"

Evaluation works on floats and on numpy arrays alike, so an
:class:`Expression` can be used directly as a vectorised profile function.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Expression",
    "ExpressionError",
    "ParseError",
    "DomainError",
    "parse",
    "evaluate",
    "FUNCTIONS",
]


class ExpressionError(ValueError):
    pass


class ParseError(ExpressionError):
    def __init__(self, message, position, expected=None):
        self.position = position
        self.expected = expected
        text = f"{message} at position {position}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class DomainError(ExpressionError, ArithmeticError):
    def __init__(self, node, detail):
        self.node = node
        super().__init__(f"domain error in '{node}': {detail}")


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float

    def __str__(self):
        return repr(float(self.value))


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Neg:
    arg: object

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def __str__(self):
        return f"({self.left}{self.op}{self.right})"


@dataclass(frozen=True)
class Call:
    name: str
    arg: object

    def __str__(self):
        return f"{self.name}({self.arg})"


def _check(ok, node, detail):
    if not np.all(ok):
        raise DomainError(node, detail)


def _sqrt(v, node):
    _check(v >= 0, node, "square root of a negative number")
    return np.sqrt(v)


def _log(v, node):
    _check(v > 0, node, "logarithm of a non-positive number")
    return np.log(v)


def _asin(v, node):
    _check(np.abs(v) <= 1, node, "argument outside [-1, 1]")
    return np.arcsin(v)


def _acos(v, node):
    _check(np.abs(v) <= 1, node, "argument outside [-1, 1]")
    return np.arccos(v)


FUNCTIONS = {
    "sqrt": _sqrt,
    "sin": lambda v, node: np.sin(v),
    "cos": lambda v, node: np.cos(v),
    "exp": lambda v, node: np.exp(v),
    "log": _log,
    "abs": lambda v, node: np.abs(v),
    "asin": _asin,
    "acos": _acos,
}


def _eval(node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.name](_eval(node.arg, x), node)
    left = _eval(node.left, x)
    right = _eval(node.right, x)
    op = node.op
    if op == "+":
        return left + right
    if op == "-":
        return left - right
    if op == "*":
        return left * right
    if op == "/":
        _check(np.asarray(right) != 0, node, "division by zero")
        return left / right
    # op == "^"
    base = np.asarray(left, dtype=float)
    expo = np.asarray(right, dtype=float)
    _check(~((base == 0) & (expo < 0)), node, "zero raised to a negative power")
    _check(
        (base >= 0) | (expo == np.round(expo)),
        node,
        "negative base with non-integer exponent",
    )
    with np.errstate(over="ignore"):
        out = np.power(base, expo)
    return out if out.ndim else float(out)


# --- Lexer / parser --------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            # skip whitespace to report the offending character itself
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, value, pos = self.tok
        if kind != "op" or value != op:
            raise ParseError(f"unexpected {value or 'end of input'!r}", pos, repr(op))
        self.take()

    def parse(self):
        node = self.expr()
        kind, value, pos = self.tok
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", pos, "operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.take()
            return Neg(self.power())
        return self.power()

    def power(self):
        node = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            node = BinOp("^", node, self.factor())
        return node

    def atom(self):
        kind, value, pos = self.tok
        if kind == "num":
            self.take()
            return Num(float(value))
        if kind == "name":
            self.take()
            if value == "x":
                return Var()
            if value not in FUNCTIONS:
                raise ParseError(f"unknown identifier {value!r}", pos)
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            return Call(value, arg)
        if kind == "op" and value == "(":
            self.take()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(
            f"unexpected {value or 'end of input'!r}", pos, "number, 'x', function or '('"
        )


@dataclass(frozen=True)
class Expression:
    """Parsed expression; callable as ``e(x)``."""

    root: object
    source: str

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return str(self.root)


def parse(text: str) -> Expression:
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    return Expression(_Parser(text).parse(), text)


def evaluate(e: Expression, x):
    """Evaluate ``e`` at a float or array ``x``.

    Raises :class:`DomainError` instead of returning NaN when a
    sub-expression leaves its domain.
    """
    xv = np.asarray(x, dtype=float) if np.ndim(x) else float(x)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = _eval(e.root, xv)
    if np.ndim(x):
        return np.broadcast_to(np.asarray(out, dtype=float), np.shape(x)).copy()
    return float(out)
