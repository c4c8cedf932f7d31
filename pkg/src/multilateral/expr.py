"""A small arithmetic language for payoff formulas.

Grammar (whitespace ignored, binary operators left-associative)::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | atom ("^" INT)?
    atom   := NUMBER | IDENT | FUNC "(" expr ("," expr)* ")" | "(" expr ")"
    FUNC   := "min" | "max" | "abs" | "ite"
    IDENT  := "x" INT | "b" INT

``ite(a CMP b, then, else)`` takes a comparison (``< <= > >= ==``) as its
first argument; comparisons are allowed nowhere else.  ``x1..xN`` are the
players' strategies, ``b1..bM`` family parameters.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import InvalidArgument


class ExprSyntaxError(InvalidArgument):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class ExprEvalError(ValueError):
    pass


@dataclass(frozen=True)
class Num:
    value: float

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value) or value < 0:
            raise InvalidArgument(f"numeric literal must be finite and non-negative, got {self.value!r}")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str  # min, max or abs
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Compare:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Ite:
    cond: Compare
    then: "Expr"
    other: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call, Ite]

FUNCS = ("min", "max", "abs", "ite")
COMPARISONS = ("<=", ">=", "==", "<", ">")

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|==|[-+*/^(),<>])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num, ident, op, end
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        else:
            for offset, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    line_start = pos + offset + 1
        pos = m.end()
    tokens.append(_Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, num_vars: int | None, num_params: int | None):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.num_vars = num_vars
        self.num_params = num_params

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        raise ExprSyntaxError(message, tok.line, tok.column)

    def take(self, text: str) -> _Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            self.fail(f"expected {text!r}, found {found}")
        tok = self.tok
        self.pos += 1
        return tok

    def at(self, *texts: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail(f"unexpected {self.tok.text!r}")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+", "-"):
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("*", "/"):
            op = self.tok.text
            self.pos += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.at("-"):
            self.pos += 1
            return Neg(self.factor())
        node = self.atom()
        if self.at("^"):
            self.pos += 1
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                self.fail("exponent must be a non-negative integer literal")
            self.pos += 1
            node = Pow(node, int(tok.text))
        return node

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.pos += 1
            if tok.text in FUNCS:
                return self.call(tok)
            return self.variable(tok)
        if self.at("("):
            self.pos += 1
            node = self.expr()
            self.take(")")
            return node
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        self.fail(f"expected a number, variable, function or '(', found {found}")

    def variable(self, tok: _Token) -> Var:
        m = re.fullmatch(r"([xb])([0-9]+)", tok.text)
        if m is None:
            self.fail(f"unknown identifier {tok.text!r}", tok)
        index = int(m.group(2))
        limit = self.num_vars if m.group(1) == "x" else self.num_params
        if index < 1 or (limit is not None and index > limit):
            self.fail(f"variable {tok.text} outside the declared range 1..{limit}", tok)
        return Var(tok.text)

    def call(self, name: _Token) -> Expr:
        self.take("(")
        if name.text == "ite":
            cond = self.comparison(name)
            self.take(",")
            then = self.expr()
            self.take(",")
            other = self.expr()
            if self.at(","):
                self.fail("ite takes exactly three arguments")
            self.take(")")
            return Ite(cond, then, other)
        args = [self.expr()]
        while self.at(","):
            self.pos += 1
            args.append(self.expr())
        self.take(")")
        if name.text == "abs" and len(args) != 1:
            self.fail("abs takes exactly one argument", name)
        return Call(name.text, tuple(args))

    def comparison(self, name: _Token) -> Compare:
        left = self.expr()
        if not self.at(*COMPARISONS):
            self.fail("ite needs a comparison (<, <=, >, >=, ==) as its first argument")
        op = self.tok.text
        self.pos += 1
        return Compare(op, left, self.expr())


def parse_expr(text: str, num_vars: int | None = None, num_params: int | None = None) -> Expr:
    """Parse a payoff formula, optionally checking ``x``/``b`` indices against limits."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 1, 1)
    return _Parser(text, num_vars, num_params).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(node: Expr, needed: int) -> str:
    text = to_text(node)
    return f"({text})" if _prec(node) < needed else text


def to_text(node: Expr) -> str:
    """Print with the fewest parentheses that still reparse to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, 3)
    if isinstance(node, Pow):
        return f"{_wrap(node.base, 5)}^{node.exponent}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        return f"{_wrap(node.left, p)} {node.op} {_wrap(node.right, p + 1)}"
    if isinstance(node, Call):
        return f"{node.func}(" + ", ".join(to_text(a) for a in node.args) + ")"
    if isinstance(node, Ite):
        c = node.cond
        return f"ite({to_text(c.left)} {c.op} {to_text(c.right)}, {to_text(node.then)}, {to_text(node.other)})"
    raise TypeError(f"not an expression node: {node!r}")


def variables(node: Expr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return variables(node.operand)
    if isinstance(node, Pow):
        return variables(node.base)
    if isinstance(node, (BinOp, Compare)):
        return variables(node.left) | variables(node.right)
    if isinstance(node, Call):
        return set().union(*(variables(a) for a in node.args))
    if isinstance(node, Ite):
        return variables(node.cond) | variables(node.then) | variables(node.other)
    raise TypeError(f"not an expression node: {node!r}")


_COMPARE = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
}


def eval_expr(node: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate at one point.  Only the selected branch of ``ite`` is evaluated."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return float(bindings[node.name])
        except KeyError:
            raise ExprEvalError(f"variable {node.name} is not bound") from None
    if isinstance(node, Neg):
        return -eval_expr(node.operand, bindings)
    if isinstance(node, Pow):
        return eval_expr(node.base, bindings) ** node.exponent
    if isinstance(node, BinOp):
        a = eval_expr(node.left, bindings)
        b = eval_expr(node.right, bindings)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise ExprEvalError(f"division by zero in {to_text(node)}")
        return a / b
    if isinstance(node, Call):
        values = [eval_expr(a, bindings) for a in node.args]
        if node.func == "abs":
            return abs(values[0])
        return min(values) if node.func == "min" else max(values)
    if isinstance(node, Ite):
        c = node.cond
        hit = _COMPARE[c.op](eval_expr(c.left, bindings), eval_expr(c.right, bindings))
        return eval_expr(node.then if hit else node.other, bindings)
    raise TypeError(f"not an expression node: {node!r}")


def eval_array(node: Expr, bindings: Mapping[str, np.ndarray]) -> np.ndarray:
    """Vectorized evaluation over broadcastable arrays.

    Both ``ite`` branches are computed; a division by zero is an error only if
    it reaches the final result.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = _eval_array(node, bindings)
    out = np.asarray(out, dtype=np.float64)
    if not np.all(np.isfinite(out)):
        raise ExprEvalError("division by zero or overflow while evaluating on a grid")
    return out


def _eval_array(node: Expr, bindings):
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        try:
            return np.asarray(bindings[node.name], dtype=np.float64)
        except KeyError:
            raise ExprEvalError(f"variable {node.name} is not bound") from None
    if isinstance(node, Neg):
        return -_eval_array(node.operand, bindings)
    if isinstance(node, Pow):
        return _eval_array(node.base, bindings) ** node.exponent
    if isinstance(node, BinOp):
        a = _eval_array(node.left, bindings)
        b = _eval_array(node.right, bindings)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return np.where(b == 0, np.nan, a / np.where(b == 0, 1.0, b))
    if isinstance(node, Call):
        values = [_eval_array(a, bindings) for a in node.args]
        if node.func == "abs":
            return np.abs(values[0])
        reduce = np.minimum if node.func == "min" else np.maximum
        out = values[0]
        for v in values[1:]:
            out = reduce(out, v)
        return out
    if isinstance(node, Ite):
        c = node.cond
        hit = _COMPARE[c.op](_eval_array(c.left, bindings), _eval_array(c.right, bindings))
        return np.where(hit, _eval_array(node.then, bindings), _eval_array(node.other, bindings))
    raise TypeError(f"not an expression node: {node!r}")
