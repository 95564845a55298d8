"""Symbolic expressions in the surface parameters ``t`` and ``u``.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('-' | '+') unary | power
    power := atom ('^' INT)?
    atom  := NUMBER | 't' | 'u' | FUNC '(' expr ')' | '(' expr ')'

FUNC is one of sin, cos, exp, sqrt. Numbers may carry an exponent suffix.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ParseError

FUNCS = ("sin", "cos", "exp", "sqrt")
VARS = ("t", "u")


class Expr:
    """Base node. Subclasses are frozen dataclasses, hence hashable."""

    def evaluate(self, env):
        """Evaluate with ``env`` mapping variable names to floats, arrays or jets."""
        raise NotImplementedError

    def diff(self, var: str) -> "Expr":
        raise NotImplementedError

    def subs(self, var: str, value: "Expr") -> "Expr":
        raise NotImplementedError

    def free_vars(self) -> frozenset:
        raise NotImplementedError

    def __call__(self, t, u=0.0):
        return self.evaluate({"t": t, "u": u})


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def evaluate(self, env):
        return self.value

    def diff(self, var):
        return ZERO

    def subs(self, var, value):
        return self

    def free_vars(self):
        return frozenset()

    def __str__(self):
        s = repr(float(self.value))
        return f"({s})" if self.value < 0 else s


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def evaluate(self, env):
        return env[self.name]

    def diff(self, var):
        return ONE if var == self.name else ZERO

    def subs(self, var, value):
        return value if var == self.name else self

    def free_vars(self):
        return frozenset([self.name])

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    def evaluate(self, env):
        return -self.arg.evaluate(env)

    def diff(self, var):
        return neg(self.arg.diff(var))

    def subs(self, var, value):
        return neg(self.arg.subs(var, value))

    def free_vars(self):
        return self.arg.free_vars()

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def evaluate(self, env):
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return _divide(a, b)

    def diff(self, var):
        a, b = self.left, self.right
        da, db = a.diff(var), b.diff(var)
        if self.op == "+":
            return add(da, db)
        if self.op == "-":
            return sub(da, db)
        if self.op == "*":
            return add(mul(da, b), mul(a, db))
        # (a/b)' = a'/b - a b'/b^2
        return sub(div(da, b), div(mul(a, db), power(b, 2)))

    def subs(self, var, value):
        return _binop(self.op, self.left.subs(var, value), self.right.subs(var, value))

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def evaluate(self, env):
        return _int_power(self.base.evaluate(env), self.exponent)

    def diff(self, var):
        n = self.exponent
        return mul(mul(Num(float(n)), power(self.base, n - 1)), self.base.diff(var))

    def subs(self, var, value):
        return power(self.base.subs(var, value), self.exponent)

    def free_vars(self):
        return self.base.free_vars()

    def __str__(self):
        return f"({self.base}^{self.exponent})"


@dataclass(frozen=True)
class Func(Expr):
    name: str
    arg: Expr

    def evaluate(self, env):
        return apply_func(self.name, self.arg.evaluate(env))

    def diff(self, var):
        a = self.arg
        da = a.diff(var)
        if self.name == "sin":
            inner = func("cos", a)
        elif self.name == "cos":
            inner = neg(func("sin", a))
        elif self.name == "exp":
            inner = self
        else:
            inner = div(Num(0.5), self)
        return mul(inner, da)

    def subs(self, var, value):
        return func(self.name, self.arg.subs(var, value))

    def free_vars(self):
        return self.arg.free_vars()

    def __str__(self):
        return f"{self.name}({self.arg})"


ZERO = Num(0.0)
ONE = Num(1.0)


# smart constructors doing light constant folding

def _is(e, v):
    return isinstance(e, Num) and e.value == v


def neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a, b):
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def sub(a, b):
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return BinOp("-", a, b)


def mul(a, b):
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def div(a, b):
    if _is(b, 1.0):
        return a
    if _is(a, 0.0) and not _is(b, 0.0):
        return ZERO
    return BinOp("/", a, b)


def power(a, n):
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Num):
        return Num(a.value ** n)
    return Pow(a, n)


def func(name, a):
    return Func(name, a)


def _binop(op, a, b):
    return {"+": add, "-": sub, "*": mul, "/": div}[op](a, b)


# numeric helpers shared by floats, arrays and jets

def _divide(a, b):
    if hasattr(b, "coeffs") or hasattr(a, "coeffs"):
        return a / b
    if np.any(np.asarray(b) == 0.0):
        raise DomainError("division by zero")
    return a / b


def _int_power(x, n):
    if n == 0:
        return x * 0.0 + 1.0
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def apply_func(name, x):
    if hasattr(x, "coeffs"):
        return getattr(x, name)()
    if name == "sqrt":
        if np.any(np.asarray(x) < 0.0):
            raise DomainError("sqrt of a negative value")
        return np.sqrt(x)
    return getattr(np, name)(x)


# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|"
                    r"(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise ParseError(f"expected {value!r}, found {v or 'end of input'!r}", pos)

    def parse(self):
        e = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.unary())
        return e

    def unary(self):
        kind, v, pos = self.peek()
        if kind == "op" and v in ("-", "+"):
            self.take()
            arg = self.unary()
            return neg(arg) if v == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, v, pos = self.take()
            if kind != "num" or not v.isdigit():
                raise ParseError("exponent must be a non-negative integer literal", pos)
            return Pow(base, int(v))
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return Num(float(v))
        if kind == "name":
            if v in VARS:
                return Var(v)
            if v in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Func(v, arg)
            raise ParseError(f"unknown identifier {v!r}", pos)
        if v == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected token {v or 'end of input'!r}", pos)


def parse(text: Union[str, Expr]) -> Expr:
    """Parse an expression string. Expr instances pass through unchanged."""
    if isinstance(text, Expr):
        return text
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text).parse()
