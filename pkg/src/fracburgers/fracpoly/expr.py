"""Expression trees over the canonical variables X and T.

Only local simplification happens at construction time (constant folding,
neutral elements, ``x^1``, ``sinh(a)/cosh(a) -> tanh(a)``). Nothing else is
rewritten, so printed output is predictable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .. import specfun

FUNCTIONS = ("log", "exp", "erf", "cosh", "sinh", "tanh", "sqrt")
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


class Expr:
    __slots__ = ()

    # arithmetic builds simplified trees
    def __add__(self, other):
        return add(self, as_expr(other))

    def __radd__(self, other):
        return add(as_expr(other), self)

    def __sub__(self, other):
        return sub(self, as_expr(other))

    def __rsub__(self, other):
        return sub(as_expr(other), self)

    def __mul__(self, other):
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        return div(self, as_expr(other))

    def __rtruediv__(self, other):
        return div(as_expr(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, exponent):
        return power(self, float(exponent))

    def __str__(self):
        return _fmt(self)[0]

    def variables(self) -> frozenset:
        raise NotImplementedError

    def is_const(self) -> bool:
        return isinstance(self, Const)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float

    def variables(self):
        return frozenset()


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str

    def variables(self):
        return frozenset((self.name,))


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr

    def variables(self):
        return self.arg.variables()


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr

    def variables(self):
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def variables(self):
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def variables(self):
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr

    def variables(self):
        return self.left.variables() | self.right.variables()


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def variables(self):
        return self.base.variables()


@dataclass(frozen=True, slots=True)
class Func(Expr):
    name: str
    arg: Expr

    def variables(self):
        return self.arg.variables()


X = Var("X")
T = Var("T")
ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(float(value))


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


# ------------------------------------------------------------ constructors


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if _is(a, -1.0):
        return neg(b)
    if _is(b, -1.0):
        return neg(a)
    if isinstance(b, Const) and not isinstance(a, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, Mul) and isinstance(b.left, Const):
        return mul(Const(a.value * b.left.value), b.right)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    if (
        isinstance(a, Func)
        and isinstance(b, Func)
        and a.name == "sinh"
        and b.name == "cosh"
        and a.arg == b.arg
    ):
        return Func("tanh", a.arg)
    return Div(a, b)


def power(base: Expr, exponent: float) -> Expr:
    exponent = float(exponent)
    if exponent == 0.0:
        return ONE
    if exponent == 1.0:
        return base
    if isinstance(base, Const):
        return Const(base.value**exponent)
    if isinstance(base, Pow) and float(exponent).is_integer():
        return Pow(base.base, base.exponent * exponent)
    return Pow(base, exponent)


_FOLD = {
    "log": math.log,
    "exp": math.exp,
    "erf": specfun.erf,
    "cosh": math.cosh,
    "sinh": math.sinh,
    "tanh": math.tanh,
    "sqrt": math.sqrt,
}


def func(name: str, arg: Expr) -> Expr:
    if name not in _FOLD:
        raise ValueError(f"unknown function {name!r}")
    if isinstance(arg, Const):
        return Const(float(_FOLD[name](arg.value)))
    return Func(name, arg)


def log(a):
    return func("log", as_expr(a))


def exp(a):
    return func("exp", as_expr(a))


def erf(a):
    return func("erf", as_expr(a))


def cosh(a):
    return func("cosh", as_expr(a))


def sinh(a):
    return func("sinh", as_expr(a))


def tanh(a):
    return func("tanh", as_expr(a))


def sqrt(a):
    return func("sqrt", as_expr(a))


# ---------------------------------------------------------- differentiation


def diff(e: Expr, var: str) -> Expr:
    """Exact derivative of ``e`` with respect to the variable named ``var``."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if var not in e.variables():
        return ZERO
    if isinstance(e, Neg):
        return neg(diff(e.arg, var))
    if isinstance(e, Add):
        return add(diff(e.left, var), diff(e.right, var))
    if isinstance(e, Sub):
        return sub(diff(e.left, var), diff(e.right, var))
    if isinstance(e, Mul):
        return add(mul(diff(e.left, var), e.right), mul(e.left, diff(e.right, var)))
    if isinstance(e, Div):
        da, db = diff(e.left, var), diff(e.right, var)
        if _is(db, 0.0):
            return div(da, e.right)
        return div(sub(mul(da, e.right), mul(e.left, db)), power(e.right, 2.0))
    if isinstance(e, Pow):
        inner = diff(e.base, var)
        return mul(mul(Const(e.exponent), power(e.base, e.exponent - 1.0)), inner)
    if isinstance(e, Func):
        u = e.arg
        du = diff(u, var)
        name = e.name
        if name == "log":
            outer = div(ONE, u)
            return div(du, u) if not _is(du, 1.0) else outer
        if name == "exp":
            outer = e
        elif name == "erf":
            outer = mul(Const(_TWO_OVER_SQRT_PI), func("exp", neg(power(u, 2.0))))
        elif name == "cosh":
            outer = func("sinh", u)
        elif name == "sinh":
            outer = func("cosh", u)
        elif name == "tanh":
            outer = sub(ONE, power(e, 2.0))
        elif name == "sqrt":
            outer = div(Const(0.5), e)
        else:  # pragma: no cover
            raise ValueError(name)
        return mul(outer, du)
    raise TypeError(f"cannot differentiate {type(e).__name__}")


# --------------------------------------------------------------- evaluation

_NP = {
    "log": np.log,
    "exp": np.exp,
    "erf": specfun.erf,
    "cosh": np.cosh,
    "sinh": np.sinh,
    "tanh": np.tanh,
    "sqrt": np.sqrt,
}


def evaluate(e: Expr, env: Mapping[str, object]):
    """Evaluate elementwise; ``env`` maps variable names to scalars or arrays."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise KeyError(f"no value bound for variable {e.name!r}") from None
    if isinstance(e, Neg):
        return -evaluate(e.arg, env)
    if isinstance(e, Add):
        return evaluate(e.left, env) + evaluate(e.right, env)
    if isinstance(e, Sub):
        return evaluate(e.left, env) - evaluate(e.right, env)
    if isinstance(e, Mul):
        return evaluate(e.left, env) * evaluate(e.right, env)
    if isinstance(e, Div):
        return evaluate(e.left, env) / evaluate(e.right, env)
    if isinstance(e, Pow):
        base = evaluate(e.base, env)
        if e.exponent.is_integer():
            return base ** int(e.exponent)
        return np.power(base, e.exponent)
    if isinstance(e, Func):
        arg = evaluate(e.arg, env)
        if e.name == "erf":
            return specfun.erf(arg)
        return _NP[e.name](arg)
    raise TypeError(type(e).__name__)


def subs(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace variables by expressions, re-simplifying on the way up."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return neg(subs(e.arg, mapping))
    if isinstance(e, Add):
        return add(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Sub):
        return sub(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Mul):
        return mul(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Div):
        return div(subs(e.left, mapping), subs(e.right, mapping))
    if isinstance(e, Pow):
        return power(subs(e.base, mapping), e.exponent)
    if isinstance(e, Func):
        return func(e.name, subs(e.arg, mapping))
    raise TypeError(type(e).__name__)


# ----------------------------------------------------------------- printing

_ATOM = 5


def format_number(v: float) -> str:
    v = float(v)
    if math.isfinite(v) and v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def _wrap(e: Expr, need: int) -> str:
    text, prec = _fmt(e)
    return f"({text})" if prec < need else text


def _fmt(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        text = format_number(e.value)
        return (text, 3) if text.startswith("-") else (text, _ATOM)
    if isinstance(e, Var):
        return e.name, _ATOM
    if isinstance(e, Func):
        return f"{e.name}({_fmt(e.arg)[0]})", _ATOM
    if isinstance(e, Pow):
        exp_text = format_number(e.exponent)
        if exp_text.startswith("-"):
            exp_text = f"({exp_text})"
        return f"{_wrap(e.base, _ATOM)}^{exp_text}", 4
    if isinstance(e, Neg):
        return f"-{_wrap(e.arg, 4)}", 3
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        return f"{_wrap(e.left, 2)}{op}{_wrap(e.right, 3)}", 2
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{_wrap(e.left, 1)} {op} {_wrap(e.right, 2)}", 1
    raise TypeError(type(e).__name__)
