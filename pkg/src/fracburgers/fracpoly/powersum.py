"""Generalized power sums and Jumarie's power rule.

A :class:`GenPowerSum` is a finite sum ``sum c_i x**p_i t**q_i``. The
fractional operators below act on it term by term and are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .. import specfun
from ..errors import DomainError, ExponentBelowOrderError
from .family import CoeffFamily, FracOrders

COEFF_TOL = 1e-14
_EXP_MERGE = 1e-12
VARS = ("x", "t")


def _key(e: float) -> float:
    # snap exponents that differ only by rounding noise
    r = round(e)
    if abs(e - r) < _EXP_MERGE:
        return float(r)
    return round(e, 12)


@dataclass(frozen=True)
class GenPowerSum:
    terms: tuple = ()

    def __post_init__(self):
        acc: dict[tuple[float, float], float] = {}
        for c, px, pt in self.terms:
            key = (_key(float(px)), _key(float(pt)))
            acc[key] = acc.get(key, 0.0) + float(c)
        norm = tuple(
            (c, px, pt)
            for (px, pt), c in sorted(acc.items())
            if abs(c) > COEFF_TOL
        )
        object.__setattr__(self, "terms", norm)

    @classmethod
    def const(cls, c: float) -> "GenPowerSum":
        return cls(((c, 0.0, 0.0),))

    @classmethod
    def monomial(cls, c: float = 1.0, px: float = 0.0, pt: float = 0.0) -> "GenPowerSum":
        return cls(((c, px, pt),))

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        return GenPowerSum(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return GenPowerSum(tuple((-c, px, pt) for c, px, pt in self.terms))

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return GenPowerSum(tuple((c * other, px, pt) for c, px, pt in self.terms))
        other = _coerce(other)
        out = []
        for c1, x1, t1 in self.terms:
            for c2, x2, t2 in other.terms:
                out.append((c1 * c2, x1 + x2, t1 + t2))
        return GenPowerSum(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        other = _coerce(other)
        if len(other.terms) != 1:
            raise DomainError("can only divide a power sum by a monomial")
        c, px, pt = other.terms[0]
        return self * GenPowerSum.monomial(1.0 / c, -px, -pt)

    def is_zero(self) -> bool:
        return not self.terms

    def exponents(self, var: str) -> list[float]:
        i = _var_index(var)
        return [term[i] for term in self.terms]

    def evaluate(self, x=1.0, t=1.0):
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        total = np.zeros(np.broadcast(x, t).shape)
        for c, px, pt in self.terms:
            total = total + c * _pow(x, px) * _pow(t, pt)
        return total if total.ndim else float(total)

    def at_zero(self, var: str) -> "GenPowerSum":
        """The part that survives setting ``var`` to zero."""
        i = _var_index(var)
        return GenPowerSum(tuple(term for term in self.terms if term[i] == 0.0))

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c, _, _ in self.terms), default=0.0)

    def __str__(self):
        return format_powersum(self)


def _pow(base, p):
    if p == 0.0:
        return 1.0
    if float(p).is_integer():
        return base ** int(p)
    return np.power(base, p)


def _coerce(v) -> GenPowerSum:
    if isinstance(v, GenPowerSum):
        return v
    return GenPowerSum.const(float(v))


def _var_index(var: str) -> int:
    if var not in VARS:
        raise ValueError(f"variable must be 'x' or 't', got {var!r}")
    return 1 if var == "x" else 2


def _with_exp(term, i, coef, e):
    out = list(term)
    out[0] = coef
    out[i] = e
    return tuple(out)


def _is_integer_order(order: float) -> bool:
    return float(order).is_integer()


def mrl_derivative_power(p: GenPowerSum, order: float, var: str) -> GenPowerSum:
    """Term-wise power rule ``D^a x^e = G(1+e)/G(1+e-a) x^(e-a)``.

    Integer orders are classical derivatives and accept any exponent. For
    fractional orders, constants in ``var`` map to zero and any other exponent
    must be at least ``order``.
    """
    i = _var_index(var)
    order = float(order)
    if not order > 0.0:
        raise DomainError(f"order must be positive, got {order}")
    out = []
    if _is_integer_order(order):
        n = int(order)
        for term in p.terms:
            e = term[i]
            coef = term[0]
            for j in range(n):
                coef *= e - j
            if coef != 0.0:
                out.append(_with_exp(term, i, coef, e - n))
        return GenPowerSum(tuple(out))
    for term in p.terms:
        e = term[i]
        if e == 0.0:
            continue
        if e < order - 1e-12:
            raise ExponentBelowOrderError(
                f"exponent {e:g} in {var} is below the order {order:g}"
            )
        coef = term[0] * specfun.gamma_ratio(1.0 + e, 1.0 + e - order)
        out.append(_with_exp(term, i, coef, e - order))
    return GenPowerSum(tuple(out))


def frac_primitive_power(p: GenPowerSum, order: float, var: str) -> GenPowerSum:
    """Riemann-Liouville integral of a power sum, zero integration constant."""
    i = _var_index(var)
    order = float(order)
    if not order > 0.0:
        raise DomainError(f"order must be positive, got {order}")
    out = []
    for term in p.terms:
        e = term[i]
        if e <= -1.0:
            raise DomainError(f"integral of {var}^{e:g} diverges at 0")
        coef = term[0] * specfun.gamma_ratio(1.0 + e, 1.0 + e + order)
        out.append(_with_exp(term, i, coef, e + order))
    return GenPowerSum(tuple(out))


def format_powersum(p: GenPowerSum) -> str:
    if p.is_zero():
        return "0"
    from .expr import format_number

    pieces = []
    for c, px, pt in p.terms:
        factors = []
        for name, e in (("x", px), ("t", pt)):
            if e == 0.0:
                continue
            if e == 1.0:
                factors.append(name)
            else:
                txt = format_number(e)
                factors.append(f"{name}^({txt})" if txt.startswith("-") else f"{name}^{txt}")
        mag = abs(c)
        if factors and mag == 1.0:
            body = "*".join(factors)
        else:
            body = "*".join([format_number(mag)] + factors)
        pieces.append(("-" if c < 0 else "+", body))
    sign, body = pieces[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


@dataclass(frozen=True)
class PowerPrimitives:
    """Power-rule primitives of a coefficient family, all as sums in ``t``."""

    f: GenPowerSum
    g: GenPowerSum
    F_alpha: GenPowerSum  # D^a F_alpha = f
    F: GenPowerSum  # D^a D^a F = f
    G: GenPowerSum  # D^a G = g
    H: GenPowerSum  # D^a H = f * G


def power_primitives(family: CoeffFamily, orders: FracOrders) -> PowerPrimitives:
    a = orders.alpha
    f = GenPowerSum.monomial(family.cf, 0.0, family.nu)
    g = f * family.k
    F_alpha = frac_primitive_power(f, a, "t")
    F = frac_primitive_power(F_alpha, a, "t")
    G = frac_primitive_power(g, a, "t")
    H = frac_primitive_power(f * G, a, "t")
    return PowerPrimitives(f, g, F_alpha, F, G, H)


def sum_of(items: Iterable[GenPowerSum]) -> GenPowerSum:
    total = GenPowerSum()
    for item in items:
        total = total + item
    return total


def gamma_normalized_power(p: float, var: str = "x") -> GenPowerSum:
    """``var**p / Gamma(1+p)``."""
    c = 1.0 / specfun.gamma_eval(1.0 + p)
    return GenPowerSum.monomial(c, p, 0.0) if var == "x" else GenPowerSum.monomial(c, 0.0, p)


def isclose_sum(a: GenPowerSum, b: GenPowerSum, tol: float = 1e-12) -> bool:
    return (a - b).max_abs_coeff() <= tol * max(1.0, a.max_abs_coeff(), b.max_abs_coeff())


__all__ = [
    "GenPowerSum",
    "PowerPrimitives",
    "frac_primitive_power",
    "format_powersum",
    "gamma_normalized_power",
    "isclose_sum",
    "mrl_derivative_power",
    "power_primitives",
    "sum_of",
]
