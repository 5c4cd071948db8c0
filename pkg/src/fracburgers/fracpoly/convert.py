"""Conversion between raw power sums and canonical (X, T) expressions."""

from __future__ import annotations

from ..errors import NotCommensurateError
from . import expr as E
from .family import FracOrders
from .parser import tree_to_powersum
from .powersum import GenPowerSum

COMMENSURATE_TOL = 1e-10


def _multiple(e: float, unit: float, what: str) -> int:
    m = e / unit
    r = round(m)
    if abs(m - r) > COMMENSURATE_TOL or r < 0:
        raise NotCommensurateError(
            f"{what}-exponent {e:g} is not a nonnegative multiple of {unit:g}"
        )
    return int(r)


def to_canonical(p: GenPowerSum, orders: FracOrders) -> E.Expr:
    """Rewrite ``x^(i*beta) t^(j*alpha)`` as ``G(1+beta)^i G(1+alpha)^j X^i T^j``."""
    gb, ga = orders.gamma_beta, orders.gamma_alpha
    out: E.Expr = E.ZERO
    for c, px, pt in p.terms:
        i = _multiple(px, orders.beta, "x")
        j = _multiple(pt, orders.alpha, "t")
        coef = c * gb**i * ga**j
        term = E.mul(E.power(E.X, i), E.power(E.T, j))
        out = E.add(out, E.mul(E.Const(coef), term))
    return out


def canonical_var_map(orders: FracOrders) -> dict:
    return {
        "X": GenPowerSum.monomial(1.0 / orders.gamma_beta, orders.beta, 0.0),
        "T": GenPowerSum.monomial(1.0 / orders.gamma_alpha, 0.0, orders.alpha),
    }


def from_canonical(e: E.Expr, orders: FracOrders) -> GenPowerSum:
    """Substitute ``X = x^beta/G(1+beta)``, ``T = t^alpha/G(1+alpha)``.

    Raises NotPowerSumError when ``e`` involves transcendental functions or
    division by a sum.
    """
    return tree_to_powersum(e, canonical_var_map(orders))


def expand_in(e: E.Expr, var: str) -> dict[float, E.Expr]:
    """Write ``e`` as ``sum_p c_p * var^p`` with coefficients free of ``var``.

    Raises NotPowerSumError when ``e`` is not of that form (for instance
    ``log(X)`` or ``1/(1 + X)``).
    """
    from ..errors import NotPowerSumError

    if var not in e.variables():
        return {0.0: e}
    if isinstance(e, E.Var):
        return {1.0: E.ONE}
    if isinstance(e, E.Neg):
        return {p: E.neg(c) for p, c in expand_in(e.arg, var).items()}
    if isinstance(e, (E.Add, E.Sub)):
        out = dict(expand_in(e.left, var))
        op = E.add if isinstance(e, E.Add) else E.sub
        for p, c in expand_in(e.right, var).items():
            out[p] = op(out.get(p, E.ZERO), c)
        return out
    if isinstance(e, E.Mul):
        a, b = expand_in(e.left, var), expand_in(e.right, var)
        out: dict[float, E.Expr] = {}
        for p1, c1 in a.items():
            for p2, c2 in b.items():
                out[p1 + p2] = E.add(out.get(p1 + p2, E.ZERO), E.mul(c1, c2))
        return out
    if isinstance(e, E.Div):
        if var in e.right.variables():
            den = expand_in(e.right, var)
            if len(den) != 1:
                raise NotPowerSumError(f"division by a sum in {var}")
            (p2, c2), = den.items()
            return {p - p2: E.div(c, c2) for p, c in expand_in(e.left, var).items()}
        return {p: E.div(c, e.right) for p, c in expand_in(e.left, var).items()}
    if isinstance(e, E.Pow):
        base = expand_in(e.base, var)
        n = e.exponent
        if len(base) == 1:
            (p, c), = base.items()
            return {p * n: E.power(c, n)}
        if n.is_integer() and n >= 0:
            out = {0.0: E.ONE}
            for _ in range(int(n)):
                nxt: dict[float, E.Expr] = {}
                for p1, c1 in out.items():
                    for p2, c2 in base.items():
                        nxt[p1 + p2] = E.add(nxt.get(p1 + p2, E.ZERO), E.mul(c1, c2))
                out = nxt
            return out
    raise NotPowerSumError(f"{e} is not a power sum in {var}")
