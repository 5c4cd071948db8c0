"""Invariant subspace W3 = span{1, x^b/G(1+b), x^(2b)/G(1+2b)}.

For u = a + b x^b/G(1+b) + c x^(2b)/G(1+2b) the operator
F[u] = f u_x^(2b) + g (u_x^(b))^2 stays in W3 under the power rule, but the
x^(2b) term arrives as c^2 x^(2b)/G(1+b)^2, not as c^2 times the third basis
function. Two coefficient systems are offered:

``printed``     the identification c' = g c^2, b' = 2 g b c, a' = f c + g b^2
``consistent``  the exact one, c' = g c^2/d, b' = 2 g b c, a' = f c + g b^2,
                with d = G(1+b)^2/G(1+2b)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numfrac
from .errors import DomainError
from .fracpoly import expr as E
from .fracpoly.family import CoeffFamily, FracOrders
from .fracpoly.powersum import GenPowerSum, mrl_derivative_power
from .solutions import SolutionFamily, chain_coeffs

SYSTEMS = ("printed", "consistent")


@dataclass(frozen=True)
class SpanWitness:
    """Decomposition of F[u] in the basis {1, x^b/G(1+b), x^(2b)/G(1+2b)}.

    ``components`` is exact. ``printed_components`` uses g c^2 for the third
    slot, and ``offBasisRemainder`` is what that identification leaves over.
    """

    components: tuple  # three GenPowerSum in t
    printed_components: tuple
    offBasisRemainder: GenPowerSum
    F: GenPowerSum

    def remainder_coefficient(self, t: float = 1.0) -> float:
        """Coefficient of x^(2b) in the remainder at time ``t``."""
        return float(sum(c * t**pt for c, _, pt in self.offBasisRemainder.terms))


def _fg(family: CoeffFamily):
    return (
        GenPowerSum.monomial(family.cf, 0.0, family.nu),
        GenPowerSum.monomial(family.k * family.cf, 0.0, family.nu),
    )


def _slice(p: GenPowerSum, px: float) -> GenPowerSum:
    """Terms with x-exponent ``px``, returned as a sum in t alone."""
    return GenPowerSum(tuple((c, 0.0, pt) for c, x, pt in p.terms if abs(x - px) < 1e-12))


def check_w3_invariance(a: float, b: float, c: float, family: CoeffFamily,
                        orders: FracOrders) -> SpanWitness:
    beta = orders.beta
    g1 = math.gamma(1 + beta)
    g2 = math.gamma(1 + 2 * beta)
    u = GenPowerSum((
        (float(a), 0.0, 0.0),
        (b / g1, beta, 0.0),
        (c / g2, 2 * beta, 0.0),
    ))
    f, g = _fg(family)
    d1 = mrl_derivative_power(u, beta, "x")
    d2 = mrl_derivative_power(d1, beta, "x")
    F = f * d2 + g * d1 * d1
    comps = (
        _slice(F, 0.0),
        _slice(F, beta) * g1,
        _slice(F, 2 * beta) * g2,
    )
    printed = (comps[0], comps[1], g * (c * c))
    rebuilt = (
        printed[0]
        + printed[1] * GenPowerSum.monomial(1.0 / g1, beta, 0.0)
        + printed[2] * GenPowerSum.monomial(1.0 / g2, 2 * beta, 0.0)
    )
    return SpanWitness(comps, printed, F - rebuilt, F)


@dataclass(frozen=True)
class SubspaceSolution:
    s1: float
    B0: float
    s3: float
    family: CoeffFamily
    orders: FracOrders
    a: E.Expr  # functions of T
    b: E.Expr
    c: E.Expr
    system: str = "printed"

    def coefficients(self, t):
        T = np.asarray(t, dtype=float) ** self.orders.alpha / self.orders.gamma_alpha
        ev = lambda e: np.asarray(E.evaluate(e, {"T": T}), dtype=float) * np.ones_like(T)  # noqa: E731
        return ev(self.a), ev(self.b), ev(self.c)


def solve_coefficient_system(
    family: CoeffFamily,
    orders: FracOrders,
    s1: float = 1.0,
    B0: float = 0.0,
    s3: float = 0.0,
    system: str = "printed",
    t_max: float = 2.0,
) -> SubspaceSolution:
    """Closed forms for a, b, c with G(t) + s1 kept away from zero on [0, t_max]."""
    if system not in SYSTEMS:
        raise ValueError(f"system must be one of {SYSTEMS}")
    cc = chain_coeffs(family, orders)
    k = family.k
    G = cc.G()
    g_end = float(E.evaluate(G, {"T": t_max**orders.alpha / orders.gamma_alpha}))
    if s1 == 0.0 or (s1 > 0) != (g_end + s1 > 0):
        raise DomainError(f"G(t) + s1 vanishes on [0, {t_max:g}] (s1 = {s1:g})")
    s1, B0, s3 = float(s1), float(B0), float(s3)
    C = E.Const
    w = E.add(G, C(s1))
    if system == "printed":
        c = E.div(C(-1.0), w)
        b = E.div(C(B0), E.power(w, 2.0))
        a = E.add(
            E.sub(E.mul(C(-1.0 / k), E.log(w if s1 > 0 else E.neg(w))),
                  E.div(C(B0 * B0 / 3.0), E.power(w, 3.0))),
            C(s3),
        )
    else:
        if s1 < 0:
            raise DomainError("the consistent system needs G(t) + s1 > 0")
        d = orders.d_beta
        c = E.div(C(-d), w)
        b = E.div(C(B0), E.power(w, 2 * d))
        e = 1.0 - 4.0 * d
        a = E.add(
            E.add(E.mul(C(-d / k), E.log(w)), E.mul(C(B0 * B0 / e), E.power(w, e))),
            C(s3),
        )
    return SubspaceSolution(s1, B0, s3, family, orders, a, b, c, system)


def ode_right_hand_sides(s: SubspaceSolution):
    """(a', b', c') as expressions in T for the chosen system."""
    cc = chain_coeffs(s.family, s.orders)
    f, g = cc.f(), cc.g()
    cfac = 1.0 if s.system == "printed" else 1.0 / s.orders.d_beta
    ra = E.add(E.mul(f, s.c), E.mul(g, E.power(s.b, 2.0)))
    rb = E.mul(E.mul(E.Const(2.0), g), E.mul(s.b, s.c))
    rc = E.mul(E.Const(cfac), E.mul(g, E.power(s.c, 2.0)))
    return ra, rb, rc


def coefficient_ode_residuals(s: SubspaceSolution, times=None, semantics: str = "chain") -> dict:
    """Max residual of each coefficient ODE at sample times.

    ``chain`` differentiates in T exactly (D_t^a h(G) = h'(G) g); ``numeric``
    applies the quadrature MRL derivative in raw t.
    """
    ts = np.linspace(0.5, 2.0, 50) if times is None else np.asarray(times, dtype=float)
    o = s.orders
    T = ts**o.alpha / o.gamma_alpha
    rhs = ode_right_hand_sides(s)
    out = {}
    for name, coef, r in zip("abc", (s.a, s.b, s.c), rhs):
        want = np.asarray(E.evaluate(r, {"T": T}), dtype=float) * np.ones_like(T)
        if semantics == "chain":
            got = np.asarray(E.evaluate(E.diff(coef, "T"), {"T": T}), dtype=float) * np.ones_like(T)
        elif semantics == "numeric":
            fn = lambda tt, e=coef: E.evaluate(e, {"T": np.asarray(tt) ** o.alpha / o.gamma_alpha})  # noqa: E731
            got = np.asarray(numfrac.mrl_derivative_any(fn, o.alpha, ts), dtype=float)
        else:
            raise ValueError("semantics must be 'chain' or 'numeric'")
        out[name] = float(np.max(np.abs(got - want)))
    return out


def assemble_subspace_solution(s: SubspaceSolution) -> SolutionFamily:
    """u = a(T) + b(T) X + c(T) d X^2, with X^2 d = x^(2b)/G(1+2b)."""
    d = s.orders.d_beta
    X = E.X
    expr = E.add(E.add(s.a, E.mul(s.b, X)), E.mul(E.mul(E.Const(d), s.c), E.power(X, 2.0)))
    params = {"s1": s.s1, "B0": s.B0, "s3": s.s3}
    notes = (f"coefficient system: {s.system}",)
    return SolutionFamily("subspace", params, s.family, s.orders, expr, None, notes)
