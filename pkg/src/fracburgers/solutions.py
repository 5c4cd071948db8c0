"""Catalog of the invariant solutions and their reduced ODEs.

Every closed form is stored in canonical variables. Time primitives here use
the chain-rule reading (``d/dT`` of a primitive gives back the integrand), so
for ``f = cfT T^mu`` the relevant primitives are powers ``T^(mu+1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MissingParameterError
from .fracpoly import expr as E
from .fracpoly.family import CoeffFamily, FracOrders

SOLUTION_IDS = ("thm41", "thm42", "thm43", "thm44", "thm45", "subspace", "constant")
ODE_VAR = "s"


@dataclass(frozen=True)
class ChainCoeffs:
    """``f = cfT T^mu``, ``g = k f``, ``F_alpha = cfT T^q / q``, ``G = k F_alpha``."""

    cfT: float
    mu: float
    k: float

    @property
    def q(self) -> float:
        return self.mu + 1.0

    def f(self) -> E.Expr:
        return E.mul(E.Const(self.cfT), E.power(E.T, self.mu))

    def g(self) -> E.Expr:
        return E.mul(E.Const(self.k * self.cfT), E.power(E.T, self.mu))

    def F_alpha(self) -> E.Expr:
        return E.mul(E.Const(self.cfT / self.q), E.power(E.T, self.q))

    def G(self) -> E.Expr:
        return E.mul(E.Const(self.k * self.cfT / self.q), E.power(E.T, self.q))


def chain_coeffs(family: CoeffFamily, orders: FracOrders) -> ChainCoeffs:
    return ChainCoeffs(family.cf_T(orders), family.mu(orders), family.k)


@dataclass(frozen=True)
class ReducedOde:
    """A scalar ODE with a closed-form profile, both in the variable ``s``."""

    ode_id: str
    description: str
    residual: E.Expr  # ODE left-hand side with the profile substituted
    domain: tuple  # default sample interval for s


@dataclass(frozen=True)
class SolutionFamily:
    id: str
    params: dict
    family: CoeffFamily
    orders: FracOrders
    expr: E.Expr
    reduced_ode: ReducedOde | None = None
    notes: tuple = field(default_factory=tuple)

    def evaluate(self, X, T):
        shape = np.broadcast(np.asarray(X), np.asarray(T)).shape
        return np.broadcast_to(E.evaluate(self.expr, {"X": X, "T": T}), shape)


@dataclass(frozen=True)
class ReducedOdeResidual:
    ode_id: str
    sample_points: tuple
    max_abs: float


@dataclass(frozen=True)
class Invariants:
    variable: E.Expr  # similarity variable in (X, T)
    invariant: E.Expr  # second invariant in (X, T, u)
    description: str


# ---------------------------------------------------------------- invariants


def invariants_for_generator(i: int, family: CoeffFamily, orders: FracOrders, **params) -> Invariants:
    """Similarity variable and solution form for the five reductions.

    Cases: 1 -> V1, 2 -> V4, 3 -> n V5 + m V3, 4 -> r V5 + V6, 5 -> s V3 + V6.
    """
    cc = chain_coeffs(family, orders)
    X, T, u = E.X, E.T, E.Var("u")
    C = E.Const
    db = orders.d_beta
    ga = orders.gamma_alpha
    if i == 1:
        nu = E.add(E.mul(C(db), E.power(X, 2.0)), E.mul(E.mul(C(2.0), cc.G()), u))
        return Invariants(T, nu, "T = t^a/G(1+a), nu = x^(2b)/G(1+2b) + 2 G(t) u, nu = phi(T)")
    if i == 2:
        var = E.div(E.power(X, 2.0), cc.F_alpha())
        return Invariants(var, u, "X' = x^(2b)/(G(1+b)^2 F_alpha(t)), u = psi(X')")
    if i == 3:
        m, n = params.get("m", 1.0), params.get("n", 1.0)
        return Invariants(T, E.sub(X, E.mul(C(n / m), u)), "zeta = T, phi(zeta) = X - (n/m) u")
    if i == 4:
        r = params.get("r", 1.0)
        var = E.sub(E.div(X, C(r)), E.div(cc.F_alpha(), C(ga)))
        return Invariants(var, u, "zeta = X/r - F_alpha/G(1+a), omega(zeta) = u")
    if i == 5:
        s = params.get("s", ga)
        rho = E.add(E.mul(C(-ga / s), u), cc.F_alpha())
        return Invariants(X, rho, "gamma = X, rho(gamma) = -(G(1+a)/s) u + F_alpha")
    raise ValueError(f"case index must be 1..5, got {i}")


# ------------------------------------------------------------------ catalog

DEFAULT_PARAMS = {
    "thm41": {"k1": 0.0},
    "thm42": {"k2": 1.0, "C": 1.0, "k3": 0.0},
    "thm43": {"m": 1.0, "n": 1.0, "k4": 0.0},
    "thm44": {"r": 1.0, "c1": -3.0, "c2": 0.0},
    "thm45": {"c3": 0.0, "c4": 0.0},
    "constant": {"c": 0.0},
}


def _params(sid: str, params: dict | None, orders: FracOrders, fill_defaults: bool) -> dict:
    given = dict(params or {})
    if sid == "thm42" and "K" in given:
        # the printed constant 2*pi*K is one free constant
        if "C" in given:
            raise DomainError("give either C or K for thm42, not both")
        given["C"] = 2.0 * math.pi * given.pop("K")
    defaults = dict(DEFAULT_PARAMS.get(sid, {}))
    if sid == "thm45":
        defaults["s"] = orders.gamma_alpha
    unknown = set(given) - set(defaults)
    if unknown:
        raise MissingParameterError(f"unknown parameters for {sid}: {sorted(unknown)}")
    if not fill_defaults:
        missing = set(defaults) - set(given)
        if missing:
            raise MissingParameterError(f"missing parameters for {sid}: {sorted(missing)}")
    out = {**defaults, **given}
    return {k: float(v) for k, v in out.items()}


def make_solution(
    sid: str,
    params: dict | None = None,
    family: CoeffFamily | None = None,
    orders: FracOrders | None = None,
    fill_defaults: bool = True,
) -> SolutionFamily:
    """Build a catalog solution in canonical variables."""
    family = family or CoeffFamily()
    orders = orders or FracOrders()
    if sid not in SOLUTION_IDS or sid == "subspace":
        if sid == "subspace":
            raise ValueError("subspace solutions are built by subspace.assemble_subspace_solution")
        raise ValueError(f"unknown solution id {sid!r}; expected one of {SOLUTION_IDS}")
    p = _params(sid, params, orders, fill_defaults)
    build = _BUILDERS[sid]
    return build(p, family, orders)


def _thm41(p, family, orders):
    cc = chain_coeffs(family, orders)
    C = E.Const
    X, T = E.X, E.T
    s = E.Var(ODE_VAR)
    q, cfT = cc.q, cc.cfT
    db = orders.d_beta
    # H1 = G'/G = q/T, H2 = f; integrating factor T^q
    phi_of = lambda v: E.mul(E.power(v, q), E.sub(C(p["k1"]), E.mul(C(cfT), E.log(v))))  # noqa: E731
    expr = E.div(E.sub(phi_of(T), E.mul(C(db), E.power(X, 2.0))), E.mul(C(2.0), cc.G()))
    phi = phi_of(s)
    H1 = E.div(C(q), s)
    H2 = E.mul(C(cfT), E.power(s, cc.mu))
    resid = E.add(E.sub(E.diff(phi, ODE_VAR), E.mul(H1, phi)), H2)
    ode = ReducedOde("thm41-phi", "phi'(T) - H1(T) phi = -H2(T)", resid, (0.5, 2.0))
    return SolutionFamily("thm41", p, family, orders, expr, ode)


def _erf_profile(p, v):
    # argument erf(sqrt(v)/2)
    return E.add(E.Const(p["k2"]), E.mul(E.Const(p["C"]), E.erf(E.div(E.sqrt(v), E.Const(2.0)))))


def _thm42(p, family, orders):
    cc = chain_coeffs(family, orders)
    k = family.k
    if not (p["k2"] > 0.0 and p["k2"] + p["C"] > 0.0):
        raise DomainError("thm42 needs k2 > 0 and k2 + C > 0 so the log argument stays positive")
    X = E.X
    w = E.add(
        E.Const(p["k2"]),
        E.mul(E.Const(p["C"]), E.erf(E.div(X, E.mul(E.Const(2.0), E.sqrt(cc.F_alpha()))))),
    )
    expr = E.add(E.mul(E.Const(1.0 / k), E.log(w)), E.Const(p["k3"]))
    s = E.Var(ODE_VAR)
    psi = E.mul(E.Const(1.0 / k), E.log(_erf_profile(p, s)))
    d1 = E.diff(psi, ODE_VAR)
    d2 = E.diff(d1, ODE_VAR)
    resid = E.add(
        E.add(d2, E.mul(E.Const(k), E.power(d1, 2.0))),
        E.mul(E.add(E.Const(0.25), E.div(E.Const(0.5), s)), d1),
    )
    ode = ReducedOde("thm42-psi", "psi'' + k psi'^2 + psi'/4 + psi'/(2X') = 0", resid, (0.5, 8.0))
    return SolutionFamily("thm42", p, family, orders, expr, ode)


def _thm43(p, family, orders):
    cc = chain_coeffs(family, orders)
    m, n = p["m"], p["n"]
    if m == 0.0 or n == 0.0:
        raise DomainError("thm43 needs nonzero m and n")
    mn = m / n
    inner = E.sub(E.add(E.X, E.mul(E.Const(mn), cc.G())), E.Const(p["k4"]))
    expr = E.mul(E.Const(mn), inner)
    s = E.Var(ODE_VAR)
    # phi(zeta) = X - (n/m) u = -(m/n) G + k4
    G_s = E.mul(E.Const(cc.k * cc.cfT / cc.q), E.power(s, cc.q))
    g_s = E.mul(E.Const(cc.k * cc.cfT), E.power(s, cc.mu))
    phi = E.add(E.mul(E.Const(-mn), G_s), E.Const(p["k4"]))
    resid = E.add(E.diff(phi, ODE_VAR), E.mul(E.Const(mn), g_s))
    ode = ReducedOde("thm43-phi", "phi'(zeta) + (m/n) g = 0", resid, (0.5, 2.0))
    return SolutionFamily("thm43", p, family, orders, expr, ode)


def thm44_profile(p, k, lam, v, printed: bool = False) -> E.Expr:
    """Closed-form omega(zeta); ``printed=True`` gives the printed variant."""
    C = E.Const
    arg = E.sub(E.exp(E.mul(C(lam), v)), C(k * math.exp(lam * p["c1"])))
    lin = E.mul(C(lam if printed else lam / k), v)
    return E.add(E.sub(E.mul(C(1.0 / k), E.log(arg)), lin), C(p["c2"]))


def thm44_ode(k: float, lam: float, w: E.Expr) -> E.Expr:
    d1 = E.diff(w, ODE_VAR)
    return E.add(
        E.add(E.diff(d1, ODE_VAR), E.mul(E.Const(k), E.power(d1, 2.0))), E.mul(E.Const(lam), d1)
    )


def _thm44(p, family, orders):
    cc = chain_coeffs(family, orders)
    k = family.k
    r = p["r"]
    if r == 0.0:
        raise DomainError("thm44 needs r != 0")
    ga = orders.gamma_alpha
    lam = r * r / ga
    zeta = E.sub(E.div(E.X, E.Const(r)), E.div(cc.F_alpha(), E.Const(ga)))
    expr = E.subs(thm44_profile(p, k, lam, E.Var(ODE_VAR)), {ODE_VAR: zeta})
    s = E.Var(ODE_VAR)
    resid = thm44_ode(k, lam, thm44_profile(p, k, lam, s))
    # the log argument is positive for lam*zeta > lam*c1 + log(k) when k > 0
    lo = p["c1"] + (math.log(k) / lam if k > 0 else 0.0) + 0.5
    ode = ReducedOde("thm44-omega", "omega'' + k omega'^2 + (r^2/G(1+a)) omega' = 0", resid, (lo, lo + 4.0))
    return SolutionFamily("thm44", p, family, orders, expr, ode)


def thm44_printed_residual(sol: SolutionFamily, points) -> float:
    """Residual of the printed closed form in the theorem's ODE."""
    k = sol.family.k
    lam = sol.params["r"] ** 2 / sol.orders.gamma_alpha
    w = thm44_profile(sol.params, k, lam, E.Var(ODE_VAR), printed=True)
    vals = E.evaluate(thm44_ode(k, lam, w), {ODE_VAR: np.asarray(points, dtype=float)})
    return float(np.max(np.abs(np.broadcast_to(vals, np.shape(points)))))


def _thm45(p, family, orders):
    cc = chain_coeffs(family, orders)
    k = family.k
    if k <= 0.0:
        raise DomainError("thm45 needs k = g/f > 0")
    ga = orders.gamma_alpha
    s_par = p["s"]
    sigma = k * s_par / ga
    if sigma <= 0.0:
        raise DomainError("thm45 needs k*s > 0")
    C = E.Const
    lc = lambda v: E.log(E.cosh(E.mul(C(math.sqrt(sigma)), E.add(C(p["c3"]), v))))  # noqa: E731
    expr = E.sub(E.add(E.mul(C(s_par / ga), cc.F_alpha()), E.mul(C(1.0 / k), lc(E.X))), C(p["c4"]))
    s = E.Var(ODE_VAR)
    rho = E.add(E.mul(C(-1.0 / sigma), lc(s)), C(ga / s_par * p["c4"]))
    d1 = E.diff(rho, ODE_VAR)
    resid = E.add(E.sub(E.diff(d1, ODE_VAR), E.mul(C(sigma), E.power(d1, 2.0))), E.ONE)
    ode = ReducedOde("thm45-rho", "rho'' - (ks/G(1+a)) rho'^2 + 1 = 0", resid, (-2.0, 2.0))
    return SolutionFamily("thm45", p, family, orders, expr, ode)


def _constant(p, family, orders):
    return SolutionFamily("constant", p, family, orders, E.Const(p["c"]), None)


_BUILDERS = {
    "thm41": _thm41,
    "thm42": _thm42,
    "thm43": _thm43,
    "thm44": _thm44,
    "thm45": _thm45,
    "constant": _constant,
}


def default_ode_points(sol: SolutionFamily, n: int = 50) -> np.ndarray:
    lo, hi = sol.reduced_ode.domain
    return np.linspace(lo, hi, n)


def reduced_ode_residual(sol: SolutionFamily, points=None) -> ReducedOdeResidual:
    """Substitute the closed-form profile into its reduced ODE."""
    if sol.reduced_ode is None:
        raise DomainError(f"{sol.id} has no reduced ODE")
    pts = default_ode_points(sol) if points is None else np.asarray(points, dtype=float)
    if sol.reduced_ode.ode_id == "thm42-psi" and np.any(pts == 0.0):
        raise DomainError("X' = 0 is a singular point of the reduced ODE")
    vals = E.evaluate(sol.reduced_ode.residual, {ODE_VAR: pts})
    vals = np.broadcast_to(np.asarray(vals, dtype=float), pts.shape)
    if not np.all(np.isfinite(vals)):
        raise DomainError("sample points leave the domain of the reduced profile")
    return ReducedOdeResidual(sol.reduced_ode.ode_id, tuple(pts.tolist()), float(np.max(np.abs(vals))))
