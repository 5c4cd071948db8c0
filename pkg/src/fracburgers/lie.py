"""Symmetry layer: generators, brackets, determining equations and flows.

Vector fields live in canonical variables ``X = x^b/G(1+b)``,
``T = t^a/G(1+a)`` and the dependent variable ``u``. In these variables the
fractional operators of the generators act as ordinary partial derivatives,
so brackets and flows are classical computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import specfun
from .errors import DecompositionError, DomainError
from .fracpoly import expr as E
from .fracpoly.family import CoeffFamily, FracOrders
from .fracpoly.powersum import (
    GenPowerSum,
    PowerPrimitives,
    frac_primitive_power,
    mrl_derivative_power,
    power_primitives,
)

U = E.Var("u")
NAMES = ("V1", "V2", "V3", "V4", "V5", "V6")
FIT_TOL = 1e-9
SNAP_TOL = 1e-9


@dataclass(frozen=True)
class VectorField:
    """``xi d/dX + tau d/dT + eta d/du``."""

    xi: E.Expr
    tau: E.Expr
    eta: E.Expr
    name: str = ""

    def apply(self, h: E.Expr) -> E.Expr:
        out = E.mul(self.xi, E.diff(h, "X"))
        out = E.add(out, E.mul(self.tau, E.diff(h, "T")))
        return E.add(out, E.mul(self.eta, E.diff(h, "u")))

    def components(self):
        return (self.xi, self.tau, self.eta)

    def evaluate(self, X, T, u) -> np.ndarray:
        env = {"X": X, "T": T, "u": u}
        shape = np.broadcast(np.asarray(X), np.asarray(T), np.asarray(u)).shape
        return np.stack([np.broadcast_to(E.evaluate(c, env), shape) for c in self.components()])

    def scaled(self, c: float) -> "VectorField":
        k = E.Const(float(c))
        return VectorField(E.mul(k, self.xi), E.mul(k, self.tau), E.mul(k, self.eta))

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            E.add(self.xi, other.xi), E.add(self.tau, other.tau), E.add(self.eta, other.eta)
        )

    def __str__(self):
        return f"({self.xi}, {self.tau}, {self.eta})"


def lie_bracket(A: VectorField, B: VectorField) -> VectorField:
    """Componentwise ``[A, B]^i = A(B^i) - B(A^i)``."""
    comps = [E.sub(A.apply(b), B.apply(a)) for a, b in zip(A.components(), B.components())]
    return VectorField(*comps)


# ----------------------------------------------------------------- family data


def t_sum_to_T(p: GenPowerSum, orders: FracOrders) -> E.Expr:
    """Rewrite a power sum in ``t`` as an expression in ``T``."""
    ga = orders.gamma_alpha
    out: E.Expr = E.ZERO
    for c, px, pt in p.terms:
        if px != 0.0:
            raise DomainError("expected a power sum in t only")
        m = pt / orders.alpha
        out = E.add(out, E.mul(E.Const(c * ga**m), E.power(E.T, m)))
    return out


def _single(p: GenPowerSum, orders: FracOrders) -> tuple[float, float]:
    """(coefficient, T-exponent) of a one-term power sum in t."""
    (c, _, pt), = p.terms
    m = pt / orders.alpha
    return c * orders.gamma_alpha**m, m


@dataclass(frozen=True)
class CanonicalCoeffs:
    """Canonical form of the power-rule primitives.

    ``f = cfT T^mu``, ``F_alpha = phi T^q``, ``G = k phi T^q``,
    ``H / f = h T^(mu+2)`` with ``q = mu + 1``.
    """

    cfT: float
    mu: float
    phi: float
    k: float
    h: float

    @property
    def q(self) -> float:
        return self.mu + 1.0


def canonical_coeffs(family: CoeffFamily, orders: FracOrders) -> CanonicalCoeffs:
    prim = power_primitives(family, orders)
    cfT, mu = _single(prim.f, orders)
    phi, _ = _single(prim.F_alpha, orders)
    hH, _ = _single(prim.H, orders)
    return CanonicalCoeffs(cfT=cfT, mu=mu, phi=phi, k=family.k, h=hH / cfT)


def standard_generators(family: CoeffFamily, orders: FracOrders) -> list[VectorField]:
    """The six generators with power-rule primitives G, F_alpha, H."""
    cc = canonical_coeffs(family, orders)
    db = orders.d_beta
    Tq = E.power(E.T, cc.q)
    G = E.mul(E.Const(cc.k * cc.phi), Tq)
    Fa = E.mul(E.Const(cc.phi), Tq)
    H_over_f = E.mul(E.Const(cc.h), E.power(E.T, cc.mu + 2.0))
    inv_f = E.mul(E.Const(1.0 / cc.cfT), E.power(E.T, -cc.mu))
    Fa_over_f = E.mul(E.Const(cc.phi / cc.cfT), E.T)
    X, zero, one = E.X, E.ZERO, E.ONE
    two = E.Const(2.0)
    gens = [
        VectorField(E.mul(E.Const(-2.0), G), zero, X, "V1"),
        VectorField(
            E.mul(E.Const(-2.0), E.mul(G, X)),
            E.mul(E.Const(-4.0), H_over_f),
            E.add(Fa, E.mul(E.Const(db), E.power(X, 2.0))),
            "V2",
        ),
        VectorField(zero, zero, one, "V3"),
        VectorField(X, E.mul(two, Fa_over_f), zero, "V4"),
        VectorField(one, zero, zero, "V5"),
        VectorField(zero, inv_f, zero, "V6"),
    ]
    return gens


# ------------------------------------------------------------- bracket table

# The commutator table exactly as printed; entry [i][j] is [Vi, Vj] as a
# coefficient vector over (V1..V6), alongside the printed text.
_P = {
    "0": (0, 0, 0, 0, 0, 0),
    "V1": (1, 0, 0, 0, 0, 0),
    "-V1": (-1, 0, 0, 0, 0, 0),
    "2V1": (2, 0, 0, 0, 0, 0),
    "-2V1": (-2, 0, 0, 0, 0, 0),
    "2V2": (0, 2, 0, 0, 0, 0),
    "-2V2": (0, -2, 0, 0, 0, 0),
    "V3": (0, 0, 1, 0, 0, 0),
    "-V3": (0, 0, -1, 0, 0, 0),
    "2V5": (0, 0, 0, 0, 2, 0),
    "-2V5": (0, 0, 0, 0, -2, 0),
    "-V5": (0, 0, 0, 0, -1, 0),
    "2V6": (0, 0, 0, 0, 0, 2),
    "-2V6": (0, 0, 0, 0, 0, -2),
    "4V4 - 2V3": (0, 0, -2, 4, 0, 0),
    "2V3 - 4V4": (0, 0, 2, -4, 0, 0),
}
PRINTED_TABLE = (
    ("0", "0", "0", "V1", "-V3", "2V5"),
    ("0", "0", "0", "2V2", "2V1", "4V4 - 2V3"),
    ("0", "0", "0", "0", "0", "0"),
    ("-V1", "-2V2", "0", "0", "V1", "2V6"),
    ("V3", "-2V1", "0", "-V5", "0", "0"),
    ("-2V5", "2V3 - 4V4", "0", "-2V6", "0", "0"),
)


def printed_vector(i: int, j: int) -> np.ndarray:
    return np.array(_P[PRINTED_TABLE[i][j]], dtype=float)


def format_combination(vec) -> str:
    parts = []
    for idx, c in enumerate(vec):
        if c == 0:
            continue
        mag = abs(c)
        coef = "" if mag == 1 else E.format_number(float(mag))
        parts.append(("-" if c < 0 else "+", f"{coef}{NAMES[idx]}"))
    if not parts:
        return "0"
    sign, body = parts[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def sample_points(n: int, seed: int = 2024):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.5, 2.0, n)
    T = rng.uniform(0.5, 2.0, n)
    u = rng.uniform(-1.0, 1.0, n)
    return X, T, u


def decompose(field_: VectorField, gens, n_points: int = 12, seed: int = 7):
    """Least-squares coordinates of ``field_`` in span(gens); returns (coeffs, residual)."""
    X, T, u = sample_points(n_points, seed)
    A = np.stack([g.evaluate(X, T, u).ravel() for g in gens], axis=1)
    b = field_.evaluate(X, T, u).ravel()
    coeffs, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = float(np.max(np.abs(A @ coeffs - b))) if b.size else 0.0
    snapped = np.where(np.abs(coeffs - np.round(coeffs)) <= SNAP_TOL, np.round(coeffs), coeffs)
    snapped = snapped + 0.0  # normalize -0.0
    return snapped, resid


@dataclass
class BracketAudit:
    computed: list  # 6x6 coefficient vectors
    fit_residual: np.ndarray
    brackets: list  # 6x6 VectorField
    mismatches: list = field(default_factory=list)

    def rows(self):
        for i in range(6):
            for j in range(6):
                vec = self.computed[i][j]
                if vec is None:
                    comp, match = "not in span", False
                else:
                    comp = format_combination(vec)
                    match = bool(np.array_equal(vec, printed_vector(i, j)))
                yield {
                    "i": NAMES[i],
                    "j": NAMES[j],
                    "computed": comp,
                    "printed": PRINTED_TABLE[i][j],
                    "match": match,
                }

    @property
    def max_fit_residual(self) -> float:
        return float(np.max(self.fit_residual))

    @property
    def closed(self) -> bool:
        return all(v is not None for row in self.computed for v in row)

    def antisymmetric(self) -> bool:
        return self.closed and all(
            np.array_equal(self.computed[i][j], -self.computed[j][i])
            for i in range(6)
            for j in range(6)
        )


def bracket_table_audit(gens, strict: bool = True) -> BracketAudit:
    """Decompose every bracket in span(gens) and compare with the printed table.

    With ``strict=False`` a bracket outside the span is kept as ``None``
    instead of raising.
    """
    brackets = [[lie_bracket(a, b) for b in gens] for a in gens]
    computed = [[None] * 6 for _ in range(6)]
    resid = np.zeros((6, 6))
    for i in range(6):
        for j in range(6):
            coeffs, r = decompose(brackets[i][j], gens)
            resid[i, j] = r
            if r > FIT_TOL:
                if strict:
                    raise DecompositionError(
                        f"[{NAMES[i]}, {NAMES[j]}] is not in the span (fit residual {r:.3g})"
                    )
                continue
            computed[i][j] = coeffs
    audit = BracketAudit(computed=computed, fit_residual=resid, brackets=brackets)
    for row in audit.rows():
        if not row["match"]:
            audit.mismatches.append((row["i"], row["j"], row["computed"], row["printed"]))
    return audit


def jacobi_defect(gens, n_points: int = 50, seed: int = 11) -> float:
    X, T, u = sample_points(n_points, seed)
    worst = 0.0
    n = len(gens)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                A, B, C = gens[a], gens[b], gens[c]
                s = (
                    lie_bracket(A, lie_bracket(B, C))
                    + lie_bracket(B, lie_bracket(C, A))
                    + lie_bracket(C, lie_bracket(A, B))
                )
                worst = max(worst, float(np.max(np.abs(s.evaluate(X, T, u)))))
    return worst


def antisymmetry_defect(gens, n_points: int = 50, seed: int = 13) -> float:
    X, T, u = sample_points(n_points, seed)
    worst = 0.0
    for A in gens:
        for B in gens:
            s = lie_bracket(A, B) + lie_bracket(B, A)
            worst = max(worst, float(np.max(np.abs(s.evaluate(X, T, u)))))
    return worst


# ---------------------------------------------------- determining equations


@dataclass(frozen=True)
class InfinitesimalFamily:
    a1: float = 0.0
    a2: float = 0.0
    a3: float = 0.0
    a4: float = 0.0
    a5: float = 0.0
    a6: float = 0.0


DETERMINING_LABELS = ("det-a", "det-b", "det-c", "det-d", "det-e", "det-f", "det-g")


def _chain_primitives(coeffs: CoeffFamily, orders: FracOrders):
    """Primitives with time measured in T and classical T-derivatives.

    The ``t`` slot of the returned power sums holds powers of T.
    """
    cfT = coeffs.cf_T(orders)
    mu = coeffs.mu(orders)
    f = GenPowerSum.monomial(cfT, 0.0, mu)
    g = f * coeffs.k
    I = lambda p: frac_primitive_power(p, 1.0, "t")  # noqa: E731
    F_alpha = I(f)
    return PowerPrimitives(f, g, F_alpha, I(F_alpha), I(g), I(f * I(g)))


TIME_SEMANTICS = ("power", "chain")


def infinitesimals(
    fam: InfinitesimalFamily, coeffs: CoeffFamily, orders: FracOrders, time: str = "power"
):
    """(xi, tau, eta) of the general infinitesimal as power sums.

    ``time="power"`` uses raw ``t`` and the power rule throughout;
    ``time="chain"`` keeps the power rule in ``x`` but writes time through T
    with classical T-derivatives (the chain-rule reading).
    """
    if time not in TIME_SEMANTICS:
        raise ValueError(f"time semantics must be one of {TIME_SEMANTICS}")
    b = orders.beta
    prim = power_primitives(coeffs, orders) if time == "power" else _chain_primitives(coeffs, orders)
    Xr = GenPowerSum.monomial(1.0 / orders.gamma_beta, b, 0.0)
    X2 = GenPowerSum.monomial(1.0 / specfun.gamma_eval(1.0 + 2.0 * b), 2.0 * b, 0.0)
    xi = prim.G * (-2.0 * fam.a1) + prim.G * Xr * (-2.0 * fam.a2) + Xr * fam.a4 + fam.a5
    tau = (prim.H * (-4.0 * fam.a2) + prim.F_alpha * (2.0 * fam.a4) + fam.a6) / prim.f
    eta = Xr * fam.a1 + prim.F_alpha * fam.a2 + X2 * fam.a2 + fam.a3
    return xi, tau, eta, prim


def determining_residuals(
    fam: InfinitesimalFamily, coeffs: CoeffFamily, orders: FracOrders, time: str = "power"
) -> dict[str, GenPowerSum]:
    """Left-hand sides of the determining equations as power sums.

    The infinitesimals do not depend on ``u``, so every ``u``-derivative is
    zero. Second-order spatial derivatives are two successive
    ``beta``-derivatives.
    """
    b = orders.beta
    a = orders.alpha if time == "power" else 1.0
    xi, tau, eta, prim = infinitesimals(fam, coeffs, orders, time)
    Dx = lambda p: mrl_derivative_power(p, b, "x")  # noqa: E731
    Dt = lambda p: mrl_derivative_power(p, a, "t")  # noqa: E731
    zero = GenPowerSum()
    f, g = prim.f, prim.g
    eta_u = zero
    eta_uu = zero
    xi_x = Dx(xi)
    tau_t = Dt(tau)
    return {
        "det-a": zero,  # tau_u
        "det-b": Dx(tau),
        "det-c": zero,  # xi_u
        "det-d": g * xi_x * 2.0 - g * tau_t - tau * Dt(g) - g * eta_u - f * eta_uu,
        "det-e": f * xi_x * 2.0 - f * tau_t - tau * Dt(f),
        "det-f": f * Dx(Dx(xi)) - Dt(xi) - g * Dx(eta) * 2.0 - f * zero * 2.0,
        "det-g": Dt(eta) - f * Dx(Dx(eta)),
    }


def check_determining(fam, coeffs, orders, points, time: str = "power") -> dict[str, float]:
    """Max absolute residual of each determining equation over ``points`` (x, t, u)."""
    pts = np.asarray(points, dtype=float)
    x, t = pts[:, 0], pts[:, 1]
    if time == "chain":
        t = t**orders.alpha / orders.gamma_alpha
    out = {}
    for label, p in determining_residuals(fam, coeffs, orders, time).items():
        vals = np.asarray(p.evaluate(x, t), dtype=float)
        out[label] = float(np.max(np.abs(vals))) if vals.size else 0.0
    return out


# -------------------------------------------------------------------- flows


@dataclass(frozen=True)
class FlowMap:
    """Exact one-parameter flow of generator ``index``.

    ``x_expr``/``t_expr`` give the new canonical coordinates as expressions in
    (X, T); ``shift`` is the increment ``u~ - u`` (also a function of X, T).
    """

    index: int
    epsilon: float
    x_expr: E.Expr
    t_expr: E.Expr
    shift: E.Expr
    domain: Callable | None = None

    def apply(self, X, T, u):
        env = {"X": np.asarray(X, dtype=float), "T": np.asarray(T, dtype=float)}
        if self.domain is not None:
            self.domain(env["X"], env["T"])
        shape = np.broadcast(env["X"], env["T"], np.asarray(u)).shape
        Xn = np.broadcast_to(E.evaluate(self.x_expr, env), shape)
        Tn = np.broadcast_to(E.evaluate(self.t_expr, env), shape)
        un = np.asarray(u, dtype=float) + np.broadcast_to(E.evaluate(self.shift, env), shape)
        return Xn, Tn, un


def exponentiate_flow(i: int, epsilon: float, family: CoeffFamily, orders: FracOrders) -> FlowMap:
    """Closed-form flow of ``V_i`` obtained by integrating its characteristic ODEs."""
    eps = float(epsilon)
    cc = canonical_coeffs(family, orders)
    db = orders.d_beta
    X, T = E.X, E.T
    C = E.Const
    q = cc.q
    if i == 1:
        G = E.mul(C(cc.k * cc.phi), E.power(T, q))
        return FlowMap(
            1,
            eps,
            E.sub(X, E.mul(C(2.0 * eps), G)),
            T,
            E.sub(E.mul(C(eps), X), E.mul(C(eps * eps), G)),
        )
    if i == 2:
        W = E.power(T, q)
        aeps = E.mul(C(4.0 * cc.h * q * eps), W)  # a*eps with a = 4 h q W
        base = E.add(E.ONE, aeps)
        r = cc.k * cc.phi / (cc.h * q)
        t_new = E.power(E.div(W, base), 1.0 / q)
        x_new = E.mul(X, E.power(base, -r / 2.0))
        if eps == 0.0:
            shift: E.Expr = E.ZERO
        else:
            log_term = E.mul(C(cc.phi / (4.0 * cc.h * q)), E.log(base))
            a_expr = E.mul(C(4.0 * cc.h * q), W)
            if abs(1.0 - r) < 1e-12:
                quad = E.div(E.mul(E.mul(C(db), E.power(X, 2.0)), E.log(base)), a_expr)
            else:
                grow = E.sub(E.power(base, 1.0 - r), E.ONE)
                quad = E.div(
                    E.mul(E.mul(C(db), E.power(X, 2.0)), grow), E.mul(C(1.0 - r), a_expr)
                )
            shift = E.add(log_term, quad)

        def domain(Xv, Tv, _c=4.0 * cc.h * q * eps, _q=q):
            if np.any(1.0 + _c * Tv**_q <= 0.0):
                raise DomainError("projective flow leaves its domain (1 + 4hq eps T^q <= 0)")

        return FlowMap(2, eps, x_new, t_new, shift, domain)
    if i == 3:
        return FlowMap(3, eps, X, T, C(eps))
    if i == 4:
        lam = cc.phi / cc.cfT
        return FlowMap(4, eps, E.mul(C(math.exp(eps)), X), E.mul(C(math.exp(2.0 * lam * eps)), T), E.ZERO)
    if i == 5:
        return FlowMap(5, eps, E.add(X, C(eps)), T, E.ZERO)
    if i == 6:
        inner = E.add(E.power(T, q), C(q * eps / cc.cfT))

        def domain(Xv, Tv, _c=q * eps / cc.cfT, _q=q):
            if np.any(Tv**_q + _c <= 0.0):
                raise DomainError("flow of V6 leaves T > 0")

        return FlowMap(6, eps, X, E.power(inner, 1.0 / q), E.ZERO, domain)
    raise ValueError(f"generator index must be 1..6, got {i}")


def printed_flow(i: int, epsilon: float, family: CoeffFamily, orders: FracOrders):
    """The printed group maps g1..g6 as numeric callables ``(X, T, u) -> (X~, T~, u~)``."""
    eps = float(epsilon)
    cc = canonical_coeffs(family, orders)
    ga = orders.gamma_alpha
    db = orders.d_beta

    def G(T):
        return cc.k * cc.phi * T**cc.q

    def Fa(T):
        return cc.phi * T**cc.q

    maps = {
        1: lambda X, T, u: (X - 2 * eps * G(T) / ga, T, u + eps * X),
        2: lambda X, T, u: (
            X * np.exp(-2 * G(T) * eps),
            G(T) / (1 + 2 * eps * G(T)),
            u
            + eps * Fa(T) / (1 + 2 * eps * G(T))
            + eps * db * X**2 * np.exp(-4 * eps * G(T) / (1 + 2 * eps * G(T))),
        ),
        3: lambda X, T, u: (X, T, u + eps),
        4: lambda X, T, u: (np.exp(eps) * X, np.exp(2 * eps) * T, u),
        5: lambda X, T, u: (X + eps, T, u),
        6: lambda X, T, u: (X, T + eps, u),
    }
    return maps[i]


def flow_deviation(i, epsilon, family, orders, n_points: int = 20, seed: int = 5) -> float:
    """Max difference between the printed map and the integrated flow."""
    X, T, u = sample_points(n_points, seed)
    got = np.stack(exponentiate_flow(i, epsilon, family, orders).apply(X, T, u))
    printed = np.stack([np.broadcast_to(v, X.shape) for v in printed_flow(i, epsilon, family, orders)(X, T, u)])
    return float(np.max(np.abs(got - printed)))


def group_law_defect(i, e1, e2, family, orders, n_points: int = 20, seed: int = 3) -> float:
    X, T, u = sample_points(n_points, seed)
    a = exponentiate_flow(i, e2, family, orders).apply(X, T, u)
    a = exponentiate_flow(i, e1, family, orders).apply(*a)
    b = exponentiate_flow(i, e1 + e2, family, orders).apply(X, T, u)
    return float(np.max(np.abs(np.stack(a) - np.stack(b))))


def tangent_defect(i, family, orders, n_points: int = 20, seed: int = 9, h: float = 5e-5) -> float:
    """Fourth-order difference d/deps at 0 of the flow minus the generator."""
    X, T, u = sample_points(n_points, seed)

    def at(e):
        return np.stack(exponentiate_flow(i, e, family, orders).apply(X, T, u))

    deriv = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h)
    gen = standard_generators(family, orders)[i - 1].evaluate(X, T, u)
    return float(np.max(np.abs(deriv - gen)))


def transform_solution(u: E.Expr, flow: FlowMap, family: CoeffFamily, orders: FracOrders) -> E.Expr:
    """Image of the solution graph ``u(X, T)`` under ``flow``.

    With ``(X0, T0)`` the preimage of ``(X, T)`` (the same flow at ``-eps``),
    the new solution is ``u(X0, T0) + shift(X0, T0)``.
    """
    back = exponentiate_flow(flow.index, -flow.epsilon, family, orders)
    pre = {"X": back.x_expr, "T": back.t_expr}
    return E.add(E.subs(u, pre), E.subs(flow.shift, pre))
