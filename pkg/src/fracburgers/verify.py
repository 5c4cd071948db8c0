"""Residuals of u_t^(a) = f(t) u_x^(2b) + g(t) (u_x^(b))^2 under three readings
of the fractional derivatives, and deterministic report rendering.

``canonical``  chain rule: exact d/dX and d/dT on the canonical expression.
``powerRule``  term-wise power rule on the raw generalized power sum.
``numericMRL`` quadrature of the modified Riemann-Liouville derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import numfrac
from .errors import (
    DomainError,
    ExponentBelowOrderError,
    FracBurgersError,
    ModeIncompatibleError,
    NotPowerSumError,
)
from .fracpoly import expr as E
from .fracpoly.convert import expand_in, from_canonical
from .fracpoly.powersum import GenPowerSum, mrl_derivative_power
from .fracpoly.rules import RuleAuditReport
from .lie import BracketAudit
from .report import to_csv, to_json
from .solutions import SolutionFamily, chain_coeffs

NUMERIC_TOL = 1e-3
CONSISTENT_TOL = 10 * NUMERIC_TOL


class SemanticsMode(str, Enum):
    CANONICAL = "canonical"
    POWER_RULE = "powerRule"
    NUMERIC_MRL = "numericMRL"

    @classmethod
    def parse(cls, text: str) -> "SemanticsMode":
        aliases = {"canonical": cls.CANONICAL, "power": cls.POWER_RULE,
                   "powerrule": cls.POWER_RULE, "numeric": cls.NUMERIC_MRL,
                   "numericmrl": cls.NUMERIC_MRL}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown semantics mode {text!r}") from None


SECOND_CHOICES = ("composed", "single")


@dataclass(frozen=True)
class GridSpec:
    x0: float = 0.5
    x1: float = 2.0
    nx: int = 30
    t0: float = 0.5
    t1: float = 2.0
    nt: int = 30

    def __post_init__(self):
        if not (self.x0 > 0 and self.t0 > 0):
            raise DomainError("grid must exclude x = 0 and t = 0")
        if not (self.x1 > self.x0 and self.t1 > self.t0):
            raise DomainError("grid ranges must have positive length")
        if int(self.nx) != self.nx or int(self.nt) != self.nt or self.nx < 8 or self.nt < 8:
            raise DomainError("nx and nt must be integers >= 8")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``x0:x1:nx,t0:t1:nt``."""
        try:
            xs, ts = text.split(",")
            x0, x1, nx = xs.split(":")
            t0, t1, nt = ts.split(":")
            return cls(float(x0), float(x1), int(nx), float(t0), float(t1), int(nt))
        except ValueError as exc:
            raise DomainError(f"bad grid {text!r}; expected x0:x1:nx,t0:t1:nt") from exc

    def axes(self):
        return np.linspace(self.x0, self.x1, self.nx), np.linspace(self.t0, self.t1, self.nt)

    def as_dict(self):
        return {"xRange": [self.x0, self.x1], "nx": self.nx,
                "tRange": [self.t0, self.t1], "nt": self.nt}


@dataclass
class ResidualReport:
    solutionId: str
    mode: SemanticsMode
    grid: GridSpec
    maxAbs: float
    l2: float
    worstPoint: tuple
    secondDerivative: str = "composed"
    perPoint: np.ndarray | None = None  # shape (nt, nx)

    def as_dict(self, per_point: bool = False):
        d = {
            "solutionId": self.solutionId,
            "mode": self.mode.value,
            "grid": self.grid.as_dict(),
            "maxAbs": self.maxAbs,
            "l2": self.l2,
            "worstPoint": list(self.worstPoint),
            "secondDerivative": self.secondDerivative,
        }
        if per_point and self.perPoint is not None:
            d["perPoint"] = self.perPoint
        return d


# ------------------------------------------------------------ derivative data


def _canonical_grid(sol: SolutionFamily, x, t):
    o = sol.orders
    X = x**o.beta / o.gamma_beta
    T = t**o.alpha / o.gamma_alpha
    return X, T


def _canonical_parts(sol, x, t):
    """(u_t, u_x2, u_x) on the mesh from exact canonical derivatives."""
    X, T = _canonical_grid(sol, x, t)
    env = {"X": X, "T": T}
    U = sol.expr
    ux = E.diff(U, "X")
    ev = lambda e: np.broadcast_to(np.asarray(E.evaluate(e, env), dtype=float), X.shape)  # noqa: E731
    return ev(E.diff(U, "T")), ev(E.diff(ux, "X")), ev(ux)


def _power_sum(sol) -> GenPowerSum:
    try:
        return from_canonical(sol.expr, sol.orders)
    except FracBurgersError as exc:
        raise ModeIncompatibleError(f"{sol.id} is not a generalized power sum: {exc}") from exc


def _power_parts(sol, x, t, second: str):
    o = sol.orders
    p = _power_sum(sol)
    try:
        ut = mrl_derivative_power(p, o.alpha, "t")
        ux = mrl_derivative_power(p, o.beta, "x")
        if second == "single":
            ux2 = mrl_derivative_power(p, 2 * o.beta, "x")
        else:
            ux2 = mrl_derivative_power(ux, o.beta, "x")
    except ExponentBelowOrderError as exc:
        raise ModeIncompatibleError(str(exc)) from exc
    return tuple(np.asarray(q.evaluate(x, t), dtype=float) * np.ones_like(x) for q in (ut, ux2, ux))


def _kappa(m: float, beta: float) -> float:
    """Power-rule factor in D^b X^m = kappa X^(m-1)."""
    return math.gamma(1 + m * beta) / (math.gamma(1 + (m - 1) * beta) * math.gamma(1 + beta))


def _spatial_power(poly: dict, beta: float) -> dict:
    out: dict = {}
    for m, c in poly.items():
        if m == 0.0:
            continue
        if m < 1.0 - 1e-12:
            raise ModeIncompatibleError(f"X^{m:g} lies below the derivative order")
        key = m - 1.0
        out[key] = E.add(out.get(key, E.ZERO), E.mul(E.Const(_kappa(m, beta)), c))
    return out


def _eval_poly(poly: dict, X, T):
    total = np.zeros(np.broadcast(X, T).shape)
    for m, c in poly.items():
        total = total + np.asarray(E.evaluate(c, {"T": T}), dtype=float) * X**m
    return total


def power_spatial_parts(sol: SolutionFamily, x, t):
    """(u_x2, u_x) from the power rule applied in x only.

    Works whenever the solution is a polynomial in ``X`` with arbitrary
    time coefficients, which is wider than full power-rule mode.
    """
    try:
        poly = expand_in(sol.expr, "X")
    except NotPowerSumError as exc:
        raise ModeIncompatibleError(str(exc)) from exc
    b = sol.orders.beta
    d1 = _spatial_power(poly, b)
    d2 = _spatial_power(d1, b)
    X, T = _canonical_grid(sol, x, t)
    return _eval_poly(d2, X, T), _eval_poly(d1, X, T)


def _line_fn(sol, t_fixed=None, x_fixed=None):
    o = sol.orders
    if t_fixed is not None:
        T = t_fixed**o.alpha / o.gamma_alpha
        return lambda y: E.evaluate(sol.expr, {"X": np.asarray(y) ** o.beta / o.gamma_beta, "T": T})
    X = x_fixed**o.beta / o.gamma_beta
    return lambda s: E.evaluate(sol.expr, {"X": X, "T": np.asarray(s) ** o.alpha / o.gamma_alpha})


def _check_origin(sol):
    with np.errstate(all="ignore"):
        v0 = np.asarray(E.evaluate(sol.expr, {"X": np.array([0.0, 1.0]), "T": np.array([1.0, 0.0])}),
                        dtype=float)
    if not np.all(np.isfinite(v0)):
        raise ModeIncompatibleError(f"{sol.id} is singular at x = 0 or t = 0")


def _numeric_parts(sol, xs, ts, second: str, spec=numfrac.DEFAULT_SPEC):
    o = sol.orders
    _check_origin(sol)
    nx, nt = len(xs), len(ts)
    ut = np.empty((nt, nx))
    ux = np.empty((nt, nx))
    ux2 = np.empty((nt, nx))
    for j, t in enumerate(ts):
        fx = _line_fn(sol, t_fixed=t)
        ux[j] = numfrac.mrl_derivative_any(fx, o.beta, xs, spec)
        if second == "single":
            ux2[j] = numfrac.mrl_derivative_any(fx, 2 * o.beta, xs, spec)
        else:
            ux2[j] = numfrac.mrl_twice(fx, o.beta, xs, spec)
    for i, x in enumerate(xs):
        ut[:, i] = numfrac.mrl_derivative_any(_line_fn(sol, x_fixed=x), o.alpha, ts, spec)
    return ut, ux2, ux


def _parts(sol, mode, grid, second):
    xs, ts = grid.axes()
    x, t = np.meshgrid(xs, ts)
    if mode is SemanticsMode.CANONICAL:
        return _canonical_parts(sol, x, t)
    if mode is SemanticsMode.POWER_RULE:
        return _power_parts(sol, x, t, second)
    return _numeric_parts(sol, xs, ts, second)


def pde_residual(
    sol: SolutionFamily,
    mode: SemanticsMode | str = SemanticsMode.CANONICAL,
    grid: GridSpec | None = None,
    second: str = "composed",
) -> ResidualReport:
    """Evaluate the PDE residual on ``grid``.

    ``second`` picks how u_x^(2b) is read in the non-canonical modes:
    ``composed`` (D^b applied twice) or ``single`` (one operator of order 2b).
    """
    mode = SemanticsMode.parse(mode) if isinstance(mode, str) else mode
    grid = grid or GridSpec()
    if second not in SECOND_CHOICES:
        raise ValueError(f"second must be one of {SECOND_CHOICES}")
    xs, ts = grid.axes()
    x, t = np.meshgrid(xs, ts)
    ut, ux2, ux = _parts(sol, mode, grid, second)
    cc = chain_coeffs(sol.family, sol.orders)
    _, T = _canonical_grid(sol, x, t)
    f = np.asarray(E.evaluate(cc.f(), {"T": T}), dtype=float) * np.ones_like(T)
    g = np.asarray(E.evaluate(cc.g(), {"T": T}), dtype=float) * np.ones_like(T)
    r = ut - f * ux2 - g * ux**2
    if not np.all(np.isfinite(r)):
        raise DomainError(f"{sol.id} residual is not finite on the grid")
    a = np.abs(r)
    j, i = np.unravel_index(int(np.argmax(a)), a.shape)
    return ResidualReport(
        solutionId=sol.id,
        mode=mode,
        grid=grid,
        maxAbs=float(a[j, i]),
        l2=float(math.sqrt(float(np.sum(r * r)))),
        worstPoint=(float(xs[i]), float(ts[j])),
        secondDerivative="chain" if mode is SemanticsMode.CANONICAL else second,
        perPoint=r,
    )


# ------------------------------------------------------- semantics comparison


@dataclass
class DiscrepancyReport:
    solutionId: str
    grid: GridSpec
    maxAbs: dict  # mode -> maxAbs
    skipped: dict  # mode -> reason
    ratios: dict  # "<mode>/canonical" -> {"second": ..., "first": ...}
    pairwiseMaxDiff: dict
    consistent: bool
    threshold: float = CONSISTENT_TOL
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "solutionId": self.solutionId,
            "grid": self.grid.as_dict(),
            "maxAbs": self.maxAbs,
            "skipped": self.skipped,
            "ratios": self.ratios,
            "pairwiseMaxDiff": self.pairwiseMaxDiff,
            "consistent": self.consistent,
            "threshold": self.threshold,
        }


def _ratio_summary(num, den):
    """Ratio statistics over points where ``den`` is nonzero.

    When ``den`` vanishes everywhere the ratio is undefined; only the size of
    ``num`` is reported then.
    """
    mask = np.abs(den) > 1e-12
    out = {"points": int(mask.sum()), "numeratorMaxAbs": float(np.max(np.abs(num)))}
    if not np.any(mask):
        out.update(median=None, min=None, max=None)
        return out
    q = num[mask] / den[mask]
    out.update(median=float(np.median(q)), min=float(np.min(q)), max=float(np.max(q)))
    return out


def spatial_ratios(sol: SolutionFamily, grid: GridSpec | None = None, numeric: bool = False) -> dict:
    """Spatial derivative evaluations of other semantics divided by canonical ones.

    The power-rule entry needs only a polynomial in X (time coefficients are
    arbitrary), so it exists even where full power-rule mode does not.
    """
    grid = grid or GridSpec()
    xs, ts = grid.axes()
    x, t = np.meshgrid(xs, ts)
    _, c2, c1 = _canonical_parts(sol, x, t)
    ratios = {}
    try:
        p2, p1 = power_spatial_parts(sol, x, t)
        ratios["powerRule/canonical"] = {"second": _ratio_summary(p2, c2), "first": _ratio_summary(p1, c1)}
    except ModeIncompatibleError:
        pass
    if numeric:
        _, n2, n1 = _numeric_parts(sol, xs, ts, "composed")
        ratios["numericMRL/canonical"] = {"second": _ratio_summary(n2, c2), "first": _ratio_summary(n1, c1)}
    return ratios


def semantics_discrepancy(sol: SolutionFamily, grid: GridSpec | None = None,
                          modes=None) -> DiscrepancyReport:
    """Run every applicable mode and compare residuals and spatial derivatives.

    Spatial ratios are mode/canonical, median over points where the canonical
    value is nonzero. The power-rule spatial ratio is computed whenever the
    solution is polynomial in X, even if full power-rule mode does not apply.
    """
    grid = grid or GridSpec()
    modes = list(modes or SemanticsMode)
    reports, skipped = {}, {}
    for m in modes:
        try:
            reports[m] = pde_residual(sol, m, grid)
        except (ModeIncompatibleError, DomainError) as exc:
            skipped[m.value] = str(exc)
    if len(reports) < 2:
        raise ModeIncompatibleError(
            f"{sol.id}: fewer than two semantics apply ({', '.join(skipped.values())})"
        )
    ratios = spatial_ratios(sol, grid, numeric=SemanticsMode.NUMERIC_MRL in reports)
    names = sorted(reports, key=lambda m: m.value)
    diffs = {}
    for a_i, a in enumerate(names):
        for b in names[a_i + 1:]:
            d = np.max(np.abs(reports[a].perPoint - reports[b].perPoint))
            diffs[f"{a.value}-{b.value}"] = float(d)
    consistent = all(v <= CONSISTENT_TOL for v in diffs.values())
    return DiscrepancyReport(
        solutionId=sol.id,
        grid=grid,
        maxAbs={m.value: r.maxAbs for m, r in reports.items()},
        skipped=skipped,
        ratios=ratios,
        pairwiseMaxDiff=diffs,
        consistent=consistent,
    )


# ------------------------------------------------------------------ rendering


def _rule_rows(r: RuleAuditReport):
    for res in r.results:
        yield [res.rule, res.description, res.max_violation, res.asserted, res.holds]


def render_report(r, fmt: str = "json") -> bytes:
    """Serialize a report deterministically as JSON or CSV (UTF-8 bytes)."""
    if fmt not in ("json", "csv"):
        raise ValueError(f"format must be json or csv, got {fmt!r}")
    if isinstance(r, ResidualReport):
        if fmt == "json":
            return to_json(r.as_dict())
        xs, ts = r.grid.axes()
        rows = []
        per = r.perPoint if r.perPoint is not None else np.full((len(ts), len(xs)), np.nan)
        for j, t in enumerate(ts):
            for i, x in enumerate(xs):
                rows.append([x, t, per[j, i]])
        return to_csv(["x", "t", "residual"], rows)
    if isinstance(r, DiscrepancyReport):
        if fmt == "json":
            return to_json(r.as_dict())
        rows = [[m, v] for m, v in sorted(r.maxAbs.items())]
        return to_csv(["mode", "maxAbs"], rows)
    if isinstance(r, BracketAudit):
        rows = list(r.rows())
        if fmt == "json":
            return to_json({"closed": r.closed, "maxFitResidual": r.max_fit_residual, "rows": rows})
        return to_csv(["i", "j", "computed", "printed", "match"],
                      [[d["i"], d["j"], d["computed"], d["printed"], d["match"]] for d in rows])
    if isinstance(r, RuleAuditReport):
        if fmt == "json":
            return to_json({
                "alpha": r.orders.alpha,
                "beta": r.orders.beta,
                "canonicalRatio": r.canonical_ratio,
                "ok": r.ok,
                "rules": [
                    {"rule": x.rule, "description": x.description, "maxViolation": x.max_violation,
                     "asserted": x.asserted, "holds": x.holds}
                    for x in r.results
                ],
            })
        return to_csv(["rule", "description", "maxViolation", "asserted", "holds"], _rule_rows(r))
    if isinstance(r, dict):
        if fmt == "json":
            return to_json(r)
        return to_csv(["key", "value"], [[k, r[k]] for k in sorted(r)])
    raise TypeError(f"cannot render {type(r).__name__}")


__all__ = [
    "DiscrepancyReport",
    "GridSpec",
    "ResidualReport",
    "SemanticsMode",
    "pde_residual",
    "power_spatial_parts",
    "render_report",
    "semantics_discrepancy",
    "spatial_ratios",
]
