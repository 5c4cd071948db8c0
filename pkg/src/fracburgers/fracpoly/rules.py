"""Audit of the calculus rules for the modified Riemann-Liouville derivative.

Each rule is evaluated with the power rule as the definition of the operator.
Rules that follow from it (the inverse-integral identity, the power rule itself
and the two normalization rules) must hold to rounding; the product and chain
rules are measured and reported, not asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import specfun
from .family import FracOrders
from .powersum import GenPowerSum, frac_primitive_power, mrl_derivative_power

SAMPLE_X = (0.5, 1.0, 1.5, 2.0)
EXACT_TOL = 1e-12


@dataclass(frozen=True)
class RuleResult:
    rule: str
    description: str
    max_violation: float
    asserted: bool

    @property
    def holds(self) -> bool:
        return self.max_violation <= EXACT_TOL

    @property
    def ok(self) -> bool:
        return self.holds or not self.asserted


@dataclass
class RuleAuditReport:
    orders: FracOrders
    results: list = field(default_factory=list)
    canonical_ratio: float = 1.0

    def by_rule(self, rule: str) -> RuleResult:
        for r in self.results:
            if r.rule == rule:
                return r
        raise KeyError(rule)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def _ev(p: GenPowerSum, xs) -> np.ndarray:
    return np.asarray(p.evaluate(np.asarray(xs, dtype=float), 1.0), dtype=float)


def _scale(p: GenPowerSum) -> float:
    return max(1.0, p.max_abs_coeff())


def _rule_iv_direct(p: GenPowerSum, order: float, xs) -> np.ndarray:
    # the power rule written out again against the standard-library gamma
    total = np.zeros(len(xs))
    xs = np.asarray(xs, dtype=float)
    for c, px, pt in p.terms:
        if px == 0.0:
            continue
        coef = c * math.gamma(1.0 + px) / math.gamma(1.0 + px - order)
        total += coef * xs ** (px - order)
    return total


def audit_jumarie_rules(orders: FracOrders, samples) -> RuleAuditReport:
    """Check rules (i)-(vi) over ``samples`` (power sums in x, order ``beta``)."""
    samples = list(samples)
    if not samples:
        raise ValueError("audit needs at least one sample")
    b = orders.beta
    xs = SAMPLE_X
    D = lambda p: mrl_derivative_power(p, b, "x")  # noqa: E731
    I = lambda p: frac_primitive_power(p, b, "x")  # noqa: E731

    worst = {k: 0.0 for k in ("i", "ii", "iii", "iv", "v", "vi")}
    for p in samples:
        s = _scale(p)
        # (i) f(x) - f(0) = I^b D^b f
        lhs = _ev(p - p.at_zero("x"), xs)
        worst["i"] = max(worst["i"], float(np.max(np.abs(lhs - _ev(I(D(p)), xs)))) / s)
        # (iv) implementation against a direct evaluation of the formula
        worst["iv"] = max(
            worst["iv"], float(np.max(np.abs(_ev(D(p), xs) - _rule_iv_direct(p, b, xs)))) / s
        )
        # (iii) chain rule with outer y -> y^2: D[p^2] vs 2 p D[p]
        sq = p * p
        chain = 2.0 * _ev(p, xs) * _ev(D(p), xs)
        worst["iii"] = max(worst["iii"], float(np.max(np.abs(_ev(D(sq), xs) - chain))))
        for q in samples:
            # (ii) product rule
            lhs = _ev(D(p * q), xs)
            rhs = _ev(D(p), xs) * _ev(q, xs) + _ev(p, xs) * _ev(D(q), xs)
            worst["ii"] = max(worst["ii"], float(np.max(np.abs(lhs - rhs))))

    gb = orders.gamma_beta
    one = GenPowerSum.const(1.0)
    xb = GenPowerSum.monomial(1.0, b, 0.0)
    # (v) integral of (dx)^b equals x^b, i.e. G(1+b) I^b[1] = x^b
    worst["v"] = float(np.max(np.abs(_ev(I(one) * gb, xs) - _ev(xb, xs))))
    # (vi) G(1+b) dx = (dx)^b, i.e. D^b[x^b] = G(1+b)
    worst["vi"] = float(np.max(np.abs(_ev(D(xb), xs) / gb - 1.0)))

    desc = {
        "i": "f(x) - f(0) = I^b D^b f",
        "ii": "product rule D(uv) = (Du)v + u(Dv)",
        "iii": "chain rule D[y(p)] = y'(p) D p with y = p^2",
        "iv": "power rule D x^p = G(1+p)/G(1+p-b) x^(p-b)",
        "v": "G(1+b) I^b[1] = x^b",
        "vi": "D^b[x^b] / G(1+b) = 1",
    }
    asserted = {"i": True, "ii": False, "iii": False, "iv": True, "v": True, "vi": True}
    report = RuleAuditReport(orders=orders, canonical_ratio=canonical_ratio(b))
    for key in ("i", "ii", "iii", "iv", "v", "vi"):
        report.results.append(RuleResult(key, desc[key], worst[key], asserted[key]))
    return report


def canonical_ratio(beta: float) -> float:
    """Chain-rule over power-rule value of ``D^b[x^(2b)/G(1+2b)]``.

    Equals ``2 G(1+b)^2 / G(1+2b)``: pi/2 at b = 0.5, 1 at b = 1.
    """
    return 2.0 * specfun.gamma_eval(1.0 + beta) ** 2 / specfun.gamma_eval(1.0 + 2.0 * beta)


def default_samples(orders: FracOrders) -> list:
    b = orders.beta
    return [
        GenPowerSum.monomial(1.0, b, 0.0),
        GenPowerSum.monomial(1.0, 2.0 * b, 0.0),
        GenPowerSum(((2.0, 0.0, 0.0), (-1.5, 1.5, 0.0), (0.25, 3.0, 0.0))),
        GenPowerSum.monomial(1.0 / specfun.gamma_eval(1.0 + 2.0 * b), 2.0 * b, 0.0),
    ]


def product_rule_violation(u: GenPowerSum, v: GenPowerSum, order: float, x: float) -> float:
    """``|D(uv) - (Du)v - u(Dv)|`` at a single point."""
    D = lambda p: mrl_derivative_power(p, order, "x")  # noqa: E731
    lhs = D(u * v).evaluate(x, 1.0)
    rhs = D(u).evaluate(x, 1.0) * v.evaluate(x, 1.0) + u.evaluate(x, 1.0) * D(v).evaluate(x, 1.0)
    return abs(float(lhs) - float(rhs))
