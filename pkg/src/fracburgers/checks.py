"""Embedded acceptance suite behind ``fracburgers selftest``.

Each check returns (ok, detail). Checks are grouped by module so that
``--filter lie`` runs only the symmetry checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import lie, numfrac, specfun, subspace, verify
from .errors import FracBurgersError
from .fracpoly import rules
from .fracpoly.family import CoeffFamily, FracOrders
from .fracpoly.powersum import GenPowerSum
from .solutions import make_solution, reduced_ode_residual


@dataclass(frozen=True)
class Check:
    name: str
    group: str
    criterion: int
    run: Callable[[], tuple]


@dataclass(frozen=True)
class CheckResult:
    name: str
    group: str
    criterion: int
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} [{self.criterion}] {self.name}: {self.detail}"


ONE = CoeffFamily(1.0, 0.0, 1.0)
SQRT_T = CoeffFamily(1.0, 0.5, 1.0)


# ------------------------------------------------------------------ specfun


def _gamma():
    zs = np.linspace(0.1, 6.0, 60)
    err = max(abs(specfun.gamma_eval(z) / math.gamma(z) - 1.0) for z in zs)
    return err <= 1e-13, f"max relative error {err:.3g} vs math.gamma"


def _erf():
    zs = np.linspace(-6.0, 6.0, 241)
    err = float(np.max(np.abs(specfun.erf(zs) - np.array([math.erf(z) for z in zs]))))
    return err <= 1e-12, f"max abs error {err:.3g} vs math.erf"


# ------------------------------------------------------------------ numfrac


def _exponents(alpha):
    return np.linspace(alpha, 3.0, 20)


def _mrl_power():
    worst = 0.0
    xs = np.array([0.5, 1.0, 2.0])
    for a in (0.3, 0.5, 0.7):
        for p in _exponents(a):
            got = numfrac.mrl_derivative_num(lambda y, p=p: y**p, a, xs)
            want = math.gamma(1 + p) / math.gamma(1 + p - a) * xs ** (p - a)
            worst = max(worst, float(np.max(np.abs(got / want - 1.0))))
    return worst <= 1e-3, f"max relative error {worst:.3g} (tol 1e-3)"


def _rl_power():
    worst = 0.0
    xs = np.array([0.5, 1.0, 2.0])
    for a in (0.3, 0.5, 0.7):
        for p in _exponents(a):
            got = numfrac.rl_integral_num(lambda y, p=p: y**p, a, xs)
            want = math.gamma(1 + p) / math.gamma(1 + p + a) * xs ** (p + a)
            worst = max(worst, float(np.max(np.abs(got - want))))
    return worst <= 1e-6, f"max abs error {worst:.3g} (tol 1e-6)"


# ------------------------------------------------------------------ fracpoly


def _rules():
    bad = []
    for b in (0.3, 0.5, 0.7, 1.0):
        o = FracOrders(1.0, b)
        rep = rules.audit_jumarie_rules(o, rules.default_samples(o))
        for r in rep.results:
            if r.asserted and not r.holds:
                bad.append(f"{r.rule}@{b:g}")
    return not bad, "asserted rules exact" if not bad else "violated: " + ", ".join(bad)


def _product_rule():
    u = GenPowerSum.monomial(1.0, 0.5, 0.0)
    v = rules.product_rule_violation(u, u, 0.5, 1.0)
    want = abs(2 / math.sqrt(math.pi) - math.sqrt(math.pi))
    return abs(v - want) <= 1e-6, f"violation {v:.10f}, expected {want:.10f}"


# ---------------------------------------------------------------------- lie


def _determining():
    rng = np.random.default_rng(42)
    pts = np.column_stack([rng.uniform(0.5, 2, 100), rng.uniform(0.5, 2, 100), rng.uniform(-1, 1, 100)])
    fam = lie.InfinitesimalFamily(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    parts, ok = [], True
    for name, coeffs in (("f=g=t^0.5", SQRT_T), ("f=g=1", ONE)):
        for a, b in ((1.0, 1.0), (0.5, 0.5)):
            try:
                res = lie.check_determining(fam, coeffs, FracOrders(a, b), pts)
                worst = max(res.values())
                good = worst <= 1e-9
                parts.append(f"{name}({a:g},{b:g}) {worst:.3g}")
            except FracBurgersError as exc:
                good = False
                parts.append(f"{name}({a:g},{b:g}) {type(exc).__name__}")
            ok &= good
    return ok, "; ".join(parts)


def _brackets():
    gens = lie.standard_generators(ONE, FracOrders(1.0, 1.0))
    audit = lie.bracket_table_audit(gens)
    jac = lie.jacobi_defect(gens)
    idx = {n: k for k, n in enumerate(lie.NAMES)}
    mism = {(idx[i], idx[j]) for i, j, *_ in audit.mismatches}
    need_mismatch = {(0, 3), (3, 0), (3, 4), (4, 3)}
    need_match = {(2, j) for j in range(6)} | {(0, 4), (0, 5)}
    ok = (
        audit.antisymmetric()
        and jac <= 1e-10
        and audit.max_fit_residual <= 1e-9
        and need_mismatch <= mism
        and not (need_match & mism)
    )
    return ok, (
        f"antisymmetric={audit.antisymmetric()} jacobi={jac:.3g} fit={audit.max_fit_residual:.3g} "
        f"mismatches={len(mism)}"
    )


def _flows():
    worst_g, worst_t, exact = 0.0, 0.0, True
    for a, b in ((1.0, 1.0), (0.5, 0.5)):
        o = FracOrders(a, b)
        for i in range(1, 7):
            worst_g = max(worst_g, lie.group_law_defect(i, 0.1, 0.15, ONE, o))
            worst_t = max(worst_t, lie.tangent_defect(i, ONE, o))
        for i in (4, 5, 6):
            # equal up to the last bit of the gamma-built constants
            exact &= lie.flow_deviation(i, 0.3, ONE, o) <= 1e-14
    ok = worst_g <= 1e-10 and worst_t <= 1e-6 and exact
    return ok, f"group law {worst_g:.3g}, tangent {worst_t:.3g}, g4-g6 match printed={exact}"


def _transform_constant():
    worst = 0.0
    for a, b in ((1.0, 1.0), (0.5, 0.5)):
        o = FracOrders(a, b)
        for i in (3, 4, 5, 6):
            flow = lie.exponentiate_flow(i, 0.2, ONE, o)
            sol = make_solution("constant", {"c": 1.5}, ONE, o)
            new = lie.transform_solution(sol.expr, flow, ONE, o)
            moved = type(sol)("constant", sol.params, ONE, o, new)
            worst = max(worst, verify.pde_residual(moved, "canonical").maxAbs)
    return worst <= 1e-10, f"max canonical residual {worst:.3g}"


# ---------------------------------------------------------------- solutions


def _reduced_odes():
    worst, parts = 0.0, []
    for sid in ("thm41", "thm42", "thm43", "thm44", "thm45"):
        r = reduced_ode_residual(make_solution(sid, None, ONE, FracOrders(0.5, 0.5)))
        worst = max(worst, r.max_abs)
        parts.append(f"{r.ode_id}:{r.max_abs:.2g}")
    return worst <= 1e-9, " ".join(parts)


def _canonical_residuals():
    ok, parts = True, []
    for a, b in ((1.0, 1.0), (0.5, 0.5), (0.5, 1.0)):
        o = FracOrders(a, b)
        for sid in ("thm42", "thm43", "thm45"):
            m = verify.pde_residual(make_solution(sid, None, ONE, o), "canonical").maxAbs
            ok &= m <= 1e-10
    parts.append("thm42/43/45 " + ("<= 1e-10" if ok else "above 1e-10"))
    r1 = verify.pde_residual(make_solution("thm41", None, ONE, FracOrders(1.0, 1.0)), "canonical").maxAbs
    sol = make_solution("thm41", None, ONE, FracOrders(1.0, 0.5))
    r2 = verify.pde_residual(sol, "canonical").maxAbs
    ratio = verify.spatial_ratios(sol)["powerRule/canonical"]["second"]["median"]
    ok &= r1 <= 1e-10 and r2 > 0.05 and abs(ratio - 2 / math.pi) <= 1e-6
    parts.append(f"thm41 beta=1 {r1:.3g}, beta=0.5 {r2:.4g}, ratio {ratio:.10f}")
    return ok, "; ".join(parts)


# ------------------------------------------------------------------- verify

_INTERIOR = verify.GridSpec(0.5, 2.0, 16, 0.5, 2.0, 16)


def _numeric_thm43():
    m = verify.pde_residual(make_solution("thm43", None, ONE, FracOrders(0.5, 0.5)), "numericMRL", _INTERIOR).maxAbs
    return m <= 1e-3, f"maxAbs {m:.3g}"


def _numeric_thm45():
    vals = [
        verify.pde_residual(make_solution("thm45", None, ONE, FracOrders(a, 1.0)), "numericMRL", _INTERIOR).maxAbs
        for a in (0.5, 1.0)
    ]
    return max(vals) <= 1e-3, "maxAbs " + ", ".join(f"{v:.3g}" for v in vals)


# ----------------------------------------------------------------- subspace


def _subspace_solutions(system="printed"):
    for fam in (ONE, SQRT_T):
        for a in (0.5, 1.0):
            yield subspace.solve_coefficient_system(fam, FracOrders(a, 1.0), 1.0, 1.0, 0.0, system)


def _subspace_chain():
    worst = max(max(subspace.coefficient_ode_residuals(s).values()) for s in _subspace_solutions())
    return worst <= 1e-10, f"max ODE residual {worst:.3g}"


def _subspace_numeric():
    worst = max(
        max(subspace.coefficient_ode_residuals(s, semantics="numeric").values()) for s in _subspace_solutions()
    )
    return worst <= 1e-3, f"max ODE residual {worst:.3g} (tol 1e-3)"


def _subspace_beta1():
    s = subspace.solve_coefficient_system(ONE, FracOrders(1.0, 1.0), 1.0, 1.0, 0.0)
    m = verify.pde_residual(subspace.assemble_subspace_solution(s), "canonical").maxAbs
    return m <= 1e-10, f"canonical maxAbs {m:.3g}"


def _subspace_remainder():
    w = subspace.check_w3_invariance(0.0, 0.0, 1.0, ONE, FracOrders(1.0, 0.5))
    coef = w.remainder_coefficient()
    want = 4 / math.pi - 1
    return abs(coef - want) <= 1e-9, f"remainder {coef:.12f}, expected {want:.12f}"


CHECKS = (
    Check("specfun.gamma", "specfun", 1, _gamma),
    Check("specfun.erf", "specfun", 1, _erf),
    Check("numfrac.mrl-power-rule", "numfrac", 1, _mrl_power),
    Check("numfrac.rl-integral", "numfrac", 1, _rl_power),
    Check("fracpoly.rules", "fracpoly", 2, _rules),
    Check("fracpoly.product-rule", "fracpoly", 2, _product_rule),
    Check("lie.determining", "lie", 3, _determining),
    Check("lie.brackets", "lie", 4, _brackets),
    Check("lie.flows", "lie", 5, _flows),
    Check("lie.transform-constant", "lie", 5, _transform_constant),
    Check("solutions.reduced-odes", "solutions", 6, _reduced_odes),
    Check("solutions.canonical-residuals", "solutions", 7, _canonical_residuals),
    Check("verify.numeric-thm43", "verify", 8, _numeric_thm43),
    Check("verify.numeric-thm45", "verify", 8, _numeric_thm45),
    Check("subspace.chain-odes", "subspace", 9, _subspace_chain),
    Check("subspace.numeric-odes", "subspace", 9, _subspace_numeric),
    Check("subspace.beta1-residual", "subspace", 9, _subspace_beta1),
    Check("subspace.remainder", "subspace", 9, _subspace_remainder),
)


def select(filter_text: str | None = None):
    if not filter_text:
        return list(CHECKS)
    return [c for c in CHECKS if c.group == filter_text or filter_text in c.name]


def run_checks(filter_text: str | None = None) -> list[CheckResult]:
    out = []
    for c in select(filter_text):
        try:
            ok, detail = c.run()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(c.name, c.group, c.criterion, bool(ok), detail))
    return out


