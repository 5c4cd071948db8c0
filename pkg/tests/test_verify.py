from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from fracburgers import lie
from fracburgers.errors import DomainError, ModeIncompatibleError
from fracburgers.fracpoly import rules
from fracburgers.fracpoly.family import CoeffFamily, FracOrders
from fracburgers.solutions import make_solution
from fracburgers.verify import (
    GridSpec,
    SemanticsMode,
    pde_residual,
    render_report,
    semantics_discrepancy,
    spatial_ratios,
)

ONE = CoeffFamily(1.0, 0.0, 1.0)
SMALL = GridSpec(0.5, 2.0, 10, 0.5, 2.0, 10)


@pytest.mark.parametrize("mode", list(SemanticsMode))
def test_constant_has_zero_residual(mode):
    sol = make_solution("constant", {"c": 3.0}, ONE, FracOrders(0.5, 0.5))
    assert pde_residual(sol, mode, SMALL).maxAbs <= 1e-12


def test_report_invariants():
    sol = make_solution("thm41", None, ONE, FracOrders(1.0, 0.5))
    r = pde_residual(sol, "canonical", SMALL)
    assert r.maxAbs >= r.l2 / math.sqrt(SMALL.nx * SMALL.nt)
    x, t = r.worstPoint
    xs, ts = SMALL.axes()
    i, j = list(xs).index(x), list(ts).index(t)
    assert abs(r.perPoint[j, i]) == r.maxAbs


def test_thm41_inconsistency_detected():
    sol = make_solution("thm41", None, ONE, FracOrders(1.0, 0.5))
    assert pde_residual(sol, "canonical").maxAbs > 0.05
    ratio = spatial_ratios(sol)["powerRule/canonical"]["second"]["median"]
    assert ratio == pytest.approx(2 / math.pi, abs=1e-12)


def test_power_mode_incompatible_for_erf():
    with pytest.raises(ModeIncompatibleError):
        pde_residual(make_solution("thm42", None, ONE, FracOrders()), "powerRule", SMALL)


def test_power_and_numeric_agree_on_power_sums():
    sol = make_solution("thm43", {"m": 2.0, "n": 1.0, "k4": 0.3}, ONE, FracOrders(0.7, 0.4))
    a = pde_residual(sol, "powerRule", SMALL).perPoint
    b = pde_residual(sol, "numericMRL", SMALL).perPoint
    assert np.max(np.abs(a - b)) <= 1e-3


def test_single_operator_variant_named():
    sol = make_solution("thm43", None, ONE, FracOrders(0.5, 0.5))
    r = pde_residual(sol, "numericMRL", SMALL, second="single")
    assert r.secondDerivative == "single"


def test_discrepancy_thm43_consistent():
    d = semantics_discrepancy(make_solution("thm43", None, ONE, FracOrders(0.5, 0.5)), SMALL)
    assert d.consistent and set(d.maxAbs) == {"canonical", "powerRule", "numericMRL"}


def test_discrepancy_needs_two_modes():
    sol = make_solution("thm41", None, ONE, FracOrders(1.0, 0.5))
    with pytest.raises(ModeIncompatibleError):
        semantics_discrepancy(sol, SMALL)


def test_grid_validation_and_parse():
    g = GridSpec.parse("0.5:2:16,0.25:1:8")
    assert (g.nx, g.nt, g.t0) == (16, 8, 0.25)
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 8, 0.5, 1.0, 8)
    with pytest.raises(DomainError):
        GridSpec.parse("1:2:8")


def test_render_json_keys_and_determinism():
    sol = make_solution("thm43", None, ONE, FracOrders())
    r = pde_residual(sol, "canonical", SMALL)
    a, b = render_report(r, "json"), render_report(r, "json")
    assert a == b
    keys = set(json.loads(a))
    assert {"solutionId", "mode", "grid", "maxAbs", "l2", "worstPoint"} <= keys


def test_render_bracket_csv_rows():
    audit = lie.bracket_table_audit(lie.standard_generators(ONE, FracOrders()))
    rows = list(csv.reader(io.StringIO(render_report(audit, "csv").decode())))
    assert rows[0] == ["i", "j", "computed", "printed", "match"]
    assert len(rows) == 37


def test_render_rule_audit():
    o = FracOrders(1.0, 0.5)
    data = json.loads(render_report(rules.audit_jumarie_rules(o, rules.default_samples(o)), "json"))
    assert data["ok"] is True and len(data["rules"]) == 6


def test_float_format_is_17_digits():
    out = render_report({"v": 0.1}, "json").decode()
    assert "0.10000000000000001" in out
