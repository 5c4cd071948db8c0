from __future__ import annotations

import numpy as np
import pytest

from fracburgers import lie
from fracburgers.errors import DomainError
from fracburgers.fracpoly import expr as E
from fracburgers.fracpoly.family import CoeffFamily, FracOrders

ONE = CoeffFamily(1.0, 0.0, 1.0)
CLASSICAL = FracOrders(1.0, 1.0)


@pytest.fixture(scope="module")
def gens():
    return lie.standard_generators(ONE, CLASSICAL)


def _at(field, X=1.3, T=0.7, u=0.2):
    return np.array(field.evaluate(np.array([X]), np.array([T]), np.array([u]))).ravel()


def test_v2_reference_form(gens):
    X, T = 1.3, 0.7
    assert np.allclose(_at(gens[1], X, T), [-2 * T * X, -2 * T**2, T + X**2 / 2])


def test_v2_tau_at_half_orders():
    v2 = lie.standard_generators(ONE, FracOrders(0.5, 0.5))[1]
    assert _at(v2, T=0.7)[1] == pytest.approx(-np.pi * 0.7**2, rel=1e-12)


def test_hand_bracket_v1_v4(gens):
    # (-2T, 0, X) with (X, 2T, 0) gives (2T, 0, -X)
    b = lie.lie_bracket(gens[0], gens[3])
    X, T = 1.1, 0.4
    assert np.allclose(_at(b, X, T), [2 * T, 0.0, -X])


def test_bracket_v4_v5_is_minus_v5(gens):
    vec = lie.decompose(lie.lie_bracket(gens[3], gens[4]), gens)[0]
    assert np.array_equal(vec, [0, 0, 0, 0, -1, 0])


def test_audit_structure(gens):
    audit = lie.bracket_table_audit(gens)
    rows = list(audit.rows())
    assert len(rows) == 36
    assert audit.antisymmetric()
    assert audit.max_fit_residual <= 1e-9
    bad = {(i, j) for i, j, *_ in audit.mismatches}
    assert {("V1", "V4"), ("V4", "V1"), ("V4", "V5"), ("V5", "V4")} <= bad
    assert not any(i == "V3" for i, _ in bad)


def test_jacobi(gens):
    assert lie.jacobi_defect(gens) <= 1e-10
    assert lie.antisymmetry_defect(gens) <= 1e-12


def test_table_does_not_close_at_half_orders():
    g = lie.standard_generators(ONE, FracOrders(0.5, 0.5))
    audit = lie.bracket_table_audit(g, strict=False)
    assert not audit.closed


@pytest.mark.parametrize("i", range(1, 7))
def test_flow_identity_and_group_law(i):
    assert lie.group_law_defect(i, 0.1, -0.25, ONE, CLASSICAL) <= 1e-10
    assert lie.tangent_defect(i, ONE, CLASSICAL) <= 1e-6
    X = np.array([0.9]); T = np.array([1.2]); u = np.array([0.3])
    assert np.allclose(np.ravel(lie.exponentiate_flow(i, 0.0, ONE, CLASSICAL).apply(X, T, u)), [0.9, 1.2, 0.3])


def test_flow_g1_closed_form():
    eps, X, T, u = 0.3, 1.0, 0.8, 0.1
    got = np.ravel(lie.exponentiate_flow(1, eps, ONE, CLASSICAL).apply(np.array([X]), np.array([T]), np.array([u])))
    assert np.allclose(got, [X - 2 * eps * T, T, u + eps * X - eps**2 * T])


def test_printed_g1_deviates():
    assert lie.flow_deviation(1, 0.3, ONE, CLASSICAL) > 1e-3


def test_projective_flow_domain():
    flow = lie.exponentiate_flow(2, -5.0, ONE, CLASSICAL)
    with pytest.raises(DomainError):
        flow.apply(np.array([1.0]), np.array([1.0]), np.array([0.0]))


def test_transform_constant_under_g1():
    flow = lie.exponentiate_flow(1, 0.3, ONE, CLASSICAL)
    new = lie.transform_solution(E.Const(2.0), flow, ONE, CLASSICAL)
    X, T = 1.4, 0.6
    assert E.evaluate(new, {"X": X, "T": T}) == pytest.approx(2.0 + 0.3 * X + 0.09 * T)


def test_determining_f_g_one():
    fam = lie.InfinitesimalFamily(1, 1, 1, 1, 1, 1)
    rng = np.random.default_rng(0)
    pts = np.column_stack([rng.uniform(0.5, 2, 20), rng.uniform(0.5, 2, 20), rng.uniform(-1, 1, 20)])
    for o in (CLASSICAL, FracOrders(0.5, 0.5)):
        res = lie.check_determining(fam, ONE, o, pts)
        assert max(res.values()) <= 1e-9
        assert res["det-a"] == 0.0 and res["det-c"] == 0.0


def test_determining_chain_time_reading():
    fam = lie.InfinitesimalFamily(1, 1, 1, 1, 1, 1)
    rng = np.random.default_rng(1)
    pts = np.column_stack([rng.uniform(0.5, 2, 20), rng.uniform(0.5, 2, 20), rng.uniform(-1, 1, 20)])
    res = lie.check_determining(fam, CoeffFamily(1.0, 0.5, 1.0), FracOrders(0.5, 0.5), pts, time="chain")
    assert max(res.values()) <= 1e-9
