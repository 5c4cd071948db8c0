from __future__ import annotations

import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fracburgers import lie
from fracburgers.fracpoly import FracOrders, GenPowerSum, mrl_derivative_power, parse_expr
from fracburgers.fracpoly.family import CoeffFamily
from fracburgers.report import fmt_float, to_json

coef = st.floats(-50, 50, allow_nan=False).filter(lambda c: abs(c) > 1e-3)
expo = st.sampled_from([0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0])
term = st.tuples(coef, expo, expo)
sums = st.lists(term, min_size=1, max_size=5).map(lambda ts: GenPowerSum(tuple(ts)))
order = st.floats(0.05, 0.95)


@given(sums)
def test_print_parse_round_trip(p):
    q = parse_expr(str(p))
    x, t = 1.37, 0.61
    assert np.isclose(q.evaluate(x, t), p.evaluate(x, t), rtol=1e-12, atol=1e-9)


@given(sums, sums, order)
def test_power_rule_is_linear(p, q, a):
    keep = lambda s: GenPowerSum(tuple(tm for tm in s.terms if tm[1] == 0 or tm[1] >= a))  # noqa: E731
    p, q = keep(p), keep(q)
    lhs = mrl_derivative_power(p + q, a, "x").evaluate(1.3, 0.8)
    rhs = mrl_derivative_power(p, a, "x").evaluate(1.3, 0.8) + mrl_derivative_power(q, a, "x").evaluate(1.3, 0.8)
    assert np.isclose(lhs, rhs, rtol=1e-11, atol=1e-9)


@given(st.floats(1.0, 3.0), st.floats(0.05, 0.45), st.floats(0.05, 0.45))
def test_power_rule_semigroup_on_monomials(pexp, a, b):
    m = GenPowerSum.monomial(1.0, pexp, 0.0)
    two = mrl_derivative_power(mrl_derivative_power(m, a, "x"), b, "x")
    one = mrl_derivative_power(m, a + b, "x")
    assert np.isclose(two.evaluate(1.7, 1.0), one.evaluate(1.7, 1.0), rtol=1e-11)


ONE = CoeffFamily(1.0, 0.0, 1.0)
GENS = lie.standard_generators(ONE, FracOrders())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5))
def test_bracket_antisymmetry(i, j):
    a = lie.lie_bracket(GENS[i], GENS[j])
    b = lie.lie_bracket(GENS[j], GENS[i])
    X, T, u = lie.sample_points(10, seed=1)
    assert np.allclose(np.stack(a.evaluate(X, T, u)), -np.stack(b.evaluate(X, T, u)), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.floats(-0.2, 0.2), st.floats(-0.2, 0.2), st.sampled_from([0.5, 1.0]))
def test_flow_group_law(i, e1, e2, o):
    assert lie.group_law_defect(i, e1, e2, ONE, FracOrders(o, o)) <= 1e-10


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_format_round_trips(v):
    assert float(fmt_float(v)) == v


@given(st.dictionaries(st.text(max_size=5), st.floats(allow_nan=False, allow_infinity=False), max_size=6))
def test_json_is_valid_and_sorted(d):
    out = to_json(d)
    back = json.loads(out)
    assert list(back) == sorted(back)
    assert to_json(d) == out
