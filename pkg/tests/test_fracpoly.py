from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from fracburgers.errors import (
    ExponentBelowOrderError,
    NotCommensurateError,
    NotPowerSumError,
    ParseError,
)
from fracburgers.fracpoly import (
    CoeffFamily,
    FracOrders,
    GenPowerSum,
    audit_jumarie_rules,
    diff_canonical,
    frac_primitive_power,
    from_canonical,
    mrl_derivative_power,
    parse_expr,
    power_primitives,
    to_canonical,
)
from fracburgers.fracpoly import expr as E
from fracburgers.fracpoly.convert import expand_in
from fracburgers.fracpoly.rules import canonical_ratio, default_samples, product_rule_violation


def test_parse_and_print_power_sum():
    p = parse_expr("x^2 + 3*t")
    assert str(p) == "3*t + x^2"
    assert p.evaluate(2.0, 1.0) == pytest.approx(7.0)


def test_parse_negative_exponent_and_gamma_constant():
    p = parse_expr("gamma(3)*x^(-0.5)")
    assert p.terms == ((2.0, -0.5, 0.0),) or p.terms[0][0] == pytest.approx(2.0)
    assert "x^(-0.5)" in str(p)


def test_parse_error_column():
    with pytest.raises(ParseError) as exc:
        parse_expr("x^")
    assert exc.value.column == 2


def test_mixed_variables_rejected():
    with pytest.raises(ParseError):
        parse_expr("x + X")


def test_canonical_round_trip():
    e = parse_expr("log(cosh(X)) + 2*T - X^2/(4*T)")
    assert parse_expr(str(e)) == e


@pytest.mark.parametrize("order", [0.3, 0.5, 0.7])
def test_power_rule_against_mpmath(order):
    p = GenPowerSum.monomial(1.0, 1.7, 0.0)
    d = mrl_derivative_power(p, order, "x")
    want = mpmath.gamma(2.7) / mpmath.gamma(2.7 - order) * mpmath.mpf(1.3) ** (1.7 - order)
    assert d.evaluate(1.3, 1.0) == pytest.approx(float(want), rel=1e-13)


def test_constant_is_annihilated():
    assert mrl_derivative_power(GenPowerSum.const(4.0), 0.5, "x").is_zero()


def test_exponent_below_order():
    with pytest.raises(ExponentBelowOrderError):
        mrl_derivative_power(GenPowerSum.monomial(1.0, 0.2, 0.0), 0.5, "x")


def test_integer_order_is_classical():
    d = mrl_derivative_power(GenPowerSum.monomial(1.0, -0.5, 0.0), 1.0, "x")
    assert d.terms == ((-0.5, -1.5, 0.0),)


def test_primitive_then_derivative():
    p = GenPowerSum(((1.0, 0.5, 0.0), (2.0, 1.0, 0.0)))
    back = mrl_derivative_power(frac_primitive_power(p, 0.5, "x"), 0.5, "x")
    for (c1, x1, _), (c2, x2, _) in zip(p.terms, back.terms):
        assert c1 == pytest.approx(c2, rel=1e-14) and x1 == pytest.approx(x2)


def test_canonical_conversion_round_trip():
    o = FracOrders(0.5, 0.5)
    p = parse_expr("x^0.5 + 2*x*t^0.5")
    e = to_canonical(p, o)
    q = from_canonical(e, o)
    assert np.allclose([c for c, *_ in q.terms], [c for c, *_ in p.terms])


def test_not_commensurate():
    with pytest.raises(NotCommensurateError):
        to_canonical(parse_expr("x^0.3"), FracOrders(1.0, 0.5))


def test_from_canonical_rejects_transcendental():
    with pytest.raises(NotPowerSumError):
        from_canonical(E.log(E.X), FracOrders())


def test_expand_in_polynomial():
    e = parse_expr("(X + T)^2 / T")
    poly = expand_in(e, "X")
    assert sorted(poly) == [0.0, 1.0, 2.0]
    assert E.evaluate(poly[2.0], {"T": 2.0}) == pytest.approx(0.5)


def test_diff_canonical():
    e = parse_expr("T + log(cosh(X))")
    assert E.evaluate(diff_canonical(e, "X"), {"X": 0.3, "T": 1.0}) == pytest.approx(math.tanh(0.3))
    with pytest.raises(ValueError):
        diff_canonical(e, "x")


def test_family_primitives_order_one():
    prim = power_primitives(CoeffFamily(1.0, 0.0, 1.0), FracOrders())
    (c, px, pt), = prim.F_alpha.terms
    assert (c, px, pt) == (pytest.approx(1.0, rel=1e-14), 0.0, 1.0)


def test_rule_audit_exact_and_ratio():
    o = FracOrders(1.0, 0.5)
    rep = audit_jumarie_rules(o, default_samples(o))
    assert rep.ok
    for rule in ("iv", "v", "vi"):
        assert rep.by_rule(rule).holds
    assert canonical_ratio(0.5) == pytest.approx(math.pi / 2, rel=1e-14)


def test_product_rule_violation_value():
    u = GenPowerSum.monomial(1.0, 0.5, 0.0)
    want = abs(2 / math.sqrt(math.pi) - math.sqrt(math.pi))
    assert product_rule_violation(u, u, 0.5, 1.0) == pytest.approx(want, abs=1e-12)


def test_orders_validated():
    with pytest.raises(Exception):
        FracOrders(0.0, 1.0)
