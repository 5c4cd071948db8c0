from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from fracburgers import numfrac
from fracburgers.errors import DomainError
from fracburgers.numfrac import QuadratureSpec


def test_rl_integral_of_identity():
    want = float(mpmath.gamma(2) / mpmath.gamma(2.5))
    assert numfrac.rl_integral_num(lambda t: t, 0.5, 1.0) == pytest.approx(want, abs=1e-9)


def test_rl_integral_against_mpmath_quadrature():
    f = lambda t: np.exp(-t)  # noqa: E731
    a, x = 0.4, 1.5
    want = mpmath.quad(lambda s: (x - s) ** (a - 1) * mpmath.exp(-s), [0, x]) / mpmath.gamma(a)
    assert numfrac.rl_integral_num(f, a, x) == pytest.approx(float(want), abs=1e-8)


def test_mrl_of_constant_vanishes():
    assert abs(numfrac.mrl_derivative_num(lambda t: 3.0 + 0 * t, 0.5, 1.0)) < 1e-12


def test_mrl_sqrt():
    got = numfrac.mrl_derivative_num(lambda t: np.sqrt(t), 0.5, 0.7)
    assert got == pytest.approx(math.gamma(1.5), abs=1e-9)


def test_mrl_any_second_order_range():
    got = numfrac.mrl_derivative_any(lambda t: t**2, 1.5, 1.0)
    assert got == pytest.approx(2.0 / math.gamma(1.5), rel=1e-7)


def test_mrl_twice_matches_power_rule():
    b = 0.5
    got = numfrac.mrl_twice(lambda y: y ** (2 * b), b, np.array([0.6, 1.4]))
    assert np.allclose(got, math.gamma(1 + 2 * b), atol=1e-8)


def test_order_one_is_classical():
    assert numfrac.mrl_twice(lambda y: y**3, 1.0, 2.0) == pytest.approx(12.0, rel=1e-8)


def test_domain_errors():
    with pytest.raises(DomainError):
        numfrac.rl_integral_num(lambda t: t, 0.5, 0.0)
    with pytest.raises(DomainError):
        numfrac.mrl_derivative_num(lambda t: t, 1.0, 1.0)
    with pytest.raises(DomainError):
        QuadratureSpec(nodes=8)


def test_refinement_converges():
    errs = []
    want = math.gamma(2.3) / math.gamma(1.8) * 1.0
    for n in (16, 32, 64):
        got = numfrac.mrl_derivative_num(lambda y: y**1.3, 0.5, 1.0, QuadratureSpec(nodes=n))
        errs.append(abs(got - want))
    assert errs[0] > errs[1] > errs[2]


def test_semigroup_of_integrals():
    f = lambda t: np.cos(t)  # noqa: E731
    x = 1.2
    inner = lambda y: numfrac.rl_integral_num(f, 0.3, np.maximum(y, 1e-300))  # noqa: E731
    two = numfrac.rl_integral_num(inner, 0.4, x)
    one = numfrac.rl_integral_num(f, 0.7, x)
    assert two == pytest.approx(one, abs=1e-8)
