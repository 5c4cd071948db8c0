"""Gamma and error functions in double precision."""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .errors import DomainError

# Lanczos approximation, g = 7, nine coefficients.
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _lanczos(z: float) -> float:
    # valid for z >= 0.5
    coeffs = LANCZOS_COEFFS
    z -= 1.0
    acc = coeffs[0]
    for i in range(1, len(coeffs)):
        acc += coeffs[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _SQRT_2PI * t ** (z + 0.5) * math.exp(-t) * acc


def _is_pole(z: float) -> bool:
    return z <= 0.0 and z == math.floor(z)


def gamma_any(z: float) -> float:
    """Gamma on the whole real line except the poles, via reflection."""
    z = float(z)
    if _is_pole(z):
        raise DomainError(f"gamma has a pole at {z}")
    if z < 0.5:
        return math.pi / (math.sin(math.pi * z) * _lanczos(1.0 - z))
    return _lanczos(z)


def gamma_eval(z: float) -> float:
    """Gamma function for ``z > 0``.

    >>> gamma_eval(5.0)
    24.000000000000004
    """
    z = float(z)
    if not z > 0.0:
        raise DomainError(f"gamma_eval needs a positive argument, got {z}")
    return gamma_any(z)


def rgamma(z: float) -> float:
    """Reciprocal gamma, equal to zero at the poles."""
    if _is_pole(float(z)):
        return 0.0
    return 1.0 / gamma_any(z)


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)``; zero when ``b`` sits on a pole."""
    return gamma_any(a) * rgamma(b)


def erf(z):
    """Error function, elementwise on arrays, absolute error below 1e-12."""
    if np.ndim(z) == 0:
        return float(_kernels.erf(np.array([z], dtype=float))[0])
    return _kernels.erf(z)


def d_const(order: float) -> float:
    """``Gamma(1+a)^2 / Gamma(1+2a)``; equals 1/2 at ``a = 1``."""
    return gamma_eval(1.0 + order) ** 2 / gamma_eval(1.0 + 2.0 * order)
