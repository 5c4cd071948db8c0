"""Hot numeric loops, compiled with numba when available.

Every kernel exists twice: a ``@njit`` version and a pure-numpy version with
identical semantics. Set ``FRACBURGERS_NO_JIT=1`` to force the numpy path
(useful for debugging and for environments without numba).
"""

from __future__ import annotations

import math
import os

import numpy as np

ERF_SPLIT = 3.0
_CF_DEPTH = 48
_SERIES_MAX_TERMS = 200
_SMALL_RATIO = 0.25
_RATIO_TERMS = 40
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def _want_jit() -> bool:
    return os.environ.get("FRACBURGERS_NO_JIT", "").strip().lower() not in {"1", "true", "yes"}


try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is optional
    njit = None


# ---------------------------------------------------------------- numpy path


def panel_weights_numpy(s: np.ndarray, gamma: float) -> np.ndarray:
    """Product-integration weights for ``int_0^1 (1-s)^(gamma-1) phi(s) ds``.

    ``phi`` is replaced by its piecewise-linear interpolant on the mesh ``s``
    (increasing, ``s[0] = 0``, ``s[-1] = 1``); the kernel is integrated exactly
    on every panel.
    """
    d0 = 1.0 - s[:-1]
    d1 = 1.0 - s[1:]
    h = d0 - d1
    g = gamma

    # M0 = int_panel v^(g-1) dv, written to avoid cancellation when d1 >> h
    safe_d1 = np.where(d1 > 0.0, d1, 1.0)
    rho = h / safe_d1
    m0_far = safe_d1**g * np.expm1(g * np.log1p(rho)) / g
    m0 = np.where(d1 > 0.0, m0_far, d0**g / g)

    # left weight: int_panel v^(g-1) (v - d1)/h dv
    direct = ((d0 ** (g + 1) - d1 ** (g + 1)) / (g + 1) - d1 * (d0**g - d1**g) / g) / h
    series = np.zeros_like(rho)
    coef = 1.0
    for n in range(2, _RATIO_TERMS + 2):
        # coefficient (g-1)(g-2)...(g-n+2)(n-1)/n!
        if n > 2:
            coef *= (g - n + 2) / n
        else:
            coef = 1.0 / 2.0
        series = series + coef * (n - 1) * rho**n
    series = series * safe_d1 ** (g + 1) / h
    use_series = (d1 > 0.0) & (rho < _SMALL_RATIO)
    wl = np.where(use_series, series, direct)
    wl = np.where(d1 > 0.0, wl, d0**g / (g + 1))
    wr = m0 - wl

    w = np.zeros(s.shape[0])
    w[:-1] += wl
    w[1:] += wr
    return w


def erf_numpy(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    out = np.empty_like(az)

    small = az < ERF_SPLIT
    zs = az[small]
    term = zs.copy()
    total = zs.copy()
    z2 = 2.0 * zs * zs
    for n in range(1, _SERIES_MAX_TERMS):
        term = term * z2 / (2 * n + 1)
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    out[small] = 2.0 * _INV_SQRT_PI * np.exp(-zs * zs) * total

    zl = az[~small]
    f = zl.copy()
    for k in range(_CF_DEPTH, 0, -1):
        f = zl + (0.5 * k) / f
    out[~small] = 1.0 - np.exp(-zl * zl) * _INV_SQRT_PI / f
    return np.copysign(out, z)


# ---------------------------------------------------------------- numba path

if njit is not None:

    @njit(cache=True)
    def panel_weights_jit(s, gamma):
        n = s.shape[0]
        w = np.zeros(n)
        g = gamma
        for j in range(n - 1):
            d0 = 1.0 - s[j]
            d1 = 1.0 - s[j + 1]
            h = d0 - d1
            if d1 <= 0.0:
                m0 = d0**g / g
                wl = d0**g / (g + 1.0)
            else:
                rho = h / d1
                m0 = d1**g * math.expm1(g * math.log1p(rho)) / g
                if rho < _SMALL_RATIO:
                    acc = 0.0
                    coef = 0.5
                    p = rho * rho
                    for m in range(2, _RATIO_TERMS + 2):
                        if m > 2:
                            coef *= (g - m + 2) / m
                        acc += coef * (m - 1) * p
                        p *= rho
                    wl = acc * d1 ** (g + 1.0) / h
                else:
                    wl = ((d0 ** (g + 1.0) - d1 ** (g + 1.0)) / (g + 1.0) - d1 * (d0**g - d1**g) / g) / h
            w[j] += wl
            w[j + 1] += m0 - wl
        return w

    @njit(cache=True)
    def erf_jit(z):
        flat = z.ravel()
        out = np.empty(flat.shape[0])
        for i in range(flat.shape[0]):
            x = flat[i]
            a = abs(x)
            if a < ERF_SPLIT:
                term = a
                total = a
                z2 = 2.0 * a * a
                for n in range(1, _SERIES_MAX_TERMS):
                    term *= z2 / (2 * n + 1)
                    total += term
                    if term <= 1e-17 * total:
                        break
                v = 2.0 * _INV_SQRT_PI * math.exp(-a * a) * total
            else:
                f = a
                for k in range(_CF_DEPTH, 0, -1):
                    f = a + (0.5 * k) / f
                v = 1.0 - math.exp(-a * a) * _INV_SQRT_PI / f
            out[i] = v if x >= 0.0 else -v
        return out.reshape(z.shape)

else:  # pragma: no cover
    panel_weights_jit = None
    erf_jit = None


def jit_active() -> bool:
    return njit is not None and _want_jit()


def panel_weights(s: np.ndarray, gamma: float) -> np.ndarray:
    s = np.ascontiguousarray(s, dtype=float)
    if jit_active():
        return panel_weights_jit(s, float(gamma))
    return panel_weights_numpy(s, float(gamma))


def erf(z) -> np.ndarray:
    arr = np.ascontiguousarray(z, dtype=float)
    if jit_active():
        return erf_jit(arr)
    return erf_numpy(arr)
