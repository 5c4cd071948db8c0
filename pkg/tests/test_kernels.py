from __future__ import annotations

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from fracburgers import _kernels, specfun
from fracburgers.numfrac import graded_mesh

needs_numba = pytest.mark.skipif(_kernels.panel_weights_jit is None, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("gamma", [0.3, 0.5, 1.0])
def test_jit_and_numpy_weights_agree(gamma):
    s = graded_mesh(64, 2.0)
    assert np.allclose(_kernels.panel_weights_jit(s, gamma), _kernels.panel_weights_numpy(s, gamma),
                       rtol=0, atol=1e-15)


@needs_numba
def test_jit_and_numpy_erf_agree():
    z = np.linspace(-7, 7, 1001)
    assert np.max(np.abs(_kernels.erf_jit(z) - _kernels.erf_numpy(z))) < 1e-15


def test_weights_integrate_kernel_exactly():
    # sum of weights = int_0^1 (1-s)^(g-1) ds = 1/g
    s = graded_mesh(32, 2.0)
    assert _kernels.panel_weights(s, 0.4).sum() == pytest.approx(1 / 0.4, rel=1e-13)


def test_erf_against_math():
    z = np.linspace(-5, 5, 101)
    assert np.max(np.abs(specfun.erf(z) - np.array([math.erf(v) for v in z]))) < 1e-13


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, FRACBURGERS_NO_JIT="1")
    out = subprocess.run(
        [sys.executable, "-c", "from fracburgers import _kernels; print(_kernels.jit_active())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "False"


def test_gamma_reflection_and_poles():
    assert specfun.gamma_any(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-13)
    assert specfun.rgamma(-2.0) == 0.0
    assert specfun.d_const(1.0) == pytest.approx(0.5)
