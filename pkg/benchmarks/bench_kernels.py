"""Compare the numba kernels with their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The library picks the numba path unless FRACBURGERS_NO_JIT=1 is set; this
script calls both paths directly so one run shows the two side by side,
plus an end-to-end timing of an MRL derivative under each setting.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from fracburgers import _kernels
from fracburgers.numfrac import graded_mesh


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(no_jit: bool, repeat: int) -> float:
    # a fresh interpreter so the env flag is read at import time
    env = dict(os.environ, FRACBURGERS_NO_JIT="1" if no_jit else "0")
    code = (
        "import timeit, numpy as np\n"
        "from fracburgers import numfrac\n"
        "xs = np.linspace(0.5, 2, 16)\n"
        "f = lambda y: np.sin(y) + y**1.5\n"
        "numfrac.mrl_twice(f, 0.5, xs)\n"
        f"print(min(timeit.repeat(lambda: numfrac.mrl_twice(f, 0.5, xs), number=1, repeat={repeat})))\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if _kernels.panel_weights_jit is None:
        print("numba is not installed; only the numpy path is available")
        return 1

    s = graded_mesh(512, 2.0)
    z = np.linspace(-6, 6, 200_000)
    # warm up (compilation or cache load)
    _kernels.panel_weights_jit(s, 0.5)
    _kernels.erf_jit(z[:10])

    w_np, w_jit = _kernels.panel_weights_numpy(s, 0.5), _kernels.panel_weights_jit(s, 0.5)
    e_np, e_jit = _kernels.erf_numpy(z), _kernels.erf_jit(z)
    print(f"agreement: weights {np.max(np.abs(w_np - w_jit)):.2e}, erf {np.max(np.abs(e_np - e_jit)):.2e}")

    rows = [
        ("panel_weights n=512", lambda: _kernels.panel_weights_numpy(s, 0.5), lambda: _kernels.panel_weights_jit(s, 0.5)),
        ("erf n=200000", lambda: _kernels.erf_numpy(z), lambda: _kernels.erf_jit(z)),
    ]
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, f_np, f_jit in rows:
        a, b = best(f_np, args.repeat) * 1e3, best(f_jit, args.repeat) * 1e3
        print(f"{name:<22}{a:>12.3f}{b:>12.3f}{a / b:>10.1f}")
    a, b = end_to_end(True, args.repeat) * 1e3, end_to_end(False, args.repeat) * 1e3
    print(f"{'mrl_twice 16 pts':<22}{a:>12.3f}{b:>12.3f}{a / b:>10.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
