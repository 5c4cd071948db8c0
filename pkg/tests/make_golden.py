"""Regenerate tests/golden/*.out from tests/cli_cases.py.

    python3 tests/make_golden.py
"""

from __future__ import annotations

import pathlib
import subprocess
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent))
from cli_cases import CASES  # noqa: E402

HERE = pathlib.Path(__file__).parent / "golden"


def run(argv):
    return subprocess.run([sys.executable, "-m", "fracburgers.cli", *argv], capture_output=True, check=False)


if __name__ == "__main__":
    HERE.mkdir(exist_ok=True)
    for name, argv in CASES.items():
        out = run(argv)
        (HERE / f"{name}.out").write_bytes(out.stdout)
        print(f"{name}: exit {out.returncode}, {len(out.stdout)} bytes")
