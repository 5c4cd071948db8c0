"""Symbolic core: power sums, canonical expressions, parser and rule audit."""

from __future__ import annotations

from . import expr
from .convert import from_canonical, to_canonical
from .expr import Expr, T, X, diff, evaluate
from .family import CoeffFamily, FracOrders
from .parser import parse_expr, parse_tree
from .powersum import (
    GenPowerSum,
    frac_primitive_power,
    mrl_derivative_power,
    power_primitives,
)
from .rules import audit_jumarie_rules


def diff_canonical(e: Expr, var: str) -> Expr:
    """Exact derivative with respect to ``X`` or ``T``."""
    if var not in ("X", "T"):
        raise ValueError(f"canonical variable must be 'X' or 'T', got {var!r}")
    return diff(e, var)


__all__ = [
    "CoeffFamily",
    "Expr",
    "FracOrders",
    "GenPowerSum",
    "T",
    "X",
    "audit_jumarie_rules",
    "diff",
    "diff_canonical",
    "evaluate",
    "expr",
    "frac_primitive_power",
    "from_canonical",
    "mrl_derivative_power",
    "parse_expr",
    "parse_tree",
    "power_primitives",
    "to_canonical",
]
