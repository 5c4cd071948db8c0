"""Symbolic-numeric toolkit for the space-time fractional Burgers equation

    u_t^(alpha) = f(t) u_x^(2 beta) + g(t) (u_x^(beta))^2

with modified Riemann-Liouville derivatives.
"""

from __future__ import annotations

from .fracpoly import CoeffFamily, FracOrders, GenPowerSum, parse_expr
from .specfun import gamma_eval

__version__ = "0.1.0"

__all__ = ["CoeffFamily", "FracOrders", "GenPowerSum", "gamma_eval", "parse_expr"]
