"""Fractional orders and power-law coefficient families."""

from __future__ import annotations

from dataclasses import dataclass

from .. import specfun
from ..errors import DomainError


@dataclass(frozen=True)
class FracOrders:
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = float(getattr(self, name))
            if not 0.0 < v <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {v}")
            object.__setattr__(self, name, v)

    @property
    def d_alpha(self) -> float:
        return specfun.d_const(self.alpha)

    @property
    def d_beta(self) -> float:
        return specfun.d_const(self.beta)

    @property
    def gamma_alpha(self) -> float:
        return specfun.gamma_eval(1.0 + self.alpha)

    @property
    def gamma_beta(self) -> float:
        return specfun.gamma_eval(1.0 + self.beta)


@dataclass(frozen=True)
class CoeffFamily:
    """``f(t) = cf * t**nu`` and ``g(t) = k * f(t)``."""

    cf: float = 1.0
    nu: float = 0.0
    k: float = 1.0

    def __post_init__(self):
        if not self.cf > 0.0:
            raise DomainError(f"cf must be positive, got {self.cf}")
        if not self.nu >= 0.0:
            raise DomainError(f"nu must be nonnegative, got {self.nu}")
        if self.k == 0.0:
            raise DomainError("k must be nonzero")
        object.__setattr__(self, "cf", float(self.cf))
        object.__setattr__(self, "nu", float(self.nu))
        object.__setattr__(self, "k", float(self.k))

    def f(self, t):
        return self.cf * t**self.nu

    def g(self, t):
        return self.k * self.cf * t**self.nu

    # -- canonical (T) representation: f = cf_T * T**mu
    def mu(self, orders: FracOrders) -> float:
        return self.nu / orders.alpha

    def cf_T(self, orders: FracOrders) -> float:
        return self.cf * orders.gamma_alpha ** self.mu(orders)
