"""Drift/diffusion coefficient pairs with declared regularity bounds."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, DomainError

# Kernel dispatch tags for the jitted steppers; CUSTOM pairs take the
# (slower) generic path that calls the Python callables each step.
KIND_CUSTOM = -1
KIND_ADDITIVE = 0
KIND_LINEAR = 1
KIND_SMOOTH = 2


@dataclass(frozen=True)
class CoefficientPair:
    """Drift ``b`` and diffusion ``sigma`` with bounds on their derivatives.

    ``lipschitz_b``/``lipschitz_sigma`` bound |b'| and |sigma'|;
    ``second_b``/``second_sigma`` bound |b''| and |sigma''|.  ``exact_mean``,
    when present, maps t to the exact ensemble mean of the solution started
    from the constant initial condition 1 (available for the additive and
    linear families).
    """

    name: str
    b: Callable
    sigma: Callable
    db: Callable
    dsigma: Callable
    d2b: Callable
    d2sigma: Callable
    lipschitz_b: float
    lipschitz_sigma: float
    second_b: float
    second_sigma: float
    kind: int = KIND_CUSTOM
    param: float = 0.0
    exact_mean: Optional[Callable] = None

    @property
    def is_additive(self) -> bool:
        return self.kind == KIND_ADDITIVE

    def spot_check_bounds(self, lo: float = -8.0, hi: float = 8.0, n: int = 2001) -> None:
        """Verify the declared derivative bounds on a sampled range."""
        u = np.linspace(lo, hi, n)
        pairs = [
            (self.db, self.lipschitz_b, "|b'|"),
            (self.dsigma, self.lipschitz_sigma, "|sigma'|"),
            (self.d2b, self.second_b, "|b''|"),
            (self.d2sigma, self.second_sigma, "|sigma''|"),
        ]
        for fn, bound, label in pairs:
            worst = float(np.max(np.abs(np.asarray(fn(u), dtype=float))))
            if worst > bound * (1.0 + 1e-12) + 1e-300:
                raise DomainError(f"declared bound violated: {label} reaches {worst} > {bound}")


def _const(c):
    return lambda u: np.full_like(np.asarray(u, dtype=float), c)


def additive() -> CoefficientPair:
    """b = 0, sigma = 1: the exactly Gaussian case."""
    return CoefficientPair(
        name="additive",
        b=_const(0.0), sigma=_const(1.0),
        db=_const(0.0), dsigma=_const(0.0),
        d2b=_const(0.0), d2sigma=_const(0.0),
        lipschitz_b=0.0, lipschitz_sigma=0.0,
        second_b=0.0, second_sigma=0.0,
        kind=KIND_ADDITIVE,
        exact_mean=lambda t: 1.0,
    )


def linear(lam: float = 1.0) -> CoefficientPair:
    """b(u) = lam * u, sigma(u) = u (multiplicative noise with linear drift)."""
    return CoefficientPair(
        name="linear",
        b=lambda u: lam * np.asarray(u, dtype=float),
        sigma=lambda u: np.asarray(u, dtype=float),
        db=_const(lam), dsigma=_const(1.0),
        d2b=_const(0.0), d2sigma=_const(0.0),
        lipschitz_b=abs(lam), lipschitz_sigma=1.0,
        second_b=0.0, second_sigma=0.0,
        kind=KIND_LINEAR, param=lam,
        exact_mean=lambda t: float(np.exp(lam * t)),
    )


def smooth_bounded() -> CoefficientPair:
    """b(u) = sin(u), sigma(u) = 1 + cos(u)/2: C^2 with all bounds explicit."""
    return CoefficientPair(
        name="smooth_bounded",
        b=np.sin,
        sigma=lambda u: 1.0 + 0.5 * np.cos(u),
        db=np.cos,
        dsigma=lambda u: -0.5 * np.sin(u),
        d2b=lambda u: -np.sin(u),
        d2sigma=lambda u: -0.5 * np.cos(u),
        lipschitz_b=1.0, lipschitz_sigma=0.5,
        second_b=1.0, second_sigma=0.5,
        kind=KIND_SMOOTH,
    )


def zero_noise(decay: float = 0.0) -> CoefficientPair:
    """sigma = 0 with b(u) = -decay * u; deterministic reduction for tests."""
    return CoefficientPair(
        name="zero_noise",
        b=lambda u: -decay * np.asarray(u, dtype=float),
        sigma=_const(0.0),
        db=_const(-decay), dsigma=_const(0.0),
        d2b=_const(0.0), d2sigma=_const(0.0),
        lipschitz_b=abs(decay), lipschitz_sigma=0.0,
        second_b=0.0, second_sigma=0.0,
        kind=KIND_CUSTOM,
        exact_mean=lambda t: float(np.exp(-decay * t)),
    )


_FAMILIES = {
    "additive": additive,
    "linear": linear,
    "smooth_bounded": smooth_bounded,
    "zero_noise": zero_noise,
}


def get_coefficients(name: str, **params) -> CoefficientPair:
    try:
        factory = _FAMILIES[name]
    except KeyError:
        raise ConfigError(f"unknown coefficient family {name!r}; "
                          f"choose from {sorted(_FAMILIES)}") from None
    return factory(**params)
