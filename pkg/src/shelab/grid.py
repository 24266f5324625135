"""Space-time discretization of the truncated periodic domain."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

#: Margin (in units of sqrt(T)) between an averaging radius and the domain
#: edge; Gaussian kernel mass beyond 6 standard deviations is < 1e-8, so the
#: torus wrap-around perturbs statistics on [-R, R] negligibly.
SAFE_MARGIN_SIGMAS = 6.0


@dataclass(frozen=True)
class GridSpec:
    """Periodic grid on [-L, L) with ``nx`` cells and ``nt`` steps to time T.

    Cell centers sit at x_i = -L + (i + 1/2) dx.  The explicit diffusion step
    (coefficient 1/2) is stable iff dt/dx^2 <= 1, enforced at construction.
    Checkpoints must lie in (0, T] and align exactly with time steps.
    """

    L: float
    nx: int
    T: float
    nt: int
    checkpoints: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.L <= 0.0 or self.T <= 0.0:
            raise ConfigError("L and T must be positive")
        if self.nx < 4 or self.nx % 2 != 0:
            raise ConfigError("nx must be an even integer >= 4")
        if self.nt < 1:
            raise ConfigError("nt must be >= 1")
        if self.dt / self.dx ** 2 > 1.0 + 1e-12:
            raise ConfigError(
                f"CFL violation: dt/dx^2 = {self.dt / self.dx ** 2:.4g} exceeds 1")
        cps = tuple(float(c) for c in self.checkpoints)
        if list(cps) != sorted(set(cps)):
            raise ConfigError("checkpoints must be strictly increasing")
        steps = []
        for c in cps:
            if not (0.0 < c <= self.T * (1.0 + 1e-12)):
                raise ConfigError(f"checkpoint {c} outside (0, T]")
            k = round(c / self.dt)
            if abs(k * self.dt - c) > 1e-9 * max(c, self.dt):
                raise ConfigError(f"checkpoint {c} does not align with the time step")
            steps.append(int(k))
        if len(set(steps)) != len(steps):
            raise ConfigError("two checkpoints map to the same time step")
        object.__setattr__(self, "checkpoints", cps)
        object.__setattr__(self, "_checkpoint_steps", tuple(steps))

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.nx

    @property
    def dt(self) -> float:
        return self.T / self.nt

    @property
    def checkpoint_steps(self) -> tuple[int, ...]:
        return self._checkpoint_steps

    def cell_centers(self) -> np.ndarray:
        return -self.L + (np.arange(self.nx) + 0.5) * self.dx

    def max_safe_radius(self) -> float:
        return self.L - SAFE_MARGIN_SIGMAS * math.sqrt(self.T)

    def require_safe_radius(self, R: float) -> None:
        """Reject averaging radii whose window approaches the domain edge."""
        if R <= 0.0:
            raise ConfigError("averaging radius must be positive")
        if R > self.max_safe_radius() + 1e-12:
            raise ConfigError(
                f"radius {R} exceeds safe region {self.max_safe_radius():.4g} "
                f"(need L >= R + {SAFE_MARGIN_SIGMAS}*sqrt(T))")

    def window_mask(self, R: float) -> np.ndarray:
        """Boolean mask of cells whose centers lie in [-R, R]."""
        self.require_safe_radius(R)
        x = self.cell_centers()
        return np.abs(x) <= R + 1e-12
