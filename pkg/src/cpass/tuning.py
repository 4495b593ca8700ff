"""Per-element position tuning that phase-aligns a group toward one user.

Each element may slide by at most ``delta_max_m`` around its nominal slot.
The combined phase seen at the user is guide accumulation plus the air
path, theta(x) = k_g * (sigma * x) + k0 * sqrt(y^2 + (x + shift)^2); the
tuner moves every element so its theta lands on the same value, modulo
2*pi, as the group's first untuned element.  sigma is -1 for groups whose
guide feed runs opposite to increasing x (the end-fed backward group),
and shift is the axial offset between the group's coordinate origin and
the user's (the inter-port gap for cross-group alignment).

A slide window shorter than one phase wrap cannot always reach the
target; such elements are parked at the best endpoint and their residual
reports the remaining (wrapped) phase error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import SystemConfig, WaveConstants
from .errors import ConfigError

_SIDES = ("f", "b")
_TWO_PI = 2.0 * np.pi


def wrap_phase(v):
    """Wrap radians into (-pi, pi]."""
    arr = np.asarray(v, dtype=np.float64)
    return arr - _TWO_PI * np.ceil(arr / _TWO_PI - 0.5)


def total_phase(x, y: float, wave: WaveConstants,
                sigma: float = 1.0, shift: float = 0.0) -> np.ndarray:
    """Guide-plus-air phase at axial position(s) x for a user at height y."""
    arr = np.asarray(x, dtype=np.float64)
    return wave.k_g * (sigma * arr) + wave.k0 * np.sqrt(y * y + (arr + shift) ** 2)


@dataclass(frozen=True)
class AlignmentResult:
    """Offsets within the slide budget plus per-element wrapped phase error."""

    offsets: np.ndarray
    residuals: np.ndarray
    target_phase: float

    @property
    def worst_residual(self) -> float:
        return float(np.max(np.abs(self.residuals))) if self.residuals.size else 0.0

    def aligned(self, tol: float = 1e-6) -> np.ndarray:
        return np.abs(self.residuals) <= tol


def _align_group(n: int, l_pa_m: float, y: float, shift: float, sigma: float,
                 k_g: float, k0: float, delta_max: float) -> AlignmentResult:
    if n < 1:
        raise ConfigError(f"need at least one element to align, got {n}")
    x_nom = l_pa_m * np.arange(1, n + 1, dtype=np.float64)
    target = float(_kernels.phase_total(l_pa_m, y, shift, sigma, k_g, k0))
    offsets, residuals = _kernels.align_offsets(x_nom, y, shift, sigma, k_g, k0,
                                                delta_max, target)
    return AlignmentResult(offsets=np.asarray(offsets),
                           residuals=np.asarray(residuals),
                           target_phase=target)


def align_side(cfg: SystemConfig, side: str = "f", user: str | None = None,
               delta_max: float | None = None) -> AlignmentResult:
    """Align one center-fed group toward a user (its own user by default)."""
    if side not in _SIDES:
        raise ConfigError(f"side must be one of {_SIDES}, got {side!r}")
    target_user = side if user is None else user
    if target_user not in _SIDES:
        raise ConfigError(f"user must be one of {_SIDES}, got {user!r}")
    y = cfg.y_f_m if target_user == "f" else cfg.y_b_m
    shift = 0.0 if target_user == side else cfg.l_in_m
    budget = cfg.delta_max_m if delta_max is None else float(delta_max)
    return _align_group(cfg.n_per_side, cfg.l_pa_m, y, shift, 1.0,
                        cfg.wave.k_g, cfg.wave.k0, budget)


def align_end_fed(cfg: SystemConfig,
                  delta_max: float | None = None) -> tuple[AlignmentResult, AlignmentResult]:
    """Align both end-fed groups, each toward its own user.

    The backward group's guide feed runs against increasing x, so its
    guide phase slope flips sign; constants common to a whole group drop
    out of the alignment condition and are omitted.
    """
    budget = cfg.delta_max_m if delta_max is None else float(delta_max)
    fwd = _align_group(cfg.n_per_side, cfg.l_pa_m, cfg.y_f_m, 0.0, 1.0,
                       cfg.wave.k_g, cfg.wave.k0, budget)
    bwd = _align_group(cfg.n_per_side, cfg.l_pa_m, cfg.y_b_m, 0.0, -1.0,
                       cfg.wave.k_g, cfg.wave.k0, budget)
    return fwd, bwd
