"""Signal flow along the dielectric guide: port splitting and serial radiation.

A guided signal entering at a port is split between the two travel
directions, then walks a chain of radiating elements.  Element m peels
off a power fraction delta[m] of whatever reaches it and lets the rest
continue, so the end-to-end radiated fraction of element m is
xi[m] = delta[m] * prod_{k<m}(1 - delta[k]).  Phase accrues as
exp(-j * k_g * distance) between elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import EnergyConservationError, InfeasibleProfileError

_RATIO_TOL = 1e-12


@dataclass(frozen=True)
class SplitterSetting:
    """Power fractions leaving the two center ports in each direction.

    ``ff``/``fb``: fraction of the forward port's power sent forward /
    backward.  ``bf``/``bb``: fraction of the backward port's power sent
    forward / backward.  Each port's pair may sum to at most one.
    """

    ff: float = 0.5
    fb: float = 0.5
    bf: float = 0.5
    bb: float = 0.5

    def __post_init__(self) -> None:
        for name in ("ff", "fb", "bf", "bb"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise EnergyConservationError(
                    f"splitter ratio {name} must lie in [0, 1], got {value!r}")
        if self.ff + self.fb > 1.0 + _RATIO_TOL:
            raise EnergyConservationError(
                f"forward-port ratios exceed unity: ff + fb = {self.ff + self.fb!r}")
        if self.bf + self.bb > 1.0 + _RATIO_TOL:
            raise EnergyConservationError(
                f"backward-port ratios exceed unity: bf + bb = {self.bf + self.bb!r}")


def split_input(x_in: complex, beta_fwd: float, beta_bwd: float) -> tuple[complex, complex]:
    """Split one port signal into forward/backward amplitudes.

    Power conservation requires beta_fwd + beta_bwd <= 1; amplitudes scale
    with the square roots of the ratios and keep the input phase.
    """
    if not (math.isfinite(beta_fwd) and math.isfinite(beta_bwd)):
        raise EnergyConservationError("split ratios must be finite")
    if beta_fwd < 0.0 or beta_bwd < 0.0 or beta_fwd + beta_bwd > 1.0 + _RATIO_TOL:
        raise EnergyConservationError(
            f"split ratios must be nonnegative and sum to at most 1, "
            f"got {beta_fwd!r} + {beta_bwd!r}")
    return math.sqrt(beta_fwd) * x_in, math.sqrt(beta_bwd) * x_in


@dataclass(frozen=True)
class RadiationProfile:
    """Per-element coupling (delta) and end-to-end radiated fractions (xi)."""

    delta: np.ndarray
    xi: np.ndarray

    def __len__(self) -> int:
        return int(self.delta.shape[0])


def profile_from_delta(delta) -> RadiationProfile:
    """Build a profile from raw per-element coupling fractions."""
    delta = np.ascontiguousarray(delta, dtype=np.float64)
    if delta.ndim != 1 or delta.size == 0:
        raise InfeasibleProfileError("delta must be a non-empty 1-d sequence")
    if np.any(~np.isfinite(delta)) or np.any(delta < 0.0) or np.any(delta > 1.0):
        raise InfeasibleProfileError("coupling fractions must lie in [0, 1]")
    survive = np.cumprod(1.0 - delta)
    carry = np.concatenate(([1.0], survive[:-1]))
    return RadiationProfile(delta=delta, xi=delta * carry)


def uniform_radiation_profile(n: int, target_xi: float) -> RadiationProfile:
    """Couplings that give every element the same radiated fraction.

    Solving xi[m] = target for all m gives delta[m] = t / (1 - (m-1) t),
    which stays within [0, 1] only while n * t <= 1.
    """
    if n < 1:
        raise InfeasibleProfileError(f"element count must be >= 1, got {n}")
    if not (0.0 < target_xi <= 1.0):
        raise InfeasibleProfileError(
            f"target radiated fraction must lie in (0, 1], got {target_xi!r}")
    if n * target_xi > 1.0 + _RATIO_TOL:
        raise InfeasibleProfileError(
            f"cannot radiate fraction {target_xi!r} from each of {n} elements: "
            f"total exceeds the input power")
    remaining = 1.0
    delta = np.empty(n, dtype=np.float64)
    for m in range(n):
        delta[m] = min(target_xi / remaining, 1.0)
        remaining -= target_xi
    return profile_from_delta(delta)


@dataclass(frozen=True)
class PropagationStep:
    """Signal state at one chain element."""

    incident: complex
    radiated: complex
    through: complex
    distance_to_next: float


def chain_signals(x_start: complex, profile: RadiationProfile, spacings,
                  k_g: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Step-by-step chain walk; returns (incident, radiated, through) arrays.

    ``spacings[m]`` is the guide length crossed before element m; the
    first entry is the port-to-first-element distance.
    """
    spacings = np.ascontiguousarray(spacings, dtype=np.float64)
    if spacings.shape != profile.delta.shape:
        raise ValueError(
            f"need one spacing per element: {spacings.shape[0]} spacings "
            f"for {len(profile)} elements")
    if np.any(spacings < 0.0):
        raise ValueError("spacings must be nonnegative")
    if not (k_g > 0.0 and math.isfinite(k_g)):
        raise ValueError(f"guided wavenumber must be positive, got {k_g!r}")
    return _kernels.chain(complex(x_start), profile.delta, spacings, float(k_g))


def propagate_chain(x_start: complex, profile: RadiationProfile, spacings,
                    k_g: float) -> list[PropagationStep]:
    """Chain walk wrapped into per-element steps."""
    spacings = np.ascontiguousarray(spacings, dtype=np.float64)
    incident, radiated, through = chain_signals(x_start, profile, spacings, k_g)
    n = len(profile)
    return [
        PropagationStep(
            incident=complex(incident[m]),
            radiated=complex(radiated[m]),
            through=complex(through[m]),
            distance_to_next=float(spacings[m + 1]) if m + 1 < n else 0.0,
        )
        for m in range(n)
    ]


def radiated_closed_form(x_in: complex, beta: float, profile: RadiationProfile,
                         cumulative_distances, k_g: float) -> np.ndarray:
    """Radiated amplitudes without walking the chain.

    Element m radiates sqrt(beta * xi[m]) * exp(-j k_g D[m]) * x_in where
    D[m] is the total guide distance from the port.  Must agree with
    chain_signals applied to the split signal; the two routes are kept
    separate on purpose.
    """
    if not (0.0 <= beta <= 1.0):
        raise EnergyConservationError(f"branch power ratio must lie in [0, 1], got {beta!r}")
    distances = np.ascontiguousarray(cumulative_distances, dtype=np.float64)
    if distances.shape != profile.xi.shape:
        raise ValueError("need one cumulative distance per element")
    return np.sqrt(beta * profile.xi) * np.exp(-1j * k_g * distances) * x_in
