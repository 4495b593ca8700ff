"""Element layout, guide/air geometry, and the effective 2x2 link matrix.

Two feed architectures share one physical element grid:

* ``center``: two ports sit between the element groups, separated by the
  inter-port gap ``l_in_m``.  Each port splits its input across both
  groups (per SplitterSetting) and each group is an independent serial
  chain fed from its own end.
* ``end``: both ports sit behind the backward group, one gap ``l_in_m``
  apart along the feed guide, and every signal traverses the full 2N
  chain.  The two port rows then differ only by a guide phase, so the
  matrix is rank one by construction.

The matrix is indexed ``h[port, user]`` with port/user order (F, B).
Branch coefficients carry the per-element radiated amplitude, the guide
phase from the group's feed reference, and the spherical air term
exp(-j k0 r) / r.  The inter-port gap phase is applied exactly once, in
the 2x2 combination, never inside a branch sum.

The end-fed feed reference sits one nominal element spacing behind the
outermost backward element, so every guide path stays positive even
after tuning offsets; the common extra spacing is a global phase and
drops out of every gain and capacity figure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .config import SystemConfig
from .errors import ArchitectureMismatchError, ConfigError
from .waveguide import RadiationProfile, SplitterSetting, uniform_radiation_profile

_OFFSET_TOL = 1e-12
_SIDES = ("f", "b")


def nominal_positions(n: int, l_pa_m: float) -> np.ndarray:
    """Untuned element grid: multiples of the element spacing, port side first."""
    return l_pa_m * np.arange(1, n + 1, dtype=np.float64)


@dataclass(frozen=True)
class PinchLayout:
    """Element positions (own-port axial coordinate) plus radiation profiles.

    ``profile_f``/``profile_b`` describe each group as its own serial
    chain (center architecture); the end architecture instead carries one
    ``chain_profile`` over all 2N elements in traversal order: backward
    group outermost-last, then the forward group outward.
    """

    positions_f: np.ndarray
    positions_b: np.ndarray
    offsets_f: np.ndarray
    offsets_b: np.ndarray
    profile_f: RadiationProfile | None
    profile_b: RadiationProfile | None
    chain_profile: RadiationProfile | None

    @property
    def n_per_side(self) -> int:
        return self.positions_f.shape[0]

    def side_amplitudes(self, side: str) -> np.ndarray:
        """Per-element radiated amplitude scale sqrt(xi), in element order 1..N."""
        if self.chain_profile is None:
            profile = self.profile_f if side == "f" else self.profile_b
            return np.sqrt(profile.xi)
        n = self.n_per_side
        xi = self.chain_profile.xi
        # chain slot m=1..N holds backward element N+1-m; slots N+1..2N
        # hold forward elements 1..N
        return np.sqrt(xi[n:]) if side == "f" else np.sqrt(xi[:n][::-1])


def _resolve_offsets(name: str, offsets, n: int, delta_max: float) -> np.ndarray:
    if offsets is None:
        return np.zeros(n, dtype=np.float64)
    arr = np.asarray(offsets, dtype=np.float64)
    if arr.shape != (n,):
        raise ConfigError(f"{name} must have shape ({n},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{name} must be finite")
    if np.any(np.abs(arr) > delta_max + _OFFSET_TOL):
        worst = float(np.max(np.abs(arr)))
        raise ConfigError(f"{name} exceeds the offset budget {delta_max!r} (worst {worst!r})")
    return arr


def build_layout(cfg: SystemConfig, offsets_f=None, offsets_b=None) -> PinchLayout:
    """Place both element groups and attach the architecture's radiation profile."""
    n = cfg.n_per_side
    off_f = _resolve_offsets("offsets_f", offsets_f, n, cfg.delta_max_m)
    off_b = _resolve_offsets("offsets_b", offsets_b, n, cfg.delta_max_m)
    pos_f = nominal_positions(n, cfg.l_pa_m) + off_f
    pos_b = nominal_positions(n, cfg.l_pa_m) + off_b
    for name, pos in (("positions_f", pos_f), ("positions_b", pos_b)):
        if np.any(pos <= 0.0) or np.any(np.diff(pos) <= 0.0):
            raise ConfigError(f"{name} must be strictly increasing and positive")
    if cfg.architecture == "center":
        side = uniform_radiation_profile(n, 1.0 / n)
        return PinchLayout(pos_f, pos_b, off_f, off_b, side, side, None)
    chain = uniform_radiation_profile(2 * n, 1.0 / (2 * n))
    return PinchLayout(pos_f, pos_b, off_f, off_b, None, None, chain)


@dataclass(frozen=True)
class GeometryView:
    """Guide path lengths per element and air distances to each user.

    ``wg_f``/``wg_b`` run from each group's feed reference to its
    elements; ``r_xy`` is the air distance from group x's elements to
    user y, always in element order 1..N.
    """

    wg_f: np.ndarray
    wg_b: np.ndarray
    r_ff: np.ndarray
    r_fb: np.ndarray
    r_bf: np.ndarray
    r_bb: np.ndarray


def user_distances(cfg: SystemConfig, layout: PinchLayout) -> GeometryView:
    """Geometry shared by both architectures; only the guide paths differ."""
    x_f, x_b = layout.positions_f, layout.positions_b
    r_ff = np.sqrt(cfg.y_f_m ** 2 + x_f ** 2)
    r_fb = np.sqrt(cfg.y_b_m ** 2 + (cfg.l_in_m + x_f) ** 2)
    r_bb = np.sqrt(cfg.y_b_m ** 2 + x_b ** 2)
    r_bf = np.sqrt(cfg.y_f_m ** 2 + (cfg.l_in_m + x_b) ** 2)
    if cfg.architecture == "center":
        wg_f, wg_b = x_f.copy(), x_b.copy()
    else:
        # feed sits one nominal spacing behind the outermost backward element
        depth = (cfg.n_per_side + 1) * cfg.l_pa_m
        wg_b = depth - x_b
        wg_f = depth + cfg.l_in_m + x_f
    if np.any(wg_f <= 0.0) or np.any(wg_b <= 0.0):
        raise ConfigError("guide path lengths must stay positive")
    return GeometryView(wg_f=wg_f, wg_b=wg_b, r_ff=r_ff, r_fb=r_fb, r_bf=r_bf, r_bb=r_bb)


@dataclass(frozen=True)
class BranchCoefficients:
    """Group-to-user sums a_xy (group x, user y), gap phase excluded."""

    a_ff: complex
    a_fb: complex
    a_bf: complex
    a_bb: complex


def path_sum(wg: np.ndarray, r: np.ndarray, amplitude: np.ndarray,
             eta: float, k_g: float, k0: float) -> complex:
    """eta * sum_m amp_m exp(-j(k_g wg_m + k0 r_m)) / r_m."""
    return _kernels.radiated_sum(
        np.ascontiguousarray(wg, dtype=np.float64),
        np.ascontiguousarray(r, dtype=np.float64),
        np.ascontiguousarray(amplitude, dtype=np.float64),
        float(eta), float(k_g), float(k0))


def branch_coefficient(cfg: SystemConfig, layout: PinchLayout,
                       from_side: str, to_user: str,
                       geometry: GeometryView | None = None) -> complex:
    """One group's summed contribution at one user, under the config's
    architecture (guide paths and element weights included)."""
    if from_side not in _SIDES or to_user not in _SIDES:
        raise ConfigError(f"sides must be in {_SIDES}, got {(from_side, to_user)!r}")
    geo = geometry if geometry is not None else user_distances(cfg, layout)
    wg = geo.wg_f if from_side == "f" else geo.wg_b
    r = getattr(geo, f"r_{from_side}{to_user}")
    amp = layout.side_amplitudes(from_side)
    wave = cfg.wave
    return path_sum(wg, r, amp, wave.eta, wave.k_g, wave.k0)


def branch_coefficients(cfg: SystemConfig, layout: PinchLayout,
                        geometry: GeometryView | None = None) -> BranchCoefficients:
    geo = geometry if geometry is not None else user_distances(cfg, layout)
    return BranchCoefficients(
        a_ff=branch_coefficient(cfg, layout, "f", "f", geo),
        a_fb=branch_coefficient(cfg, layout, "f", "b", geo),
        a_bf=branch_coefficient(cfg, layout, "b", "f", geo),
        a_bb=branch_coefficient(cfg, layout, "b", "b", geo),
    )


@dataclass(frozen=True)
class EffectiveChannel:
    """2x2 complex matrix h[port, user] plus the pieces it was built from."""

    h: np.ndarray
    architecture: str
    layout: PinchLayout
    geometry: GeometryView
    branches: BranchCoefficients

    @property
    def matrix(self) -> np.ndarray:
        return self.h


def gap_phase(cfg: SystemConfig) -> complex:
    """Guide phase across the inter-port gap."""
    return complex(np.exp(-1j * cfg.wave.k_g * cfg.l_in_m))


def effective_channel_center(cfg: SystemConfig, layout: PinchLayout | None = None,
                             beta: SplitterSetting | None = None) -> EffectiveChannel:
    if cfg.architecture != "center":
        raise ArchitectureMismatchError(f"config selects architecture {cfg.architecture!r}")
    lay = layout if layout is not None else build_layout(cfg)
    geo = user_distances(cfg, lay)
    br = branch_coefficients(cfg, lay, geo)
    e = gap_phase(cfg)
    b = beta if beta is not None else cfg.beta
    s_ff, s_fb = math.sqrt(b.ff), math.sqrt(b.fb)
    s_bf, s_bb = math.sqrt(b.bf), math.sqrt(b.bb)
    h = np.array([
        [s_ff * br.a_ff + s_fb * e * br.a_bf, s_ff * br.a_fb + s_fb * e * br.a_bb],
        [s_bf * e * br.a_ff + s_bb * br.a_bf, s_bf * e * br.a_fb + s_bb * br.a_bb],
    ], dtype=np.complex128)
    return EffectiveChannel(h=h, architecture="center", layout=lay, geometry=geo, branches=br)


def effective_channel_end(cfg: SystemConfig, layout: PinchLayout | None = None) -> EffectiveChannel:
    """Both ports drive the one 2N chain; the far port row is the near row
    times the gap phase, so the matrix is rank one."""
    if cfg.architecture != "end":
        raise ArchitectureMismatchError(f"config selects architecture {cfg.architecture!r}")
    lay = layout if layout is not None else build_layout(cfg)
    geo = user_distances(cfg, lay)
    br = branch_coefficients(cfg, lay, geo)
    h_f = br.a_ff + br.a_bf
    h_b = br.a_fb + br.a_bb
    e = gap_phase(cfg)
    h = np.array([[h_f, h_b], [e * h_f, e * h_b]], dtype=np.complex128)
    return EffectiveChannel(h=h, architecture="end", layout=lay, geometry=geo, branches=br)


def determinant_factors(cfg: SystemConfig, channel: EffectiveChannel) -> tuple[complex, complex]:
    """det h as (group-sum factor, splitter factor); their product equals det h.

    Only the center-fed matrix factorizes this way.
    """
    if channel.architecture != "center":
        raise ArchitectureMismatchError("determinant factorization needs a center-fed channel")
    br = channel.branches
    b = cfg.beta
    e = gap_phase(cfg)
    branch_det = br.a_ff * br.a_bb - br.a_fb * br.a_bf
    splitter = math.sqrt(b.ff * b.bb) - math.sqrt(b.fb * b.bf) * e * e
    return branch_det, splitter


def effective_channel_matrix_form(cfg: SystemConfig, layout: PinchLayout | None = None) -> np.ndarray:
    """Recompose h as (port-to-element guide matrix) @ diag @ (element-to-user air matrix).

    Deliberately redundant with the closed-form builders; kept as an
    independent route for cross-checks.
    """
    lay = layout if layout is not None else build_layout(cfg)
    geo = user_distances(cfg, lay)
    wave = cfg.wave
    n = cfg.n_per_side
    e_gap = np.exp(-1j * wave.k_g * cfg.l_in_m)

    if cfg.architecture == "center":
        b = cfg.beta
        guide_f = np.exp(-1j * wave.k_g * geo.wg_f)
        guide_b = np.exp(-1j * wave.k_g * geo.wg_b)
        # rows: ports (F, B); columns: elements (forward 1..N, backward 1..N)
        g = np.zeros((2, 2 * n), dtype=np.complex128)
        g[0, :n] = math.sqrt(b.ff) * guide_f
        g[0, n:] = math.sqrt(b.fb) * e_gap * guide_b
        g[1, :n] = math.sqrt(b.bf) * e_gap * guide_f
        g[1, n:] = math.sqrt(b.bb) * guide_b
    else:
        guide = np.exp(-1j * wave.k_g * np.concatenate([geo.wg_f, geo.wg_b]))
        g = np.vstack([guide, e_gap * guide])
    scale = np.concatenate([lay.side_amplitudes("f"), lay.side_amplitudes("b")])

    # rows: elements in the same order as above; columns: users (F, B)
    air = np.zeros((2 * n, 2), dtype=np.complex128)
    air[:n, 0] = wave.eta * np.exp(-1j * wave.k0 * geo.r_ff) / geo.r_ff
    air[:n, 1] = wave.eta * np.exp(-1j * wave.k0 * geo.r_fb) / geo.r_fb
    air[n:, 0] = wave.eta * np.exp(-1j * wave.k0 * geo.r_bf) / geo.r_bf
    air[n:, 1] = wave.eta * np.exp(-1j * wave.k0 * geo.r_bb) / geo.r_bb

    return (g * scale[np.newaxis, :]) @ air


def build_channel(cfg: SystemConfig) -> EffectiveChannel:
    """Lay out elements (tuning them if the config asks) and build the matrix."""
    offsets_f = offsets_b = None
    if cfg.deployment == "tuned":
        from .tuning import align_end_fed, align_side
        if cfg.architecture == "center":
            offsets_f = align_side(cfg, side="f").offsets
            offsets_b = align_side(cfg, side="b").offsets
        else:
            fwd, bwd = align_end_fed(cfg)
            offsets_f, offsets_b = fwd.offsets, bwd.offsets
    layout = build_layout(cfg, offsets_f=offsets_f, offsets_b=offsets_b)
    if cfg.architecture == "center":
        return effective_channel_center(cfg, layout)
    return effective_channel_end(cfg, layout)
