"""Link capacity, its gain decomposition, and large-array scaling aids.

For a 2x2 matrix H with per-stream SNR factor rho = P_T / (2 N_0),

    C = log2 det(I + rho H H^H)
      = log2(1 + rho * ||H||_F^2 + rho^2 * |det H|^2),

so the capacity argument splits into an array term ||H||_F^2 and a
multiplexing term rho * |det H|^2.  Both identities are implemented as
separate routes on purpose.

The scaling helpers sandwich the aligned distance sum
S_N = sum_m (y^2 + m^2 L^2)^(-1/2) between integral bounds, which pins
the large-N behavior of both gain terms without simulating the array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import BranchCoefficients, EffectiveChannel, build_channel
from .config import LinkBudget, SystemConfig, dbm_to_watt
from .errors import ConfigError

__all__ = [
    "stream_snr", "capacity", "capacity_trace_form",
    "GainReport", "gain_decomposition", "simplified_gains_quarterwave",
    "DoFEstimate", "estimate_dof",
    "distance_sum", "distance_sum_grid", "ScalingBounds", "distance_sum_bounds",
    "GainTargets", "asymptotic_gain_targets", "GainEnvelope", "gain_envelope",
]


def _as_matrix(h) -> np.ndarray:
    mat = h.h if isinstance(h, EffectiveChannel) else np.asarray(h, dtype=np.complex128)
    if mat.shape != (2, 2):
        raise ConfigError(f"expected a 2x2 link matrix, got shape {mat.shape}")
    return mat


def stream_snr(budget: LinkBudget) -> float:
    """Per-stream SNR factor rho: total power split evenly across two streams."""
    return budget.p_t_watt / (2.0 * budget.n0_watt)


def capacity(h, budget: LinkBudget) -> float:
    """log2 det(I + rho H H^H), in bits per channel use."""
    mat = _as_matrix(h)
    rho = stream_snr(budget)
    gram = np.eye(2, dtype=np.complex128) + rho * (mat @ mat.conj().T)
    _, logabsdet = np.linalg.slogdet(gram)
    return float(logabsdet / math.log(2.0))


def capacity_trace_form(h, budget: LinkBudget) -> float:
    """Same quantity through the trace/determinant expansion of the 2x2 Gram."""
    mat = _as_matrix(h)
    rho = stream_snr(budget)
    frob = float(np.sum(np.abs(mat) ** 2))
    det_sq = float(abs(np.linalg.det(mat)) ** 2)
    return math.log2(1.0 + rho * frob + rho * rho * det_sq)


@dataclass(frozen=True)
class GainReport:
    """Array term, multiplexing term, their sum, and the resulting capacity."""

    g_array: float
    g_mux: float
    g_total: float
    capacity_bits: float


def _report(g_array: float, g_mux: float, rho: float) -> GainReport:
    g_total = g_array + g_mux
    return GainReport(g_array=g_array, g_mux=g_mux, g_total=g_total,
                      capacity_bits=math.log2(1.0 + rho * g_total))


def gain_decomposition(h, budget: LinkBudget) -> GainReport:
    """Split the capacity argument: C = log2(1 + rho * (g_array + g_mux))."""
    mat = _as_matrix(h)
    rho = stream_snr(budget)
    g_array = float(np.sum(np.abs(mat) ** 2))
    g_mux = rho * float(abs(np.linalg.det(mat)) ** 2)
    return _report(g_array, g_mux, rho)


def simplified_gains_quarterwave(cfg: SystemConfig, channel) -> GainReport:
    """Gain terms straight from the branch sums, valid only at quarter-wave
    port gaps (cos(k_g * l_in) == 0) with an even splitter.

    At that operating point the gap-phase cross terms cancel from the
    Frobenius norm and the splitter factor of the determinant is exactly
    one, so g_array collapses to the sum of branch powers and g_mux to
    the branch determinant alone.  ``channel`` may be an
    EffectiveChannel (center-fed) or bare BranchCoefficients.
    """
    if abs(math.cos(cfg.wave.k_g * cfg.l_in_m)) > 1e-9:
        raise ConfigError("quarter-wave shortcut needs cos(k_g * l_in) == 0")
    b = cfg.beta
    if any(abs(v - 0.5) > 1e-12 for v in (b.ff, b.fb, b.bf, b.bb)):
        raise ConfigError("quarter-wave shortcut needs an even splitter (all 1/2)")
    if isinstance(channel, EffectiveChannel):
        if channel.architecture != "center":
            raise ConfigError("quarter-wave shortcut applies to the center-fed matrix")
        br = channel.branches
    elif isinstance(channel, BranchCoefficients):
        br = channel
    else:
        raise ConfigError(f"expected a channel or branch coefficients, got {type(channel)!r}")
    g_array = float(abs(br.a_ff) ** 2 + abs(br.a_fb) ** 2
                    + abs(br.a_bf) ** 2 + abs(br.a_bb) ** 2)
    rho = stream_snr(cfg.budget)
    g_mux = rho * float(abs(br.a_ff * br.a_bb - br.a_fb * br.a_bf) ** 2)
    return _report(g_array, g_mux, rho)


@dataclass(frozen=True)
class DoFEstimate:
    """High-power capacity slope against log2 of the power budget."""

    slope: float
    p_grid_dbm: np.ndarray
    capacities: np.ndarray
    residual: float

    @property
    def fit_range_dbm(self) -> tuple[float, float]:
        return float(self.p_grid_dbm[0]), float(self.p_grid_dbm[-1])


def estimate_dof(cfg: SystemConfig, p_grid_dbm=None) -> DoFEstimate:
    """Least-squares slope of capacity versus log2(P_T/N_0) at high power.

    The grid defaults to 80..100 dBm in 5 dB steps, far enough up that
    every active log term has saturated its slope.
    """
    grid = np.arange(80.0, 101.0, 5.0) if p_grid_dbm is None else \
        np.asarray(p_grid_dbm, dtype=np.float64)
    if grid.size < 2 or np.ptp(grid) == 0.0:
        raise ConfigError("need at least two distinct power points to fit a slope")
    ch = build_channel(cfg)
    n0 = cfg.budget.n0_dbm
    caps = np.array([capacity(ch, LinkBudget(p_t_dbm=float(p), n0_dbm=n0)) for p in grid])
    x = np.array([math.log2(dbm_to_watt(p) / dbm_to_watt(n0)) for p in grid])
    slope, intercept = np.polyfit(x, caps, 1)
    rms = float(np.sqrt(np.mean((caps - (slope * x + intercept)) ** 2)))
    return DoFEstimate(slope=float(slope), p_grid_dbm=grid, capacities=caps, residual=rms)


def distance_sum(n: int, y: float, l_pa_m: float) -> float:
    """S_N = sum over the first n grid slots of 1 / sqrt(y^2 + (m L)^2)."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    if not (y > 0.0 and l_pa_m > 0.0):
        raise ConfigError("y and l_pa must be positive")
    m = np.arange(1, n + 1, dtype=np.float64)
    return float(np.sum(1.0 / np.sqrt(y * y + (m * l_pa_m) ** 2)))


def distance_sum_grid(n_max: int, y: float, l_pa_m: float) -> np.ndarray:
    """S_1..S_{n_max} in one cumulative pass."""
    if n_max < 1:
        raise ConfigError(f"n_max must be >= 1, got {n_max}")
    m = np.arange(1, n_max + 1, dtype=np.float64)
    return np.cumsum(1.0 / np.sqrt(y * y + (m * l_pa_m) ** 2))


@dataclass(frozen=True)
class ScalingBounds:
    """The distance sum with its integral sandwich at one n."""

    n: int
    s_n: float
    lower: float
    upper: float


def distance_sum_bounds(n: int, y: float, l_pa_m: float) -> ScalingBounds:
    """Integral sandwich for S_N; the summand is decreasing in m.

    lower integrates the summand over [1, n+1], upper over [0, n]; the
    sandwich is re-checked on every call since it is a cheap invariant.
    """
    s_n = distance_sum(n, y, l_pa_m)
    scale = l_pa_m / y
    lower = (math.asinh((n + 1) * scale) - math.asinh(scale)) / l_pa_m
    upper = math.asinh(n * scale) / l_pa_m
    if not (lower <= s_n <= upper):
        raise ArithmeticError(f"integral sandwich violated at n={n}: "
                              f"{lower} <= {s_n} <= {upper} fails")
    return ScalingBounds(n=n, s_n=s_n, lower=lower, upper=upper)


@dataclass(frozen=True)
class GainTargets:
    """Dominant aligned-branch values the tuned gains approach at large n."""

    array_target: float
    mux_target: float


def _gains_from_sums(cfg: SystemConfig, n: int, s_f: float, s_b: float) -> GainTargets:
    eta = cfg.wave.eta
    rho = stream_snr(cfg.budget)
    array_target = eta * eta * (s_f * s_f + s_b * s_b) / n
    mux_target = rho * (eta ** 4) * (s_f * s_f) * (s_b * s_b) / (n * n)
    return GainTargets(array_target=array_target, mux_target=mux_target)


def asymptotic_gain_targets(cfg: SystemConfig, n: int) -> GainTargets:
    """Own-user branch powers under perfect phase alignment.

    g_array keeps only the two own-user branches (the cross branches stay
    unaligned and average out); g_mux keeps only the product of the two
    aligned branches in the determinant.
    """
    s_f = distance_sum(n, cfg.y_f_m, cfg.l_pa_m)
    s_b = distance_sum(n, cfg.y_b_m, cfg.l_pa_m)
    return _gains_from_sums(cfg, n, s_f, s_b)


@dataclass(frozen=True)
class GainEnvelope:
    """Targets recomputed with the integral bounds in place of the sums."""

    lower_array: float
    upper_array: float
    lower_mux: float
    upper_mux: float


def gain_envelope(cfg: SystemConfig, n: int) -> GainEnvelope:
    b_f = distance_sum_bounds(n, cfg.y_f_m, cfg.l_pa_m)
    b_b = distance_sum_bounds(n, cfg.y_b_m, cfg.l_pa_m)
    lo = _gains_from_sums(cfg, n, b_f.lower, b_b.lower)
    hi = _gains_from_sums(cfg, n, b_f.upper, b_b.upper)
    return GainEnvelope(lower_array=lo.array_target, upper_array=hi.array_target,
                        lower_mux=lo.mux_target, upper_mux=hi.mux_target)
