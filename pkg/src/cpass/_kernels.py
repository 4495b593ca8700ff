"""Hot numeric paths, compiled with numba when available.

Each kernel has a plain Python/numpy reference implementation (suffix
``_py``).  When numba imports cleanly and ``CPASS_DISABLE_NUMBA`` is not
set, the public names point at ``@njit``-compiled twins; otherwise they
point at the references.  ``backend()`` reports which path is live, and
the compiled twins stay importable as ``*_jit`` (``None`` when inactive)
so the two paths can be compared head to head.
"""

from __future__ import annotations

import cmath
import math
import os

import numpy as np

_TWO_PI = 2.0 * math.pi

_flag = os.environ.get("CPASS_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _flag in {"1", "true", "yes", "on"}

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled via CPASS_DISABLE_NUMBA")
    from numba import njit

    NUMBA_ACTIVE = True
except ImportError:
    NUMBA_ACTIVE = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def backend() -> str:
    """Name of the active kernel path: ``"numba"`` or ``"numpy"``."""
    return "numba" if NUMBA_ACTIVE else "numpy"


def _phase_total_py(x: float, y: float, shift: float, sigma: float,
                    k_g: float, k0: float) -> float:
    # Guided phase grows along the travel direction (sigma = -1 when the
    # element coordinate runs against it); wireless phase uses the slant
    # range from a radiator at axial x+shift to a user at height y.
    t = x + shift
    return k_g * (sigma * x) + k0 * math.sqrt(y * y + t * t)


def _chain_py(x_start: complex, delta: np.ndarray, spacings: np.ndarray,
              k_g: float):
    """Serial radiator chain, one explicit step per element.

    ``spacings[m]`` is the guide length crossed before element m (the
    first entry is port-to-first-element).  Returns per-element incident,
    radiated, and through signals.
    """
    n = delta.shape[0]
    incident = np.empty(n, dtype=np.complex128)
    radiated = np.empty(n, dtype=np.complex128)
    through = np.empty(n, dtype=np.complex128)
    # The guide phase is referenced to the accumulated distance rather
    # than multiplied in step by step: at ~1e5 rad a per-step complex
    # product drifts by ~n ulps of phase, which is visible at 1e-12.
    mag = 1.0
    dist = 0.0
    for m in range(n):
        dist = dist + spacings[m]
        rot = x_start * cmath.exp(-1j * (k_g * dist))
        inc = mag * rot
        incident[m] = inc
        radiated[m] = math.sqrt(delta[m]) * inc
        mag = mag * math.sqrt(1.0 - delta[m])
        through[m] = mag * rot
    return incident, radiated, through


def _radiated_sum_py(wg: np.ndarray, r: np.ndarray, amp: np.ndarray,
                     eta: float, k_g: float, k0: float) -> complex:
    """Coherent far-field sum over one group of radiators.

    amp carries the per-element launch amplitude (sqrt of the radiated
    power fraction); wg is the in-guide distance behind each element and
    r the radiator-to-user slant range.
    """
    # Guided and wireless phases are rotated in separately; a fused
    # k_g*wg + k0*r argument rounds differently from any factored
    # evaluation and the mismatch is visible near 1e-11 at ~1e5 rad.
    terms = amp * np.exp(-1j * (k_g * wg)) * np.exp(-1j * (k0 * r)) / r
    return complex(eta * np.sum(terms))


def _radiated_sum_loop(wg: np.ndarray, r: np.ndarray, amp: np.ndarray,
                       eta: float, k_g: float, k0: float) -> complex:
    total = 0.0 + 0.0j
    for i in range(wg.shape[0]):
        term = amp[i] * cmath.exp(-1j * (k_g * wg[i])) * cmath.exp(-1j * (k0 * r[i]))
        total += term / r[i]
    return eta * total


def _align_py(x_nom: np.ndarray, y: float, shift: float, sigma: float,
              k_g: float, k0: float, delta_max: float, target: float):
    """Per-element axial offsets that phase-match a common target.

    For each nominal position the total phase is monotone in the offset,
    so every candidate wrap level inside the +-delta_max window is pinned
    by bisection and the smallest-magnitude offset wins.  When the phase
    sweep across the window is narrower than one wrap there may be no
    exact solution; the better endpoint is reported with its residual.
    """
    n = x_nom.shape[0]
    offsets = np.zeros(n, dtype=np.float64)
    residuals = np.empty(n, dtype=np.float64)
    for i in range(n):
        x = x_nom[i]

        def g(d: float) -> float:
            xq = x + d
            t = xq + shift
            return k_g * (sigma * xq) + k0 * math.sqrt(y * y + t * t) - target

        g_lo = g(-delta_max)
        g_hi = g(delta_max)
        increasing = g_hi >= g_lo
        lo = min(g_lo, g_hi)
        hi = max(g_lo, g_hi)
        k_first = int(math.ceil(lo / _TWO_PI))
        k_last = int(math.floor(hi / _TWO_PI))

        best = 0.0
        best_abs = 1e308
        found = False
        for k in range(k_first, k_last + 1):
            level = _TWO_PI * k
            a = -delta_max
            b = delta_max
            fa = g_lo - level
            fb = g_hi - level
            if not increasing:
                fa = -fa
                fb = -fb
            if g(0.0) - level == 0.0:
                root = 0.0
            elif fa > 0.0:
                root = a
            elif fb < 0.0:
                root = b
            else:
                for _ in range(200):
                    mid = 0.5 * (a + b)
                    if mid == a or mid == b:
                        break
                    fm = g(mid) - level
                    if not increasing:
                        fm = -fm
                    if fm < 0.0:
                        a = mid
                    else:
                        b = mid
                root = 0.5 * (a + b)
            if abs(root) < best_abs:
                best_abs = abs(root)
                best = root
            found = True
        if not found:
            # wrap into (-pi, pi]
            w_lo = g_lo - _TWO_PI * math.ceil(g_lo / _TWO_PI - 0.5)
            w_hi = g_hi - _TWO_PI * math.ceil(g_hi / _TWO_PI - 0.5)
            best = -delta_max if abs(w_lo) <= abs(w_hi) else delta_max
        offsets[i] = best + 0.0
        gb = g(best)
        residuals[i] = gb - _TWO_PI * math.ceil(gb / _TWO_PI - 0.5)
    return offsets, residuals


if NUMBA_ACTIVE:
    phase_total_jit = njit(cache=True)(_phase_total_py)
    chain_jit = njit(cache=True)(_chain_py)
    radiated_sum_jit = njit(cache=True)(_radiated_sum_loop)
    align_jit = njit(cache=True)(_align_py)

    phase_total = phase_total_jit
    chain = chain_jit
    radiated_sum = radiated_sum_jit
    align_offsets = align_jit
else:
    phase_total_jit = None
    chain_jit = None
    radiated_sum_jit = None
    align_jit = None

    phase_total = _phase_total_py
    chain = _chain_py
    radiated_sum = _radiated_sum_py
    align_offsets = _align_py


def warmup() -> None:
    """Trigger one compilation of every kernel (no-op on the numpy path)."""
    x = np.array([1.0])
    phase_total(1.0, 1.0, 0.0, 1.0, 1.0, 1.0)
    chain(1.0 + 0.0j, np.array([0.5]), x, 1.0)
    radiated_sum(x, x, x, 1.0, 1.0, 1.0)
    align_offsets(x, 1.0, 0.0, 1.0, 800.0, 600.0, 0.01, 0.0)
