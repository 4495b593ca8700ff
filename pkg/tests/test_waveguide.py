"""Splitter, coupling profiles, and the serial radiator chain.

The chain is checked three ways: against a naive per-step complex
multiplication walk written out in this file, against the telescoped
closed form shipped with the package, and against energy conservation.
The naive walk accumulates ~1 ulp of guide phase per step, so complex
values are compared as (magnitude, phase) with the phase tolerance set
by that conditioning limit, not by the math.
"""

import cmath
import math

import numpy as np
import pytest

from cpass import (EnergyConservationError, InfeasibleProfileError,
                   chain_signals, default_config, profile_from_delta,
                   propagate_chain, radiated_closed_form, split_input,
                   uniform_radiation_profile)

K_G = default_config().wave.k_g


def naive_walk(x_start, delta, spacings, k_g):
    """Reference chain: literal step-by-step complex products."""
    incident, radiated, through = [], [], []
    carry = complex(x_start)
    for d, dist in zip(delta, spacings):
        carry = carry * cmath.exp(-1j * k_g * dist)
        incident.append(carry)
        radiated.append(math.sqrt(d) * carry)
        carry = math.sqrt(1.0 - d) * carry
        through.append(carry)
    return np.array(incident), np.array(radiated), np.array(through)


# ---------------------------------------------------------------- splitter

def test_split_pass_through_port():
    assert split_input(1.0 + 0.0j, 1.0, 0.0) == (1.0 + 0.0j, 0.0j)


def test_split_symmetric_half():
    fwd, bwd = split_input(1.0 + 0.0j, 0.5, 0.5)
    assert fwd == pytest.approx(0.70711, abs=1e-5)
    assert bwd == fwd


def test_split_overcommitted_power_rejected():
    with pytest.raises(EnergyConservationError):
        split_input(1.0 + 0.0j, 0.7, 0.4)
    with pytest.raises(EnergyConservationError):
        split_input(1.0 + 0.0j, -0.1, 0.5)


def test_split_preserves_phase():
    x = cmath.exp(1j * 0.8)
    fwd, bwd = split_input(x, 0.3, 0.6)
    assert cmath.phase(fwd) == pytest.approx(0.8, abs=1e-15)
    assert abs(fwd) == pytest.approx(math.sqrt(0.3), rel=1e-15)
    assert abs(bwd) == pytest.approx(math.sqrt(0.6), rel=1e-15)


# ---------------------------------------------------------------- profiles

def test_uniform_profile_four_elements():
    prof = uniform_radiation_profile(4, 0.25)
    assert prof.delta == pytest.approx([0.25, 1 / 3, 0.5, 1.0], rel=1e-12)
    assert prof.xi == pytest.approx([0.25] * 4, rel=1e-12)


def test_uniform_profile_single_element_radiates_everything():
    prof = uniform_radiation_profile(1, 1.0)
    assert prof.delta == pytest.approx([1.0], rel=0)
    assert prof.xi == pytest.approx([1.0], rel=0)


def test_uniform_profile_infeasible_target():
    with pytest.raises(InfeasibleProfileError):
        uniform_radiation_profile(2, 0.6)
    with pytest.raises(InfeasibleProfileError):
        uniform_radiation_profile(3, 0.0)


def test_profile_cumulative_identity_randomized():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 65))
        delta = rng.uniform(0.0, 1.0, n)
        prof = profile_from_delta(delta)
        carry = 1.0
        for m in range(n):
            expected = delta[m] * carry
            if expected > 0.0:
                assert prof.xi[m] == pytest.approx(expected, rel=1e-14)
            else:
                assert prof.xi[m] == 0.0
            carry *= 1.0 - delta[m]
        assert float(np.sum(prof.xi)) <= 1.0 + 1e-12


def test_profile_rejects_out_of_range_coupling():
    with pytest.raises(InfeasibleProfileError):
        profile_from_delta([0.5, 1.2])
    with pytest.raises(InfeasibleProfileError):
        profile_from_delta([-0.1])
    with pytest.raises(InfeasibleProfileError):
        profile_from_delta([])


# ------------------------------------------------------------------- chain

def test_single_element_full_radiation():
    prof = profile_from_delta([1.0])
    steps = propagate_chain(1.0 + 0.0j, prof, [1.0], K_G)
    assert steps[0].radiated == pytest.approx(cmath.exp(-1j * K_G * 1.0), rel=1e-15)
    assert steps[0].through == 0.0


def test_transparent_chain_radiates_nothing():
    prof = profile_from_delta([0.0] * 5)
    x = 0.6 - 0.8j
    inc, rad, thr = chain_signals(x, prof, [0.3] * 5, K_G)
    assert np.all(rad == 0.0)
    assert abs(thr[-1]) == pytest.approx(abs(x), rel=1e-14)


def test_three_element_uniform_equal_radiated_power():
    prof = uniform_radiation_profile(3, 1 / 3)
    _, rad, _ = chain_signals(1.0 + 0.0j, prof, [1.0, 1.0, 1.0], K_G)
    assert np.abs(rad) ** 2 == pytest.approx([1 / 3] * 3, rel=1e-14)


def test_chain_matches_naive_walk():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 65))
        delta = rng.uniform(0.0, 1.0, n)
        spac = rng.uniform(1e-3, 2.0, n)
        inc, rad, thr = chain_signals(1.0 + 0.0j, profile_from_delta(delta), spac, K_G)
        n_inc, n_rad, n_thr = naive_walk(1.0 + 0.0j, delta, spac, K_G)
        for mine, ref in ((inc, n_inc), (rad, n_rad), (thr, n_thr)):
            live = np.abs(ref) > 1e-300
            assert np.abs(mine[live]) == pytest.approx(np.abs(ref[live]), rel=1e-13)
            drift = np.abs(np.angle(mine[live] / ref[live]))
            assert float(np.max(drift)) < 1e-9  # ulp-per-step phase accumulation


def test_per_step_energy_conservation():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 65))
        prof = profile_from_delta(rng.uniform(0.0, 1.0, n))
        inc, rad, thr = chain_signals(1.0 + 0.0j, prof, rng.uniform(1e-3, 2.0, n), K_G)
        budget = np.abs(rad) ** 2 + np.abs(thr) ** 2
        assert budget == pytest.approx(np.abs(inc) ** 2, rel=1e-14)


def test_global_energy_conservation_behind_splitter():
    rng = np.random.default_rng(13)
    for beta in (1.0, 0.5, 0.37):
        for _ in range(50):
            n = int(rng.integers(1, 65))
            prof = profile_from_delta(rng.uniform(0.0, 1.0, n))
            fwd, _ = split_input(1.0 + 0.0j, beta, 1.0 - beta)
            _, rad, thr = chain_signals(fwd, prof, rng.uniform(1e-3, 2.0, n), K_G)
            total = float(np.sum(np.abs(rad) ** 2) + abs(thr[-1]) ** 2)
            assert total == pytest.approx(beta, rel=1e-13)


def test_phase_additivity_merging_spacings():
    prof = profile_from_delta([0.3, 0.5])
    _, rad_split, _ = chain_signals(1.0 + 0.0j, prof, [0.7, 0.9], K_G)
    _, rad_merged, _ = chain_signals(1.0 + 0.0j, prof, [0.7 + 0.9, 0.0], K_G)
    assert rad_merged[1] == rad_split[1]


def test_chain_validates_inputs():
    prof = profile_from_delta([0.5, 0.5])
    with pytest.raises(ValueError):
        chain_signals(1.0 + 0.0j, prof, [1.0], K_G)
    with pytest.raises(ValueError):
        chain_signals(1.0 + 0.0j, prof, [1.0, -1.0], K_G)
    with pytest.raises(ValueError):
        chain_signals(1.0 + 0.0j, prof, [1.0, 1.0], 0.0)


# ------------------------------------------------------------- closed form

def test_closed_form_full_wavelength_wraps_phase():
    prof = profile_from_delta([1.0])
    lambda_g = default_config().wave.lambda_g_m
    out = radiated_closed_form(1.0 + 0.0j, 1.0, prof, [lambda_g], K_G)
    assert out[0] == pytest.approx(1.0 + 0.0j, rel=1e-12)


def test_closed_form_dead_branch_is_zero():
    prof = profile_from_delta([0.4, 0.6])
    out = radiated_closed_form(1.0 + 0.0j, 0.0, prof, [1.0, 2.0], K_G)
    assert np.all(out == 0.0)


def test_closed_form_matches_chain_randomized():
    rng = np.random.default_rng(1234)
    for _ in range(200):
        n = int(rng.integers(1, 65))
        prof = profile_from_delta(rng.uniform(0.0, 1.0, n))
        spac = rng.uniform(1e-3, 2.0, n)
        _, rad, _ = chain_signals(0.6 - 0.8j, prof, spac, K_G)
        closed = radiated_closed_form(0.6 - 0.8j, 1.0, prof, np.cumsum(spac), K_G)
        live = np.abs(closed) > 1e-300
        assert rad[live] == pytest.approx(closed[live], rel=1e-12)
        assert np.all(np.abs(rad[~live]) <= 1e-300)


def test_closed_form_applies_splitter_ratio():
    prof = profile_from_delta([0.5, 0.5])
    full = radiated_closed_form(1.0 + 0.0j, 1.0, prof, [1.0, 2.0], K_G)
    quarter = radiated_closed_form(1.0 + 0.0j, 0.25, prof, [1.0, 2.0], K_G)
    assert quarter == pytest.approx(0.5 * full, rel=1e-15)
