"""Element layout, geometry, branch sums, and the 2x2 link matrix.

Branch sums are checked against a compensated term-by-term oracle
(math.fsum over independently computed terms), and the matrix builders
against an explicit guide/coupling/air matrix product, so the closed
forms and the matrix route vouch for each other.
"""

import cmath
import math

import numpy as np
import pytest

from cpass import (ArchitectureMismatchError, ConfigError, SplitterSetting,
                   build_channel, build_layout, branch_coefficient,
                   default_config, determinant_factors,
                   effective_channel_center, effective_channel_end,
                   effective_channel_matrix_form, gap_phase, path_sum,
                   user_distances, with_updates)
from cpass.channel import PinchLayout


def random_center_config(rng, n_max=64):
    bft = rng.uniform(0, 1)
    bfb = rng.uniform(0, 1 - bft)
    bbf = rng.uniform(0, 1)
    bbb = rng.uniform(0, 1 - bbf)
    return default_config(
        n_per_side=int(rng.integers(1, n_max + 1)),
        y_f_m=float(rng.uniform(5, 60)), y_b_m=float(rng.uniform(5, 60)),
        l_in_m=float(rng.uniform(0, 0.05)),
        beta_ff=bft, beta_fb=bfb, beta_bf=bbf, beta_bb=bbb)


# ------------------------------------------------------------------ layout

def test_nominal_grid_positions():
    cfg = default_config(n_per_side=3)
    lay = build_layout(cfg)
    assert lay.positions_f.tolist() == [1.0, 2.0, 3.0]
    assert lay.positions_b.tolist() == [1.0, 2.0, 3.0]


def test_rigid_shift_within_budget():
    cfg = default_config(n_per_side=3)
    lay = build_layout(cfg, offsets_f=[0.01, 0.01, 0.01])
    assert lay.positions_f == pytest.approx([1.01, 2.01, 3.01], rel=1e-15)
    assert lay.positions_b.tolist() == [1.0, 2.0, 3.0]


def test_offset_budget_enforced():
    cfg = default_config(n_per_side=3)
    with pytest.raises(ConfigError):
        build_layout(cfg, offsets_f=[0.0, 0.02, 0.0])
    with pytest.raises(ConfigError):
        build_layout(cfg, offsets_b=[0.0, 0.0, -0.02])


def test_offset_length_must_match():
    cfg = default_config(n_per_side=3)
    with pytest.raises(ConfigError):
        build_layout(cfg, offsets_f=[0.0, 0.0])


def test_center_side_profiles_are_uniform():
    cfg = default_config(n_per_side=5)
    lay = build_layout(cfg)
    assert lay.profile_f.xi == pytest.approx([1 / 5] * 5, rel=1e-12)
    assert lay.profile_b.xi == pytest.approx([1 / 5] * 5, rel=1e-12)
    assert lay.chain_profile is None


def test_end_chain_profile_spans_both_groups():
    cfg = default_config(n_per_side=4, architecture="end")
    lay = build_layout(cfg)
    assert lay.profile_f is None and lay.profile_b is None
    assert lay.chain_profile.xi == pytest.approx([1 / 8] * 8, rel=1e-12)
    assert lay.side_amplitudes("f") == pytest.approx([math.sqrt(1 / 8)] * 4, rel=1e-12)
    assert lay.side_amplitudes("b") == pytest.approx([math.sqrt(1 / 8)] * 4, rel=1e-12)


def test_end_single_pair_weight():
    cfg = default_config(n_per_side=1, architecture="end")
    lay = build_layout(cfg)
    assert lay.side_amplitudes("f")[0] == np.sqrt(0.5)
    assert lay.side_amplitudes("b")[0] == np.sqrt(0.5)


# ---------------------------------------------------------------- geometry

def test_same_side_distance_example():
    cfg = default_config(n_per_side=3)
    geo = user_distances(cfg, build_layout(cfg))
    assert geo.r_ff[2] == pytest.approx(math.sqrt(1234.0), rel=1e-15)
    assert geo.r_ff[2] == pytest.approx(35.1283, abs=1e-4)


def test_cross_side_distance_example():
    cfg = default_config(n_per_side=3, l_in_m=9.5597e-3)
    geo = user_distances(cfg, build_layout(cfg))
    expected = math.sqrt(40.0 ** 2 + (9.5597e-3 + 2.0) ** 2)
    assert geo.r_fb[1] == pytest.approx(expected, rel=1e-15)
    assert geo.r_fb[1] == pytest.approx(40.0504, abs=1e-4)


def test_overhead_element_distance_equals_height():
    cfg = default_config(n_per_side=1)
    lay = build_layout(cfg)
    overhead = PinchLayout(
        positions_f=np.array([1e-12]), positions_b=lay.positions_b,
        offsets_f=np.zeros(1), offsets_b=lay.offsets_b,
        profile_f=lay.profile_f, profile_b=lay.profile_b, chain_profile=None)
    geo = user_distances(cfg, overhead)
    assert geo.r_ff[0] == cfg.y_f_m


def test_distances_dominated_by_heights():
    rng = np.random.default_rng(3)
    for _ in range(20):
        cfg = random_center_config(rng)
        geo = user_distances(cfg, build_layout(cfg))
        assert np.all(geo.r_ff >= cfg.y_f_m)
        assert np.all(geo.r_bb >= cfg.y_b_m)
        assert np.all(geo.r_fb >= cfg.y_b_m)
        assert np.all(geo.r_bf >= cfg.y_f_m)


def test_guide_paths_strictly_positive_both_architectures():
    for arch in ("center", "end"):
        cfg = default_config(n_per_side=6, architecture=arch)
        geo = user_distances(cfg, build_layout(cfg))
        assert np.all(geo.wg_f > 0.0)
        assert np.all(geo.wg_b > 0.0)


def test_end_guide_paths_traverse_backward_group_first():
    cfg = default_config(n_per_side=6, architecture="end")
    geo = user_distances(cfg, build_layout(cfg))
    # the feed sits behind the far end of the backward group, so every
    # backward element is reached before any forward one
    assert float(np.max(geo.wg_b)) < float(np.min(geo.wg_f))
    gap = float(np.min(geo.wg_f)) - float(np.max(geo.wg_b))
    assert gap == pytest.approx(2 * cfg.l_pa_m + cfg.l_in_m, rel=1e-12)


# ------------------------------------------------------------- branch sums

def test_single_element_branch_magnitude():
    cfg = default_config(n_per_side=1)
    a = branch_coefficient(cfg, build_layout(cfg), "f", "f")
    assert abs(a) == pytest.approx(cfg.wave.eta / math.hypot(35.0, 1.0), rel=1e-12)
    assert abs(a) == pytest.approx(2.4333e-5, abs=1e-9)


def test_zero_amplitude_scale_kills_the_path():
    assert path_sum([1.0], [35.0], [1.0], 0.0, 821.57, 586.84) == 0.0


def test_branch_sum_matches_compensated_oracle():
    rng = np.random.default_rng(88)
    cfg = default_config(n_per_side=8)
    offsets = rng.uniform(-0.01, 0.01, 8)
    lay = build_layout(cfg, offsets_f=offsets)
    geo = user_distances(cfg, lay)
    a = branch_coefficient(cfg, lay, "f", "f", geo)
    w = cfg.wave
    terms = [
        math.sqrt(1 / 8) * cmath.exp(-1j * (w.k_g * wg)) * cmath.exp(-1j * (w.k0 * r)) / r
        for wg, r in zip(geo.wg_f, geo.r_ff)
    ]
    oracle = w.eta * complex(math.fsum(t.real for t in terms),
                             math.fsum(t.imag for t in terms))
    assert a == pytest.approx(oracle, rel=1e-12)


def test_branch_magnitude_triangle_bound():
    rng = np.random.default_rng(17)
    for _ in range(30):
        cfg = random_center_config(rng)
        lay = build_layout(cfg)
        geo = user_distances(cfg, lay)
        a = branch_coefficient(cfg, lay, "f", "f", geo)
        bound = (cfg.wave.eta / math.sqrt(cfg.n_per_side)) * float(np.sum(1.0 / geo.r_ff))
        assert abs(a) <= bound * (1.0 + 1e-12)


def test_branch_sides_validated():
    cfg = default_config(n_per_side=2)
    with pytest.raises(ConfigError):
        branch_coefficient(cfg, build_layout(cfg), "f", "x")


# ------------------------------------------------------- center-fed matrix

def test_no_cross_feed_degenerates_to_raw_branches():
    cfg = default_config(n_per_side=4)
    lay = build_layout(cfg)
    ch = effective_channel_center(cfg, lay, beta=SplitterSetting(1.0, 0.0, 0.0, 1.0))
    br = ch.branches
    assert ch.h[0, 0] == br.a_ff
    assert ch.h[0, 1] == br.a_fb
    assert ch.h[1, 0] == br.a_bf
    assert ch.h[1, 1] == br.a_bb


def test_closed_splitter_gives_zero_matrix():
    cfg = default_config(n_per_side=4)
    ch = effective_channel_center(cfg, beta=SplitterSetting(0.0, 0.0, 0.0, 0.0))
    assert np.all(ch.h == 0.0)


def test_colocated_symmetric_link_is_singular():
    cfg = default_config(n_per_side=4, y_b_m=35.0, l_in_m=0.0)
    ch = effective_channel_center(cfg)
    assert ch.h[0, 0] == ch.h[1, 0] and ch.h[0, 1] == ch.h[1, 1]
    assert np.linalg.det(ch.h) == 0.0


def test_determinant_factorization_randomized():
    rng = np.random.default_rng(99)
    for _ in range(100):
        cfg = random_center_config(rng)
        ch = effective_channel_center(cfg)
        branch_det, splitter = determinant_factors(cfg, ch)
        det = complex(np.linalg.det(ch.h))
        ref = max(abs(det), abs(branch_det * splitter))
        if ref == 0.0:
            continue
        assert abs(det - branch_det * splitter) / ref < 1e-13


def test_splitter_factor_quarter_wave_gap():
    cfg = default_config(n_per_side=2)  # default gap is 1.25 guided wavelengths
    _, splitter = determinant_factors(cfg, effective_channel_center(cfg))
    assert splitter == pytest.approx(1.0, abs=1e-12)


def test_splitter_factor_one_sided_feed_vanishes():
    cfg = default_config(n_per_side=2, beta_ff=0.0, beta_fb=1.0,
                         beta_bf=0.0, beta_bb=1.0)
    _, splitter = determinant_factors(cfg, effective_channel_center(cfg))
    assert splitter == 0.0


def test_splitter_factor_independent_parallel_feeds():
    cfg = default_config(n_per_side=2, beta_ff=1.0, beta_fb=0.0,
                         beta_bf=0.0, beta_bb=1.0)
    _, splitter = determinant_factors(cfg, effective_channel_center(cfg))
    assert splitter == 1.0


def test_determinant_factorization_needs_center_matrix():
    cfg = default_config(n_per_side=2, architecture="end")
    ch = effective_channel_end(cfg)
    with pytest.raises(ArchitectureMismatchError):
        determinant_factors(cfg, ch)


def test_builders_enforce_architecture_tag():
    with pytest.raises(ArchitectureMismatchError):
        effective_channel_center(default_config(architecture="end"))
    with pytest.raises(ArchitectureMismatchError):
        effective_channel_end(default_config(architecture="center"))


def test_matrix_recomposition_center():
    rng = np.random.default_rng(5)
    for _ in range(30):
        cfg = random_center_config(rng)
        direct = effective_channel_center(cfg).h
        composed = effective_channel_matrix_form(cfg)
        scale = float(np.abs(direct).max())
        assert float(np.abs(composed - direct).max()) <= 1e-13 * scale


def test_matrix_recomposition_end():
    rng = np.random.default_rng(6)
    for _ in range(30):
        cfg = with_updates(random_center_config(rng), architecture="end")
        direct = effective_channel_end(cfg).h
        composed = effective_channel_matrix_form(cfg)
        scale = float(np.abs(direct).max())
        assert float(np.abs(composed - direct).max()) <= 1e-13 * scale


def test_label_swap_permutes_the_matrix():
    cfg = default_config(n_per_side=5, beta_ff=0.3, beta_fb=0.6,
                         beta_bf=0.2, beta_bb=0.7)
    swapped = default_config(n_per_side=5, y_f_m=cfg.y_b_m, y_b_m=cfg.y_f_m,
                             beta_ff=0.7, beta_fb=0.2, beta_bf=0.6, beta_bb=0.3)
    h = build_channel(cfg).h
    h_sw = build_channel(swapped).h
    exchange = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert np.array_equal(h_sw, exchange @ h @ exchange)


# ---------------------------------------------------------- end-fed matrix

def test_end_rows_share_one_direction():
    cfg = default_config(n_per_side=4, architecture="end")
    ch = effective_channel_end(cfg)
    assert np.array_equal(ch.h[1], gap_phase(cfg) * ch.h[0])
    s = np.linalg.svd(ch.h, compute_uv=False)
    assert s[1] <= 1e-12 * s[0]


def test_end_zero_gap_duplicates_rows():
    cfg = default_config(n_per_side=4, architecture="end", l_in_m=0.0)
    ch = effective_channel_end(cfg)
    assert np.array_equal(ch.h[0], ch.h[1])


def test_end_rank_deficiency_randomized():
    rng = np.random.default_rng(42)
    for _ in range(50):
        cfg = with_updates(random_center_config(rng), architecture="end")
        h = build_channel(cfg).h
        assert abs(np.linalg.det(h)) <= 1e-12 * np.linalg.norm(h, "fro") ** 2


def test_build_channel_dispatches_on_architecture():
    assert build_channel(default_config()).architecture == "center"
    assert build_channel(default_config(architecture="end")).architecture == "end"


def test_tuned_deployment_moves_elements():
    cfg = default_config(n_per_side=8, deployment="tuned")
    ch = build_channel(cfg)
    assert float(np.abs(ch.layout.offsets_f).max()) > 0.0
    assert float(np.abs(ch.layout.offsets_f).max()) <= cfg.delta_max_m
