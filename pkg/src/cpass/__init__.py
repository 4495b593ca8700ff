"""Desk-scale simulator for center-fed and end-fed pinching-antenna links."""

from ._kernels import backend, warmup
from ._version import __version__
from .channel import (BranchCoefficients, EffectiveChannel, GeometryView,
                      PinchLayout, branch_coefficient, branch_coefficients,
                      build_channel, build_layout, determinant_factors,
                      effective_channel_center, effective_channel_end,
                      effective_channel_matrix_form, gap_phase, nominal_positions,
                      path_sum, user_distances)
from .config import (DEFAULTS, LinkBudget, SystemConfig, WaveConstants,
                     config_as_mapping, config_from_mapping, dbm_to_watt,
                     default_config, derive_wave_constants, dump_config,
                     load_config, save_config, watt_to_dbm, with_updates)
from .errors import (ArchitectureMismatchError, ConfigError,
                     EnergyConservationError, InfeasibleProfileError)
from .metrics import (DoFEstimate, GainEnvelope, GainReport, GainTargets,
                      ScalingBounds, asymptotic_gain_targets, capacity,
                      capacity_trace_form, distance_sum, distance_sum_bounds,
                      distance_sum_grid, estimate_dof, gain_decomposition,
                      gain_envelope, simplified_gains_quarterwave, stream_snr)
from .sweeps import (Dataset, emit, log_int_grid, rebuild_from_manifest,
                     rerun_from_manifest, run_all, run_capacity_vs_n,
                     run_gain_sweep, run_power_sweep, run_table1)
from .tuning import (AlignmentResult, align_end_fed, align_side, total_phase,
                     wrap_phase)
from .waveguide import (PropagationStep, RadiationProfile, SplitterSetting,
                        chain_signals, profile_from_delta, propagate_chain,
                        radiated_closed_form, split_input,
                        uniform_radiation_profile)

__all__ = [name for name in dir() if not name.startswith("_")]
