"""Carrier constants, link budget, and run configuration.

Lengths are meters, frequencies Hz; powers cross the file boundary in dBm
and are exposed in watts.  A guide with effective index n_eff compresses
the free-space wavelength by 1/n_eff, so the guided and over-the-air
phases accumulate at different rates (k_g > k0 whenever n_eff > 1).

Config files are flat ``key = value`` text; ``#`` and ``;`` start
comments.  Recognized keys and defaults are listed in DEFAULTS below.
An empty file yields the default 28 GHz desk scenario.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .waveguide import SplitterSetting

SPEED_OF_LIGHT = 299792458.0  # m/s

ETA_MODELS = ("friis", "unit")
ARCHITECTURES = ("center", "end")
DEPLOYMENTS = ("uniform", "tuned")


def dbm_to_watt(value_dbm: float) -> float:
    return 10.0 ** (value_dbm / 10.0) / 1000.0


def watt_to_dbm(value_watt: float) -> float:
    if not (value_watt > 0.0 and math.isfinite(value_watt)):
        raise ConfigError(f"power must be positive and finite to express in dBm, got {value_watt!r}")
    return 10.0 * math.log10(value_watt * 1000.0)


@dataclass(frozen=True)
class WaveConstants:
    """Wavelengths, wavenumbers, and the radiated-amplitude scale for one carrier."""

    f_c_hz: float = 28e9
    n_eff: float = 1.4
    eta_model: str = "friis"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.f_c_hz) and self.f_c_hz > 0.0):
            raise ConfigError(f"f_c_hz must be positive and finite, got {self.f_c_hz!r}")
        if not (math.isfinite(self.n_eff) and self.n_eff >= 1.0):
            raise ConfigError(f"n_eff must be >= 1, got {self.n_eff!r}")
        if self.eta_model not in ETA_MODELS:
            raise ConfigError(f"eta_model must be one of {ETA_MODELS}, got {self.eta_model!r}")

    @property
    def lambda0_m(self) -> float:
        return SPEED_OF_LIGHT / self.f_c_hz

    @property
    def lambda_g_m(self) -> float:
        return self.lambda0_m / self.n_eff

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.lambda0_m

    @property
    def k_g(self) -> float:
        return 2.0 * math.pi / self.lambda_g_m

    @property
    def eta(self) -> float:
        """Amplitude in front of exp(-j k0 r) / r (meters, or 1 when normalized)."""
        if self.eta_model == "unit":
            return 1.0
        return self.lambda0_m / (4.0 * math.pi)


def derive_wave_constants(f_c_hz: float, n_eff: float,
                          eta_model: str = "friis") -> WaveConstants:
    return WaveConstants(f_c_hz=f_c_hz, n_eff=n_eff, eta_model=eta_model)


@dataclass(frozen=True)
class LinkBudget:
    """Total transmit power and per-user noise power."""

    p_t_dbm: float = 30.0
    n0_dbm: float = -80.0

    def __post_init__(self) -> None:
        for name in ("p_t_dbm", "n0_dbm"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")

    @property
    def p_t_watt(self) -> float:
        return dbm_to_watt(self.p_t_dbm)

    @property
    def n0_watt(self) -> float:
        return dbm_to_watt(self.n0_dbm)


@dataclass(frozen=True)
class SystemConfig:
    """Everything one run needs: carrier, budget, geometry, splitting, scheme."""

    wave: WaveConstants
    budget: LinkBudget
    n_per_side: int
    l_pa_m: float
    l_in_m: float
    y_f_m: float
    y_b_m: float
    beta: SplitterSetting
    delta_max_m: float
    architecture: str = "center"
    deployment: str = "uniform"

    def __post_init__(self) -> None:
        if int(self.n_per_side) != self.n_per_side or self.n_per_side < 1:
            raise ConfigError(f"n_per_side must be a positive integer, got {self.n_per_side!r}")
        for name in ("l_pa_m", "y_f_m", "y_b_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.l_in_m) and self.l_in_m >= 0.0):
            raise ConfigError(f"l_in_m must be >= 0 and finite, got {self.l_in_m!r}")
        if not (math.isfinite(self.delta_max_m) and self.delta_max_m >= 0.0):
            raise ConfigError(f"delta_max_m must be >= 0, got {self.delta_max_m!r}")
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"architecture must be one of {ARCHITECTURES}, got {self.architecture!r}")
        if self.deployment not in DEPLOYMENTS:
            raise ConfigError(f"deployment must be one of {DEPLOYMENTS}, got {self.deployment!r}")


_FLOAT_KEYS = ("f_c_hz", "n_eff", "l_pa_m", "l_in_factor", "l_in_m", "y_f_m",
               "y_b_m", "p_t_dbm", "n0_dbm", "delta_max_m",
               "beta_ff", "beta_fb", "beta_bf", "beta_bb")
_INT_KEYS = ("n_per_side",)
_STR_KEYS = ("eta_model", "architecture", "deployment")

DEFAULTS: dict[str, object] = {
    "f_c_hz": 28e9,
    "n_eff": 1.4,
    "eta_model": "friis",
    "n_per_side": 8,
    "l_pa_m": 1.0,
    "l_in_factor": 1.25,   # in guided wavelengths; l_in_m overrides when set
    "l_in_m": None,
    "y_f_m": 35.0,
    "y_b_m": 40.0,
    "p_t_dbm": 30.0,
    "n0_dbm": -80.0,
    "delta_max_m": 0.01,
    "beta_ff": 0.5,
    "beta_fb": 0.5,
    "beta_bf": 0.5,
    "beta_bb": 0.5,
    "architecture": "center",
    "deployment": "uniform",
}


def config_from_mapping(mapping: dict[str, object]) -> SystemConfig:
    """Resolve a flat key-value mapping (strings allowed) into a SystemConfig."""
    merged = dict(DEFAULTS)
    for key, value in mapping.items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}")
        merged[key] = value

    def as_float(key: str) -> float:
        raw = merged[key]
        try:
            return float(raw)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ConfigError(f"config key {key!r} needs a number, got {raw!r}") from None

    def as_int(key: str) -> int:
        raw = merged[key]
        try:
            as_f = float(raw)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ConfigError(f"config key {key!r} needs an integer, got {raw!r}") from None
        if as_f != int(as_f):
            raise ConfigError(f"config key {key!r} needs an integer, got {raw!r}")
        return int(as_f)

    def as_str(key: str) -> str:
        return str(merged[key]).strip().lower()

    wave = WaveConstants(f_c_hz=as_float("f_c_hz"), n_eff=as_float("n_eff"),
                         eta_model=as_str("eta_model"))
    budget = LinkBudget(p_t_dbm=as_float("p_t_dbm"), n0_dbm=as_float("n0_dbm"))
    beta = SplitterSetting(ff=as_float("beta_ff"), fb=as_float("beta_fb"),
                           bf=as_float("beta_bf"), bb=as_float("beta_bb"))
    if merged["l_in_m"] is not None:
        l_in = as_float("l_in_m")
    else:
        l_in = as_float("l_in_factor") * wave.lambda_g_m
    return SystemConfig(
        wave=wave,
        budget=budget,
        n_per_side=as_int("n_per_side"),
        l_pa_m=as_float("l_pa_m"),
        l_in_m=l_in,
        y_f_m=as_float("y_f_m"),
        y_b_m=as_float("y_b_m"),
        beta=beta,
        delta_max_m=as_float("delta_max_m"),
        architecture=as_str("architecture"),
        deployment=as_str("deployment"),
    )


def default_config(**overrides) -> SystemConfig:
    """The default desk scenario, with optional flat-key overrides."""
    return config_from_mapping(overrides)


def parse_config_text(text: str) -> SystemConfig:
    mapping: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line.strip()!r}")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate config key {key!r}")
        mapping[key] = value
    return config_from_mapping(mapping)


def load_config(path) -> SystemConfig:
    """Read a flat key-value config file; empty file means all defaults."""
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def config_as_mapping(cfg: SystemConfig) -> dict[str, object]:
    """Flat resolved view of a config (the inverse of config_from_mapping)."""
    return {
        "f_c_hz": cfg.wave.f_c_hz,
        "n_eff": cfg.wave.n_eff,
        "eta_model": cfg.wave.eta_model,
        "n_per_side": cfg.n_per_side,
        "l_pa_m": cfg.l_pa_m,
        "l_in_m": cfg.l_in_m,
        "y_f_m": cfg.y_f_m,
        "y_b_m": cfg.y_b_m,
        "p_t_dbm": cfg.budget.p_t_dbm,
        "n0_dbm": cfg.budget.n0_dbm,
        "delta_max_m": cfg.delta_max_m,
        "beta_ff": cfg.beta.ff,
        "beta_fb": cfg.beta.fb,
        "beta_bf": cfg.beta.bf,
        "beta_bb": cfg.beta.bb,
        "architecture": cfg.architecture,
        "deployment": cfg.deployment,
    }


def dump_config(cfg: SystemConfig) -> str:
    """Serialize with full float precision; load_config round-trips exactly."""
    lines = []
    for key, value in config_as_mapping(cfg).items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def save_config(cfg: SystemConfig, path) -> None:
    Path(path).write_text(dump_config(cfg), encoding="utf-8")


def with_updates(cfg: SystemConfig, **field_updates) -> SystemConfig:
    """dataclasses.replace wrapper so callers do not import dataclasses."""
    return replace(cfg, **field_updates)
