"""Sweep runners that build the figure/table datasets and persist them.

Every dataset is a plain list of row tuples under a fixed column schema,
sorted by its key columns, formatted to 15 significant digits, and
accompanied by a JSON manifest holding everything needed to rebuild the
same bytes: the resolved config, the grids, the tool version, and the
numeric backend.  Sweep points are independent pure computations, so
they may run on a thread pool; results are assembled in key order, never
completion order.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from ._version import __version__
from .channel import build_channel
from .config import (ARCHITECTURES, DEPLOYMENTS, LinkBudget, SystemConfig,
                     config_as_mapping, config_from_mapping, with_updates)
from .errors import ConfigError
from .metrics import (asymptotic_gain_targets, capacity, estimate_dof,
                      gain_decomposition, gain_envelope)

POWER_COLUMNS = ("p_dbm", "n_per_side", "architecture", "scheme",
                 "capacity_bits", "ref_slope1_bits", "ref_slope2_bits")
GAINS_COLUMNS = ("n_per_side", "scheme", "g_array", "g_mux",
                 "array_target", "mux_target",
                 "bound_lower_array", "bound_upper_array",
                 "bound_lower_mux", "bound_upper_mux")
CAPACITY_COLUMNS = ("n_per_side", "p_dbm", "architecture", "scheme",
                    "capacity_bits", "g_total",
                    "gain_improvement_db", "capacity_improvement_bits")
TABLE1_COLUMNS = ("architecture", "dof_slope",
                  "array_ratio_lo", "array_ratio_hi", "mux_present")

DEFAULT_POWER_N_VALUES = (1, 2, 4, 8, 16)
DEFAULT_POWER_RANGE_DBM = (0.0, 100.0, 5.0)
DEFAULT_GAINS_RANGE = (1, 2000)
DEFAULT_GAINS_POINTS = 25
DEFAULT_CAPACITY_N_MAX = 100
DEFAULT_CAPACITY_P_DBM = (0.0, 30.0)

_BITS_PER_DB = math.log2(10.0) / 10.0
_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class Dataset:
    """Rows under a fixed schema plus the manifest that reproduces them."""

    kind: str
    columns: tuple
    rows: list
    manifest: dict


def log_int_grid(n_min: int, n_max: int, points: int) -> list[int]:
    """Distinct integers spread geometrically across [n_min, n_max]."""
    if not (1 <= n_min <= n_max):
        raise ConfigError(f"need 1 <= n_min <= n_max, got ({n_min}, {n_max})")
    if points < 1:
        raise ConfigError(f"points must be >= 1, got {points}")
    exps = np.linspace(math.log10(n_min), math.log10(n_max), points)
    vals = np.unique(np.clip(np.round(10.0 ** exps).astype(int), n_min, n_max))
    return [int(v) for v in vals]


TABLE1_RATIO_N_VALUES = tuple(log_int_grid(10, 2000, 8))


def _pmap(fn, items, workers: int | None = None) -> list:
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    max_workers = workers if workers is not None else min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(fn, items))


def _base_manifest(kind: str, cfg: SystemConfig, grid: dict, row_count: int) -> dict:
    return {
        "kind": kind,
        "version": __version__,
        "backend": _kernels.backend(),
        "config": config_as_mapping(cfg),
        "grid": grid,
        "row_count": row_count,
    }


def _check_n_values(n_values) -> list[int]:
    """Canonical n grid: sorted, deduplicated, all >= 1."""
    vals = sorted({int(n) for n in n_values})
    if not vals:
        raise ConfigError("n grid must be nonempty")
    if vals[0] < 1:
        raise ConfigError(f"element counts must be >= 1, got {vals[0]}")
    return vals


def run_power_sweep(cfg: SystemConfig, p_min_dbm: float = DEFAULT_POWER_RANGE_DBM[0],
                    p_max_dbm: float = DEFAULT_POWER_RANGE_DBM[1],
                    p_step_db: float = DEFAULT_POWER_RANGE_DBM[2],
                    n_values=DEFAULT_POWER_N_VALUES,
                    workers: int | None = None) -> Dataset:
    """Capacity versus transmit power, tuned scheme, both architectures.

    Two reference lines with capacity slopes of 1 and 2 bits per
    log2-power step are anchored to each curve at the top of the range.
    """
    if not (p_min_dbm < p_max_dbm):
        raise ConfigError(f"need p_min < p_max, got ({p_min_dbm}, {p_max_dbm})")
    if not (p_step_db > 0.0):
        raise ConfigError(f"p_step must be positive, got {p_step_db}")
    n_vals = _check_n_values(n_values)
    count = int(math.floor((p_max_dbm - p_min_dbm) / p_step_db + 1e-9)) + 1
    p_grid = [p_min_dbm + i * p_step_db for i in range(count)]
    n0 = cfg.budget.n0_dbm

    def curve(task):
        n, arch = task
        cfg_c = with_updates(cfg, n_per_side=n, architecture=arch, deployment="tuned")
        ch = build_channel(cfg_c)
        caps = [capacity(ch, LinkBudget(p_t_dbm=p, n0_dbm=n0)) for p in p_grid]
        top = caps[-1]
        rows = []
        for p, c in zip(p_grid, caps):
            back = (p_grid[-1] - p) * _BITS_PER_DB
            rows.append((p, n, arch, "tuned", c, top - back, top - 2.0 * back))
        return rows

    tasks = [(n, arch) for n in n_vals for arch in ARCHITECTURES]
    rows = [row for chunk in _pmap(curve, tasks, workers) for row in chunk]
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    grid = {"p_min_dbm": float(p_min_dbm), "p_max_dbm": float(p_max_dbm),
            "p_step_db": float(p_step_db), "n_values": n_vals}
    return Dataset("power", POWER_COLUMNS, rows,
                   _base_manifest("power", cfg, grid, len(rows)))


def run_gain_sweep(cfg: SystemConfig, n_min: int = DEFAULT_GAINS_RANGE[0],
                   n_max: int = DEFAULT_GAINS_RANGE[1], scheme: str = "tuned",
                   points: int = DEFAULT_GAINS_POINTS,
                   workers: int | None = None) -> Dataset:
    """Center-fed gain terms versus element count, with targets and bounds."""
    if scheme not in DEPLOYMENTS:
        raise ConfigError(f"scheme must be one of {DEPLOYMENTS}, got {scheme!r}")
    n_vals = log_int_grid(n_min, n_max, points)

    def point(n):
        cfg_n = with_updates(cfg, n_per_side=n, architecture="center", deployment=scheme)
        report = gain_decomposition(build_channel(cfg_n), cfg.budget)
        target = asymptotic_gain_targets(cfg_n, n)
        env = gain_envelope(cfg_n, n)
        return (n, scheme, report.g_array, report.g_mux,
                target.array_target, target.mux_target,
                env.lower_array, env.upper_array, env.lower_mux, env.upper_mux)

    rows = _pmap(point, n_vals, workers)
    rows.sort(key=lambda r: r[0])
    grid = {"n_min": int(n_min), "n_max": int(n_max), "scheme": scheme,
            "points": int(points)}
    return Dataset("gains", GAINS_COLUMNS, rows,
                   _base_manifest("gains", cfg, grid, len(rows)))


def run_capacity_vs_n(cfg: SystemConfig, n_values=None, p_values_dbm=DEFAULT_CAPACITY_P_DBM,
                      workers: int | None = None) -> Dataset:
    """Capacity versus element count for both architectures and schemes.

    Each (n, power, scheme) group carries the center-over-end improvement
    both as a total-gain ratio in dB and as a capacity difference in
    bits; the two rows of a group repeat the shared improvement columns.
    """
    n_vals = _check_n_values(range(1, DEFAULT_CAPACITY_N_MAX + 1)
                             if n_values is None else n_values)
    p_vals = [float(p) for p in p_values_dbm]
    if not p_vals:
        raise ConfigError("power grid must be nonempty")
    n0 = cfg.budget.n0_dbm

    def group(task):
        n, scheme = task
        ch = {arch: build_channel(with_updates(cfg, n_per_side=n, architecture=arch,
                                               deployment=scheme))
              for arch in ARCHITECTURES}
        rows = []
        for p in p_vals:
            budget = LinkBudget(p_t_dbm=p, n0_dbm=n0)
            rep = {arch: gain_decomposition(ch[arch], budget) for arch in ARCHITECTURES}
            gain_db = 10.0 * math.log10(rep["center"].g_total / rep["end"].g_total)
            cap_bits = rep["center"].capacity_bits - rep["end"].capacity_bits
            for arch in ARCHITECTURES:
                rows.append((n, p, arch, scheme, rep[arch].capacity_bits,
                             rep[arch].g_total, gain_db, cap_bits))
        return rows

    tasks = [(n, scheme) for n in n_vals for scheme in DEPLOYMENTS]
    rows = [row for chunk in _pmap(group, tasks, workers) for row in chunk]
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    grid = {"n_values": n_vals, "p_values_dbm": p_vals}
    return Dataset("capacity", CAPACITY_COLUMNS, rows,
                   _base_manifest("capacity", cfg, grid, len(rows)))


def run_table1(cfg: SystemConfig, workers: int | None = None) -> Dataset:
    """Architecture summary: measured power slope, the spread of the
    array-gain ratio against ln^2(n)/n, and whether any multiplexing
    term survives in the determinant."""

    def measure(arch):
        cfg_a = with_updates(cfg, architecture=arch, deployment="tuned")
        dof = estimate_dof(cfg_a)

        def ratio(n):
            cfg_n = with_updates(cfg_a, n_per_side=n)
            g_array = gain_decomposition(build_channel(cfg_n), cfg.budget).g_array
            return g_array * n / (math.log(n) ** 2)

        ratios = _pmap(ratio, TABLE1_RATIO_N_VALUES, workers)
        ch = build_channel(cfg_a)
        frob_sq = float(np.sum(np.abs(ch.h) ** 2))
        mux_present = bool(abs(np.linalg.det(ch.h)) > 1e-6 * frob_sq)
        return (arch, dof.slope, min(ratios), max(ratios), mux_present)

    rows = [measure(arch) for arch in ARCHITECTURES]
    rows.sort(key=lambda r: r[0])
    grid = {"ratio_n_values": list(TABLE1_RATIO_N_VALUES)}
    return Dataset("table1", TABLE1_COLUMNS, rows,
                   _base_manifest("table1", cfg, grid, len(rows)))


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ConfigError(f"refusing to serialize non-finite value {value!r}")
        return "%.15g" % value
    return str(value)


def emit(dataset: Dataset, out_dir, fmt: str = "csv") -> tuple[list[Path], dict]:
    """Write the dataset and its manifest; returns (paths, manifest)."""
    if fmt not in _FORMATS:
        raise ConfigError(f"format must be one of {_FORMATS}, got {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data_path = out / f"{dataset.kind}.{fmt}"
    if fmt == "csv":
        lines = [",".join(dataset.columns)]
        lines.extend(",".join(_format_cell(v) for v in row) for row in dataset.rows)
        data_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        payload = {"columns": list(dataset.columns),
                   "rows": [[_format_cell(v) for v in row] for row in dataset.rows]}
        data_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    manifest = dict(dataset.manifest)
    manifest["format"] = fmt
    manifest["outputs"] = [data_path.name]
    manifest_path = out / f"{dataset.kind}.manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                             encoding="utf-8")
    return [data_path, manifest_path], manifest


def rebuild_from_manifest(manifest: dict, workers: int | None = None) -> Dataset:
    """Recompute the dataset a manifest describes (same grids, same config)."""
    cfg = config_from_mapping(manifest["config"])
    kind = manifest.get("kind")
    grid = manifest.get("grid", {})
    if kind == "power":
        return run_power_sweep(cfg, grid["p_min_dbm"], grid["p_max_dbm"],
                               grid["p_step_db"], grid["n_values"], workers=workers)
    if kind == "gains":
        return run_gain_sweep(cfg, grid["n_min"], grid["n_max"], grid["scheme"],
                              grid["points"], workers=workers)
    if kind == "capacity":
        return run_capacity_vs_n(cfg, grid["n_values"], grid["p_values_dbm"],
                                 workers=workers)
    if kind == "table1":
        return run_table1(cfg, workers=workers)
    raise ConfigError(f"unknown dataset kind {kind!r} in manifest")


def rerun_from_manifest(manifest_path, out_dir=None,
                        workers: int | None = None) -> tuple[list[Path], dict]:
    """Re-emit a dataset from its manifest file; byte-identical by contract."""
    path = Path(manifest_path)
    manifest = json.loads(path.read_text(encoding="utf-8"))
    dataset = rebuild_from_manifest(manifest, workers=workers)
    target = Path(out_dir) if out_dir is not None else path.parent
    return emit(dataset, target, fmt=manifest.get("format", "csv"))


def run_all(cfg: SystemConfig, out_dir, fmt: str = "csv",
            workers: int | None = None) -> list[Path]:
    """The default bundle: all three figure datasets plus the summary table."""
    paths: list[Path] = []
    for dataset in (run_power_sweep(cfg, workers=workers),
                    run_gain_sweep(cfg, workers=workers),
                    run_capacity_vs_n(cfg, workers=workers),
                    run_table1(cfg, workers=workers)):
        written, _ = emit(dataset, out_dir, fmt=fmt)
        paths.extend(written)
    return paths
