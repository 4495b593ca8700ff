"""Command-line front end: config loading, sweep runs, dataset persistence.

Exit codes: 0 success, 1 validation/usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .config import default_config, load_config
from .errors import ConfigError
from .sweeps import (DEFAULT_CAPACITY_N_MAX, DEFAULT_CAPACITY_P_DBM,
                     DEFAULT_GAINS_POINTS, DEFAULT_GAINS_RANGE,
                     DEFAULT_POWER_N_VALUES, DEFAULT_POWER_RANGE_DBM,
                     emit, run_all, run_capacity_vs_n, run_gain_sweep,
                     run_power_sweep, run_table1)
from .tuning import align_end_fed, align_side


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit 2; this project reserves 2 for I/O."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from None


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}") from None


def _add_io_options(parser) -> None:
    parser.add_argument("--config", metavar="FILE", default=None,
                        help="key=value config file (defaults apply when omitted)")
    parser.add_argument("--out", metavar="DIR", default="out",
                        help="output directory (default: ./out)")
    parser.add_argument("--format", metavar="FMT", default="csv",
                        help="dataset format: csv or json (default: csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cpass",
                     description="Simulate center-fed and end-fed pinching-antenna "
                                 "links and emit the sweep datasets.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    run_p = sub.add_parser("run", help="run every sweep with default grids")
    _add_io_options(run_p)

    sweep_p = sub.add_parser("sweep", help="run one sweep")
    sweep_sub = sweep_p.add_subparsers(dest="sweep_kind", required=True, metavar="KIND")

    power_p = sweep_sub.add_parser("power", help="capacity versus transmit power")
    _add_io_options(power_p)
    power_p.add_argument("--p-min", type=float, default=DEFAULT_POWER_RANGE_DBM[0],
                         help="lowest transmit power in dBm")
    power_p.add_argument("--p-max", type=float, default=DEFAULT_POWER_RANGE_DBM[1],
                         help="highest transmit power in dBm")
    power_p.add_argument("--p-step", type=float, default=DEFAULT_POWER_RANGE_DBM[2],
                         help="grid step in dB")
    power_p.add_argument("--n", default=",".join(str(n) for n in DEFAULT_POWER_N_VALUES),
                         help="comma-separated per-side element counts")

    gains_p = sweep_sub.add_parser("gains", help="gain terms versus element count")
    _add_io_options(gains_p)
    gains_p.add_argument("--n-min", type=int, default=DEFAULT_GAINS_RANGE[0])
    gains_p.add_argument("--n-max", type=int, default=DEFAULT_GAINS_RANGE[1])
    gains_p.add_argument("--scheme", default="tuned",
                         help="deployment scheme: uniform or tuned")
    gains_p.add_argument("--points", type=int, default=DEFAULT_GAINS_POINTS,
                         help="number of geometric grid points")

    cap_p = sweep_sub.add_parser("capacity", help="capacity versus element count")
    _add_io_options(cap_p)
    cap_p.add_argument("--n-max", type=int, default=DEFAULT_CAPACITY_N_MAX,
                       help="sweep n from 1 to this count")
    cap_p.add_argument("--p", default=",".join("%g" % p for p in DEFAULT_CAPACITY_P_DBM),
                       help="comma-separated transmit powers in dBm")

    table_p = sub.add_parser("table1", help="architecture summary table")
    _add_io_options(table_p)

    tune_p = sub.add_parser("tune", help="print phase-alignment offsets")
    tune_p.add_argument("--config", metavar="FILE", default=None)
    tune_p.add_argument("--side", default="f", help="element group: f or b")
    tune_p.add_argument("--print-offsets", action="store_true",
                        help="print one offset (meters) per line")
    return parser


def _load_cfg(args):
    return load_config(args.config) if args.config else default_config()


def _emit_and_report(dataset, args) -> None:
    paths, _ = emit(dataset, args.out, fmt=args.format)
    for path in paths:
        print(f"wrote {path}")


def _cmd_tune(args) -> None:
    cfg = _load_cfg(args)
    if cfg.architecture == "center":
        result = align_side(cfg, side=args.side)
    else:
        fwd, bwd = align_end_fed(cfg)
        if args.side not in ("f", "b"):
            raise ConfigError(f"side must be 'f' or 'b', got {args.side!r}")
        result = fwd if args.side == "f" else bwd
    if args.print_offsets:
        for offset in result.offsets:
            print("%.15g" % offset)
    else:
        print(f"side={args.side} target_phase={result.target_phase:.15g} rad "
              f"worst_residual={result.worst_residual:.3e} rad "
              f"offsets={len(result.offsets)}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # -h or usage error; argparse already printed
        return int(exc.code or 0)
    try:
        if args.command == "run":
            cfg = _load_cfg(args)
            for path in run_all(cfg, args.out, fmt=args.format):
                print(f"wrote {path}")
        elif args.command == "sweep":
            cfg = _load_cfg(args)
            if args.sweep_kind == "power":
                dataset = run_power_sweep(cfg, args.p_min, args.p_max, args.p_step,
                                          _parse_int_list(args.n))
            elif args.sweep_kind == "gains":
                dataset = run_gain_sweep(cfg, args.n_min, args.n_max,
                                         args.scheme, args.points)
            else:
                dataset = run_capacity_vs_n(cfg, range(1, args.n_max + 1),
                                            _parse_float_list(args.p))
            _emit_and_report(dataset, args)
        elif args.command == "table1":
            cfg = _load_cfg(args)
            _emit_and_report(run_table1(cfg), args)
        else:
            _cmd_tune(args)
    except ValueError as exc:  # ConfigError and friends all derive from ValueError
        print(f"cpass: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cpass: i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
