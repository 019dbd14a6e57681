"""Command-line entry point ``capregion``.

Exit status: 0 on success, 1 if ``selfcheck`` finds a failure, 2 on an
invalid configuration, 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import __version__
from .config import ConfigError, load_config
from .csvio import write_region_csv, write_sweep_csv
from .errors import CapRegionError
from .pulse import PulseSpec
from .region import (DEFAULT_VARIANTS, RegionRequest, comparison_suite,
                     curve_label, region_deviation, tau_sweep, trace_boundary)
from .selfcheck import run_selfcheck
from .toeplitz import ChannelSpec

FIG1_N = 20
FIG2_VARIANT = (0.9, 0.25)
FIG2_N = 20
SNR_DB = 20.0


def _summary(label: str, region) -> str:
    r1, r2 = region.endpoints
    return (f"{label}: max_sum_rate={region.max_sum_rate:.6f} R1_max={r1:.6f} "
            f"R2_max={r2:.6f} bits/T")


def _out(args, name: str) -> str:
    return name if os.path.isabs(name) else os.path.join(args.out_dir, name)


def fig2_taus(delta_T: float):
    """Grid ``{0, 0.1, ..., 0.9} delta T`` together with ``delta T / 2``."""
    taus = sorted({round(i / 10, 12) * delta_T for i in range(10)} | {0.5 * delta_T})
    return taus


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.dry_run:
        print(f"config {args.config} is valid ({cfg.kind}, {cfg.mode}); dry run, nothing written")
        return 0
    from .plotting import plot_regions, plot_tau_sweep

    csv_path = _out(args, cfg.csv_path)
    if cfg.kind == "region":
        req = RegionRequest(cfg.pulse, cfg.chan, cfg.mode, cfg.weight_count,
                            comparison=cfg.comparison, grid_m=cfg.grid_m,
                            n_random=cfg.n_random, allow_floor=cfg.allow_floor, seed=cfg.seed)
        region = trace_boundary(req, threads=args.threads)
        n = cfg.chan.n_symbols if cfg.mode == "time" else None
        curves = {curve_label(cfg.mode, cfg.pulse.delta, cfg.pulse.beta, n): region}
        if region.baseline is not None:
            curves[f"{cfg.comparison}-baseline"] = region.baseline
        write_region_csv(csv_path, curves, cfg.precision)
        for label, reg in curves.items():
            print(_summary(label, reg))
        print(f"max turning angle: {region.metadata['max_turning_angle_deg']:.3f} deg")
        if cfg.svg_path:
            plot_regions(curves, _out(args, cfg.svg_path))
    elif cfg.kind == "sweep":
        sweep = tau_sweep(cfg.pulse, cfg.chan, cfg.tau_list, mode=cfg.mode)
        write_sweep_csv(csv_path, sweep.rows, sweep.argmax, cfg.precision)
        for tau, rate in sweep.rows:
            print(f"tau={tau:.6g}: sum_rate={rate:.6f} bits/T")
        print(f"argmax tau={sweep.best_tau:.6g}")
        if cfg.svg_path:
            plot_tau_sweep(sweep.rows, _out(args, cfg.svg_path), cfg.pulse.symbol_interval)
    else:
        ref_req = RegionRequest(cfg.pulse, cfg.chan, "frequency", cfg.weight_count,
                                grid_m=cfg.grid_m, n_random=cfg.n_random)
        reference = trace_boundary(ref_req, threads=args.threads)
        curves = {curve_label("frequency", cfg.pulse.delta, cfg.pulse.beta): reference}
        for n in cfg.n_list:
            req = RegionRequest(cfg.pulse, replace(cfg.chan, n_symbols=n), "time", cfg.weight_count,
                                n_random=cfg.n_random, allow_floor=cfg.allow_floor)
            region = trace_boundary(req, threads=args.threads)
            curves[curve_label("time", cfg.pulse.delta, cfg.pulse.beta, n)] = region
            print(f"N={n}: max relative ray deviation={region_deviation(region, reference):.6e}")
        write_region_csv(csv_path, curves, cfg.precision)
        for label, reg in curves.items():
            print(_summary(label, reg))
        if cfg.svg_path:
            plot_regions(curves, _out(args, cfg.svg_path))
    print(f"wrote {csv_path}")
    return 0


def cmd_fig1(args) -> int:
    chan = ChannelSpec.from_snr(SNR_DB, 0.0, FIG1_N)
    if args.dry_run:
        print(f"fig1: {2 * len(DEFAULT_VARIANTS)} region curves at N={FIG1_N}, SNR {SNR_DB:g} dB; "
              "dry run, nothing written")
        return 0
    from .plotting import plot_regions

    table = comparison_suite(DEFAULT_VARIANTS, chan, FIG1_N, threads=args.threads)
    for label, region in table.regions.items():
        kind, rest = label.split("(", 1)
        d, b = rest.split(",")[:2]
        name = f"fig1_{kind}_delta{d}_beta{b}.csv"
        write_region_csv(_out(args, name), {label: region})
        print(_summary(label, region))
    for check, ok in table.checks.items():
        print(f"check {check}: {'PASS' if ok else 'FAIL'}")
    plot_regions(table.regions, _out(args, "fig1.svg"),
                 title=f"N = {FIG1_N}, SNR {SNR_DB:g} dB, tau = delta T / 2")
    print(f"wrote {len(table.regions)} CSV files and fig1.svg to {args.out_dir}")
    return 0


def cmd_fig2(args) -> int:
    delta, beta = FIG2_VARIANT
    pulse = PulseSpec(beta=beta, delta=delta)
    taus = fig2_taus(pulse.symbol_interval)
    if args.dry_run:
        print(f"fig2: tau sweep over {len(taus)} delays at N={FIG2_N}; dry run, nothing written")
        return 0
    from .plotting import plot_tau_sweep

    chan = ChannelSpec.from_snr(SNR_DB, 0.0, FIG2_N)
    sweep = tau_sweep(pulse, chan, taus)
    write_sweep_csv(_out(args, "fig2_sweep.csv"), sweep.rows, sweep.argmax)
    for tau, rate in sweep.rows:
        print(f"tau={tau / pulse.symbol_interval:.2f} dT: sum_rate={rate:.9f} bits/T")
    print(f"argmax tau={sweep.best_tau:.6g} ({sweep.best_tau / pulse.symbol_interval:.2f} dT)")
    plot_tau_sweep(sweep.rows, _out(args, "fig2.svg"), pulse.symbol_interval,
                   title=f"(delta, beta) = ({delta:g}, {beta:g}), N = {FIG2_N}")
    return 0


def cmd_selfcheck(args) -> int:
    return 0 if run_selfcheck() else 1


def _positive_int(text):
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=1,
                        help="worker threads for boundary weights (default 1)")
    common.add_argument("--out-dir", default=".", help="directory for CSV and SVG output")
    common.add_argument("--dry-run", action="store_true",
                        help="validate inputs and print the plan without writing files")

    parser = argparse.ArgumentParser(
        prog="capregion",
        description="Capacity regions of the two-user asynchronous MAC with FTN signalling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", parents=[common], help="run a scenario file (TOML)")
    p_run.add_argument("config", help="scenario configuration file")
    p_run.set_defaults(func=cmd_run)
    sub.add_parser("fig1", parents=[common], help="region curves for the default variants"
                   ).set_defaults(func=cmd_fig1)
    sub.add_parser("fig2", parents=[common], help="sum rate against delay difference"
                   ).set_defaults(func=cmd_fig2)
    sub.add_parser("selfcheck", parents=[common], help="fast invariant checks"
                   ).set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except CapRegionError as exc:
        print(f"error: numerical failure in {exc.module}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
