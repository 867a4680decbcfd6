"""Command-line front end.

Examples::

    cpbnr --list-presets
    cpbnr --preset fig2a --out fig2a.csv --metrics fig2a.json
    cpbnr --preset fig5c --gauge direct --threads 4 --out fig5c.csv
    cpbnr --preset fig3a --dump-config > my.cfg && cpbnr --config my.cfg
    cpbnr --preset fig3a --oracle-check 12 --t-end 5

Exit status: 0 on success, 2 for bad configuration, 3 when integration fails.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis, oracle
from .dynamics import Gauge, propagate
from .integrators import IntegrationError
from .model import ModulationKind, UnphysicalModulationError
from .scenario import (
    PRESETS,
    ConfigError,
    ScenarioConfig,
    dump_config,
    list_presets,
    parse_config,
    with_overrides,
)
from .state import CoherentSpec, ConfigurationError, coherent_init

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3

CSV_HEADER = "t,inversion,entropy,norm2,mean_n"
ORACLE_DT = 1e-3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cpbnr",
        description="Simulate the dissipative Kerr Jaynes-Cummings dynamics of a "
        "Cooper pair box coupled to a nanomechanical resonator.",
    )
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--preset", metavar="NAME", help="figure preset (see --list-presets)")
    src.add_argument("--config", metavar="PATH", help="key = value scenario file")
    ap.add_argument("--list-presets", action="store_true", help="print the preset table and exit")
    ap.add_argument("--out", metavar="PATH", help="trajectory CSV (default: stdout)")
    ap.add_argument("--metrics", metavar="PATH", help="write summary metrics as JSON")
    ap.add_argument("--plot-script", metavar="PATH", help="write a gnuplot script for the CSV")
    ap.add_argument("--t-end", type=float, metavar="X")
    ap.add_argument("--stride", type=float, metavar="X", help="output sampling interval")
    ap.add_argument("--n-max", type=int, metavar="N", help="Fock truncation (default: adaptive)")
    ap.add_argument("--rtol", type=float)
    ap.add_argument("--atol", type=float)
    ap.add_argument(
        "--renormalize-entropy",
        action="store_true",
        default=None,
        help="divide the reduced matrix by the surviving norm before taking the entropy",
    )
    ap.add_argument("--gauge", choices=[g.value for g in Gauge])
    ap.add_argument("--method", choices=["dopri5", "magnus4"])
    ap.add_argument("--threads", type=int, metavar="N")
    ap.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
    ap.add_argument(
        "--oracle-check",
        type=int,
        metavar="N_MAX",
        help="compare the block solver with the dense propagator at truncation N_MAX",
    )
    return ap


_FLAG_KEYS = {
    "t_end": "t_end",
    "stride": "stride",
    "n_max": "n_max",
    "rtol": "rtol",
    "atol": "atol",
    "renormalize_entropy": "entropy_renormalize",
    "gauge": "gauge",
    "method": "method",
    "threads": "threads",
    "out": "out",
    "metrics": "metrics",
    "plot_script": "plot_script",
}


def resolve_config(args) -> ScenarioConfig:
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}; try --list-presets")
        cfg = PRESETS[args.preset].config
    elif args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        cfg = parse_config(text)
    else:
        raise ConfigError("one of --preset or --config is required")

    overrides = {}
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest)
        if value is not None:
            overrides[key] = Gauge(value) if key == "gauge" else value
    try:
        return with_overrides(cfg, overrides)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def initial_state(cfg: ScenarioConfig):
    return coherent_init(CoherentSpec(cfg.alpha, cfg.tail_tolerance), cfg.n_max)


def write_csv(record, stream) -> None:
    table = np.column_stack(
        [record.times, record.inversion, record.entropy, record.norm2, record.mean_n]
    )
    np.savetxt(stream, table, fmt="%.12g", delimiter=",", header=CSV_HEADER, comments="")


def plot_script(csv_path: str) -> str:
    return "\n".join(
        [
            "# gnuplot script; run with: gnuplot -p <this file>",
            "set datafile separator ','",
            "set key autotitle columnhead",
            "set xlabel 'lambda_0 t'",
            "set multiplot layout 2,1",
            "set ylabel 'I(t)'",
            f"plot '{csv_path}' using 't':'inversion' with lines",
            "set ylabel 'S_NR(t)'",
            f"plot '{csv_path}' using 't':'entropy' with lines, log(2) dashtype 2 title 'ln 2'",
            "unset multiplot",
            "",
        ]
    )


def _json_safe(metrics: dict) -> dict:
    return {k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in metrics.items()}


def oracle_check(cfg: ScenarioConfig, n_max: int) -> float:
    """Largest per-amplitude deviation between block solver and dense oracle."""
    s0 = coherent_init(CoherentSpec(cfg.alpha, cfg.tail_tolerance), n_max)
    t_end = cfg.integrator.t_end
    steps = 1 if cfg.law.kind is ModulationKind.CONSTANT else max(1, math.ceil(t_end / ORACLE_DT))
    record = propagate(s0, cfg.params, cfg.law, cfg.integrator)
    dense = oracle.propagate_dense(s0, cfg.params, cfg.law, t_end, steps)
    return float(np.max(np.abs(oracle.to_vector(dense) - oracle.to_vector(record.final_state))))


def run(cfg: ScenarioConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    s0 = initial_state(cfg)
    record = propagate(s0, cfg.params, cfg.law, cfg.integrator, cfg.entropy_renormalize)
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_csv(record, fh)
    else:
        write_csv(record, stdout)
    metrics = _json_safe(analysis.summarize(record))
    if cfg.metrics:
        with open(cfg.metrics, "w") as fh:
            json.dump(metrics, fh, indent=2)
            fh.write("\n")
    if cfg.plot_script:
        with open(cfg.plot_script, "w") as fh:
            fh.write(plot_script(cfg.out or "trajectory.csv"))
    for key, value in metrics.items():
        print(f"# {key}: {value}", file=stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_presets:
        print(list_presets())
        return EXIT_OK
    try:
        cfg = resolve_config(args)
        if args.dump_config:
            sys.stdout.write(dump_config(cfg))
            return EXIT_OK
        print("# effective configuration", file=sys.stderr)
        for line in dump_config(cfg).splitlines():
            print(f"#   {line}", file=sys.stderr)
        if args.oracle_check is not None:
            dev = oracle_check(cfg, args.oracle_check)
            print(f"max per-amplitude deviation (n_max={args.oracle_check}): {dev:.3e}")
            return EXIT_OK
        return run(cfg)
    except (IntegrationError, UnphysicalModulationError) as exc:
        print(f"cpbnr: integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION
    except ValueError as exc:  # ConfigError, ConfigurationError and invalid parameters
        print(f"cpbnr: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

if __name__ == "__main__":
    sys.exit(main())
