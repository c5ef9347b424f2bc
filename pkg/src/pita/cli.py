"""Command-line entry point.

Settings are resolved in increasing precedence: preset, config file,
--set overrides, then the dedicated flags (--threads, --seed, --out).
Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 file or I/O error.
"""
from __future__ import annotations

import argparse
import sys

from .errors import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, EXIT_OK, ConfigError, NumericsError
from .harness import (
    PRESETS,
    build_config,
    cmd_euler_study,
    cmd_exact,
    cmd_optimize_q,
    cmd_parareal,
    read_config_file,
)

_COMMANDS = {
    "exact": cmd_exact,
    "euler-study": cmd_euler_study,
    "parareal": cmd_parareal,
    "optimize-q": cmd_optimize_q,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pita",
        description="Parallel-in-time ODE experiments for linear systems "
                    "y' = Ay + Bu with sequence-accelerated extrapolation.",
        epilog="Config keys (key=value, via --config file or --set): "
               "A, B (matrices, rows separated by ';'), u, y0 (vectors), "
               "t0 (default 0), tf, slices, mode (euler-study, "
               "parareal-classic, parareal-semi; default parareal-semi), "
               "iterations (default 8), delta_base (default 100), "
               "delta_step (default 1), delta_low (default 0.5), "
               "delta_high (default 1.5), coarse_substeps (default 1), "
               "fine_step (classic mode only), eps_k (default 4), "
               "eps_n (default 2), rho (default 1), aux_offset (default 0), "
               "aux_form (literal or summed; default literal), "
               "guard (default 1e-12), h_tiny (default 1e-5), "
               "refresh_interval (default: slices, one calibration), "
               "anneal_steps (default 2000), anneal_cooling (default 0.95), "
               "anneal_scale (default 0.5), anneal_qmin (default 1e-10), "
               "anneal_qmax (default 100), anneal_temp (default auto), "
               "ladder (default 1,2,4,8), report_scale (default 4), "
               "seed (default 0), threads (default: cpu count), "
               "out (default ./out).",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS),
                        help="exact: closed-form trajectory; euler-study: "
                             "fixed-step Euler refinement sweep; parareal: "
                             "full solve + calibration + extrapolation; "
                             "optimize-q: calibration on the first slice only")
    parser.add_argument("--config", metavar="FILE",
                        help="flat key=value config file ('#' comments allowed)")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="named built-in configuration")
    parser.add_argument("--set", metavar="KEY=VALUE", action="append",
                        default=[], dest="overrides",
                        help="override a single config key (repeatable)")
    parser.add_argument("--threads", type=int, metavar="N",
                        help="worker threads for slice-parallel work")
    parser.add_argument("--seed", type=int, metavar="S",
                        help="random seed for the annealing calibration")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    return parser


def resolve_mapping(args: argparse.Namespace) -> dict:
    mapping: dict = {}
    if args.preset:
        mapping.update(PRESETS[args.preset])
    if args.config:
        mapping.update(read_config_file(args.config))
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected KEY=VALUE")
        key, _, value = item.partition("=")
        mapping[key.strip()] = value.strip()
    if args.threads is not None:
        mapping["threads"] = str(args.threads)
    if args.seed is not None:
        mapping["seed"] = str(args.seed)
    if args.out is not None:
        mapping["out"] = str(args.out)
    return mapping


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        mapping = resolve_mapping(args)
        cfg = build_config(mapping, args.command)
        paths = _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
