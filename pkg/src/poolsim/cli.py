"""Command-line entry point.

Subcommands: run (execute a sweep, write summary.csv and optional raw
dumps), validate (config check only), presets (list figure presets),
topology (dump one drop's node positions as CSV).

Exit codes: 0 success, 2 usage, 3 config error, 4 runtime error.
Progress goes to stderr; machine-readable output to files/stdout only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .config import ScenarioConfig, config_to_dict, load_config
from .engine import drop_topology
from .errors import ConfigError, PoolSimError
from .harness import (reports_to_csv, rates_to_jsonl, run_campaign,
                      run_scenario, scenario_id)
from .presets import PRESET_NAMES, describe_preset, expand_preset

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3, 4


def _sets_dict(args) -> dict[str, str]:
    out = {}
    for item in args.set or []:
        if "=" not in item:
            print(f"error: --set expects KEY=VALUE, got {item!r}",
                  file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _base_config(args) -> ScenarioConfig:
    overrides = _sets_dict(args)
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = str(args.seed)
    return load_config(args.config, overrides)


def _cmd_validate(args) -> int:
    cfg = _base_config(args)
    print(f"config OK: {scenario_id(cfg)}")
    return EXIT_OK


def _cmd_presets(args) -> int:
    for name in PRESET_NAMES:
        print(describe_preset(name))
    return EXIT_OK


def _cmd_topology(args) -> int:
    cfg = _base_config(args)
    topo = drop_topology(cfg, args.drop)
    text = "\n".join(topo.to_csv_lines()) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_run(args) -> int:
    base = _base_config(args)
    if args.preset:
        sweep = expand_preset(args.preset, base)
    else:
        sweep = [base]
    os.makedirs(args.out, exist_ok=True)
    t0 = time.monotonic()

    done = {"drops": 0}
    total_drops = sum(c.n_drops for c in sweep)

    def progress(cfg, drop):
        done["drops"] += 1
        print(f"\r[{done['drops']}/{total_drops}] drops "
              f"({scenario_id(cfg)})", end="", file=sys.stderr, flush=True)

    reports = run_campaign(sweep, jobs=args.jobs, progress=progress)
    print(file=sys.stderr)
    wall = time.monotonic() - t0

    summary = reports_to_csv(reports)
    with open(os.path.join(args.out, "summary.csv"), "w",
              encoding="utf-8") as fh:
        fh.write(summary)

    if args.dump_raw:
        raw_dir = os.path.join(args.out, "raw")
        os.makedirs(raw_dir, exist_ok=True)
        for cfg in sweep:
            result = run_scenario(cfg, jobs=args.jobs)
            path = os.path.join(raw_dir, f"{scenario_id(cfg)}.jsonl")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(rates_to_jsonl(result))

    if args.dump_topology:
        for cfg in sweep:
            topo = drop_topology(cfg, 0)
            path = os.path.join(args.out,
                                f"topology-{scenario_id(cfg)}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(topo.to_csv_lines()) + "\n")

    import numpy
    meta = {
        "poolsim_version": __version__,
        "numpy_version": numpy.__version__,
        "wall_time_s": round(wall, 3),
        "jobs": args.jobs,
        "preset": args.preset,
        "scenarios": [config_to_dict(c) for c in sweep],
    }
    with open(os.path.join(args.out, "meta.json"), "w",
              encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.out}/summary.csv ({len(reports)} scenarios, "
          f"{wall:.1f}s)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poolsim",
        description="mmWave spectrum pooling system-level simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_seed=True):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override any config key (repeatable)")
        if with_seed:
            p.add_argument("--seed", type=int, help="master seed override")

    p_run = sub.add_parser("run", help="execute a sweep")
    common(p_run)
    p_run.add_argument("--preset", choices=PRESET_NAMES,
                       help="figure preset to expand")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--jobs", type=int,
                       default=max(1, os.cpu_count() or 1),
                       help="parallel drop workers")
    p_run.add_argument("--dump-raw", action="store_true",
                       help="also write per-drop rates as JSON lines")
    p_run.add_argument("--dump-topology", action="store_true",
                       help="also write drop-0 topology CSVs")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="check a config and exit")
    common(p_val)
    p_val.set_defaults(func=_cmd_validate)

    p_pre = sub.add_parser("presets", help="list figure presets")
    p_pre.set_defaults(func=_cmd_presets)

    p_top = sub.add_parser("topology", help="dump one drop's topology CSV")
    common(p_top)
    p_top.add_argument("--drop", type=int, default=0)
    p_top.add_argument("--out", help="output file (default stdout)")
    p_top.set_defaults(func=_cmd_topology)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except SystemExit as e:
        return int(e.code or 0)
    except ConfigError as e:
        for v in e.violations:
            print(f"config error: {v}", file=sys.stderr)
        return EXIT_CONFIG
    except PoolSimError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
