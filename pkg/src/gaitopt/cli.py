"""Command line entry points.

    gaitopt optimize <config.yaml> [--seed N] [--budget N] [--out-dir D] [--inference]
    gaitopt replay <run_log.npz>
    gaitopt ablate <config.yaml> [--seed N] [--budget N] [--out-dir D]
    gaitopt plot-data <run_log.npz> [--out-dir D]
"""

import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from .harness import (
    ScenarioConfig,
    ScenarioConfigError,
    ablation_summary,
    export_log,
    export_plot_data,
    export_trials_csv,
    load_log,
    replay_log,
    run_ablation,
    run_scenario,
)


def _load_config(path: str, args) -> ScenarioConfig:
    cfg = ScenarioConfig.from_yaml(path)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.budget is not None:
        overrides["budget"] = args.budget
    if getattr(args, "inference", False):
        overrides["inference"] = True
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
        cfg.validate()
    return cfg


def _cmd_optimize(args) -> int:
    cfg = _load_config(args.config, args)
    report, records = run_scenario(cfg)
    for row in report.rows:
        flag = " ABORTED" if row["aborted"] else ""
        print(
            f"trial {row['trial']:3d}  J={row['objective']:7.3f}  "
            f"CoT={row['cot']:6.3f}  vx={row['mean_vx']:6.3f}  "
            f"c=({row['c_load']:5.1f}, {row['c_slope']:6.3f})  "
            f"beta={row['beta']:6.3f}  {row['kind']}{flag}"
        )
    print("last-5 summary:", json.dumps(report.last5, sort_keys=True))
    print(f"wall time: {report.wall_time_s:.1f} s")
    os.makedirs(args.out_dir, exist_ok=True)
    log_path = os.path.join(args.out_dir, f"run_seed{cfg.seed}.npz")
    export_log(log_path, cfg, report, records)
    export_trials_csv(os.path.join(args.out_dir, f"trials_seed{cfg.seed}.csv"), report)
    print(f"log written to {log_path}")
    return 0


def _cmd_replay(args) -> int:
    ok, message = replay_log(args.log)
    print(("PASS: " if ok else "FAIL: ") + message)
    return 0 if ok else 1


def _cmd_ablate(args) -> int:
    cfg = _load_config(args.config, args)
    seeds = [cfg.seed + k for k in range(args.seeds)]
    results = run_ablation(cfg, seeds)
    summary = ablation_summary(results)
    os.makedirs(args.out_dir, exist_ok=True)
    out_path = os.path.join(args.out_dir, "ablation.json")
    with open(out_path, "w") as fh:
        json.dump({"runs": results, "summary": summary}, fh, indent=2, sort_keys=True)
    for variant in sorted(summary):
        s = summary[variant]
        print(
            f"{variant:13s} median J={s['median_objective']:7.3f}  "
            f"median CoT={s['median_cot']:6.3f}  median vx={s['median_vx']:6.3f}  "
            f"({s['runs']} runs)"
        )
    print(f"details written to {out_path}")
    return 0


def _cmd_plot_data(args) -> int:
    log = load_log(args.log)
    written = export_plot_data(args.out_dir, log)
    for path in written:
        print(path)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gaitopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="run an optimisation scenario")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--inference", action="store_true",
                   help="exploit-only proposals (beta ~ 0)")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("replay", help="re-run a logged scenario and verify bit-exactness")
    p.add_argument("log")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("ablate", help="run all controller variants over several seeds")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seeds", type=int, default=5, help="number of seeds per variant")
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("plot-data", help="export plot-ready per-trial series from a log")
    p.add_argument("log")
    p.add_argument("--out-dir", default="out/plot_data")
    p.set_defaults(func=_cmd_plot_data)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
