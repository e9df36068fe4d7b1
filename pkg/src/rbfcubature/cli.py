"""
Command-line harness: single rules and parameter sweeps written as CSV/JSON.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .cubature import RBFSpace, stability_report
from .experiments import (
    STABILITY_COLUMNS,
    SweepConfig,
    bayona_sweep,
    convergence,
    error_sweep,
    stability_sweep,
)
from .linsolve import SVD_SIZE_CAP
from .moments import shape_parameters
from .pointsets import PointSet

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

COMMANDS = ("weights", "stability-sweep", "error-sweep", "convergence", "bayona")

# flag name -> (SweepConfig field, type)
_FLAGS = {
    "kernel": str, "k": int, "degree": int, "points": str, "n": int, "seed": int,
    "domain": str, "eps_min": float, "eps_max": float, "eps_num": int,
    "shape_strategy": str, "trials": int, "noise": float, "function": str,
    "jobs": int, "lebesgue_density": int, "out": str,
}


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return str(v)


def write_csv(path, rows, columns=None) -> None:
    columns = columns or list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])


def write_sidecar(out: Path, cfg: SweepConfig, command: str) -> None:
    meta = {"command": command, "config": cfg.to_dict()}
    Path(str(out) + ".config.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbfcubature", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with config fields; flags override it")
        p.add_argument("--kernel", help="gauss | wendland[:D:k] | phs:<odd> | tps:<even>")
        p.add_argument("--k", type=int, help="smoothness (wendland) or exponent (phs/tps)")
        p.add_argument("--degree", type=int)
        p.add_argument("--points", help="equidistant | halton | random")
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--domain", help='"a,b" or "a,b,c,d"')
        p.add_argument("--eps-min", type=float)
        p.add_argument("--eps-max", type=float)
        p.add_argument("--eps-num", type=int)
        p.add_argument("--shape-strategy", choices=["constant", "boundary-halved"])
        p.add_argument("--trials", type=int)
        p.add_argument("--noise", type=float)
        p.add_argument("--function", help="genz1..genz4 | runge")
        p.add_argument("--jobs", type=int)
        p.add_argument("--lebesgue-density", type=int)
        p.add_argument("--no-lebesgue", action="store_true", help="skip the Lebesgue grid estimate")
        p.add_argument("--n-list", help="comma-separated point counts")
        p.add_argument("--out")
        if name == "weights":
            p.add_argument("--points-file", help="CSV with header x or x,y (overrides --points/--n)")
    return parser


def resolve_config(args) -> SweepConfig:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        unknown = set(data) - set(SweepConfig.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for name in _FLAGS:
        v = getattr(args, name, None)
        if v is not None:
            data[name] = v
    if args.n_list:
        data["n_list"] = [int(t) for t in args.n_list.split(",")]
    if args.no_lebesgue:
        data["lebesgue"] = False
    cfg = SweepConfig(**data)
    if cfg.out is None:
        cfg.out = args.command.replace("-", "_") + (".json" if args.command == "weights" else ".csv")
    return cfg.validate()


def cmd_weights(cfg: SweepConfig, points_file=None) -> dict:
    kernel = cfg.resolve_kernel()
    ps = PointSet.from_csv(points_file, cfg.rect()) if points_file else cfg.pointset()
    shapes = shape_parameters(ps, cfg.eps_min, cfg.shape_strategy, kernel)
    space = RBFSpace(kernel, shapes, ps, cfg.degree)
    rule = space.weights()
    leb = space.lebesgue(cfg.lebesgue_density) if cfg.lebesgue else float("nan")
    cond = space.cond() if space.N + space.K <= SVD_SIZE_CAP else float("nan")
    report = stability_report(rule, leb, cond)
    out = {**rule.to_dict(), **report.to_dict(), "epsilon": cfg.eps_min}
    Path(cfg.out).write_text(json.dumps(out, indent=2) + "\n")
    return out


def cmd_stability_sweep(cfg: SweepConfig) -> list[dict]:
    rows = stability_sweep(cfg)
    write_csv(cfg.out, rows, STABILITY_COLUMNS)
    return rows


def aggregate_path(out) -> Path:
    p = Path(out)
    return p.with_name(p.stem + "_aggregate" + p.suffix)


def cmd_error_sweep(cfg: SweepConfig):
    rows, agg = error_sweep(cfg)
    cols = ["epsilon", "trial", "abs_error", "sum_abs_weights", "is_stable", "status"]
    acols = ["epsilon", "median_abs_error", "sum_abs_weights", "is_stable", "status"]
    if cfg.noise > 0:
        cols.insert(3, "noisy_abs_error")
        acols.insert(2, "median_noisy_abs_error")
    write_csv(cfg.out, rows, cols)
    write_csv(aggregate_path(cfg.out), agg, acols)
    return rows, agg


def cmd_convergence(cfg: SweepConfig) -> list[dict]:
    rows = convergence(cfg)
    write_csv(cfg.out, rows)
    return rows


def cmd_bayona(cfg: SweepConfig) -> list[dict]:
    rows = bayona_sweep(cfg)
    write_csv(cfg.out, rows)
    return rows


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "weights":
            cmd_weights(cfg, args.points_file)
        else:
            {"stability-sweep": cmd_stability_sweep, "error-sweep": cmd_error_sweep,
             "convergence": cmd_convergence, "bayona": cmd_bayona}[args.command](cfg)
        write_sidecar(Path(cfg.out), cfg, args.command)
    except np.linalg.LinAlgError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
