"""Command-line entry point.

Subcommands: ``optimize``, ``eval-q``, ``localize``, ``simulate``, ``alias``.
Angles are degrees on the command line and in files, radians inside.
Exit codes: 0 success, 1 usage or configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .aliasing import AliasSearchError, CollinearLandmarksError, bearing_alias, range_alias, verify_alias
from .confounder import FactorialBudgetError, evaluate_q
from .config import ConfigError, RunConfig, load_config
from .geometry import Constellation, as_points
from .localizer import (
    DegenerateRegistrationError,
    IncompleteObservationError,
    MeasurementSet,
    localize,
)
from .oracle import OracleResolutionError, brute_force_q
from .positioner import optimize
from .simharness import compare, write_outputs

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

RUNTIME_ERRORS = (
    AliasSearchError, CollinearLandmarksError, DegenerateRegistrationError,
    FactorialBudgetError, IncompleteObservationError, OracleResolutionError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_json(path, what):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read {what} {path}: {err}") from None


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.model_copy(update={"seed": args.seed})
    return cfg


def read_constellation(path) -> np.ndarray:
    data = _read_json(path, "constellation")
    points = data.get("points") if isinstance(data, dict) else data
    try:
        return as_points(points)
    except (TypeError, ValueError) as err:
        raise UsageError(f"{path}: points: {err}") from None


def read_measurements(path) -> MeasurementSet:
    """Either ``{"readings": [[x, y], ...]}`` (body frame, meters) or
    ``{"range_bearing": [[range_m, bearing_deg], ...]}``."""
    data = _read_json(path, "measurements")
    try:
        if "readings" in data:
            return MeasurementSet(data["readings"])
        rb = np.asarray(data["range_bearing"], dtype=float).reshape(-1, 2)
        return MeasurementSet.from_range_bearing(rb[:, 0], np.radians(rb[:, 1]))
    except (KeyError, TypeError, ValueError) as err:
        raise UsageError(f"{path}: expected 'readings' or 'range_bearing': {err}") from None


def cmd_optimize(args) -> int:
    cfg = _load(args)
    res = optimize(cfg.geo(), cfg.m, cfg.optimizer_options(), cfg.grid_spec())
    out = {
        "points": res.constellation.points.tolist(),
        "q": res.q,
        "seed": cfg.seed,
        "grid": {"n_theta": cfg.grid.n_theta},
    }
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "constellation.json"
    path.write_text(_dump(out))
    print(path)
    return EXIT_OK


def cmd_eval_q(args) -> int:
    cfg = _load(args)
    pts = read_constellation(args.constellation)
    if pts.shape[0] != cfg.m:
        raise UsageError(f"constellation has {pts.shape[0]} points but config m={cfg.m}")
    geo = cfg.geo()
    res = evaluate_q(pts, geo, cfg.grid_spec())
    out = {
        "q": res.q,
        "worst_theta_deg": None if res.worst_theta is None else math.degrees(res.worst_theta),
        "worst_permutation": list(res.worst_permutation),
    }
    if args.oracle:
        out["oracle_q"] = brute_force_q(pts, geo)
        out["oracle_agrees"] = bool(abs(res.q - out["oracle_q"])
                                    <= max(0.05 * abs(out["oracle_q"]), 1e-3))
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_localize(args) -> int:
    cfg = _load(args)
    pts = read_constellation(args.constellation)
    meas = read_measurements(args.measurements)
    res = localize(meas, pts, cfg.geo(), args.gate)
    sys.stdout.write(_dump({
        "pose": {"x": float(res.pose.position[0]), "y": float(res.pose.position[1]),
                 "yaw_deg": math.degrees(res.pose.yaw)},
        "association": list(res.association),
        "residual_sq": res.residual_sq,
        "accepted": res.accepted,
    }))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _load(args)
    sim = cfg.sim
    optimized = None
    if args.constellation:
        optimized = Constellation(read_constellation(args.constellation))
    comp = compare(
        cfg.geo(), cfg.m, sim.sigmas, sim.n_random_baselines, seed=cfg.seed,
        grid=cfg.grid_spec(), opts=cfg.optimizer_options(), kinds=sim.kinds,
        n_poses=sim.n_poses, n_trials=sim.n_trials,
        gate_threshold=math.inf if sim.gate_threshold is None else sim.gate_threshold,
        optimized=optimized,
    )
    csv_path, json_path = write_outputs(comp, args.out)
    print(csv_path)
    print(json_path)
    return EXIT_OK


def cmd_alias(args) -> int:
    a, b, c = np.asarray(args.points, dtype=float).reshape(3, 2)
    if args.kind == "range":
        pair = range_alias(a, b, c, args.s)
    else:
        pair = bearing_alias(a, b, c, seed=args.seed)
    ok = verify_alias(args.kind, np.stack([a, b, c]), pair)
    sys.stdout.write(_dump({"kind": pair.kind, "p": pair.p.tolist(), "q": pair.q.tolist(),
                            "verified": ok}))
    return EXIT_OK if ok else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="landmark-maximin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("optimize", help="place landmarks to maximize Q")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("eval-q", help="evaluate Q for a constellation")
    p.add_argument("--config", required=True)
    p.add_argument("--constellation", required=True)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force reference")
    p.set_defaults(func=cmd_eval_q)

    p = sub.add_parser("localize", help="estimate pose from unlabelled readings")
    p.add_argument("--config", required=True)
    p.add_argument("--constellation", required=True)
    p.add_argument("--measurements", required=True)
    p.add_argument("--gate", type=float, help="residual gate in m^2 (default: Q/4)")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("simulate", help="optimized vs random placement under noise")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=".")
    p.add_argument("--constellation", help="use this constellation instead of optimizing")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("alias", help="build an aliased position pair for three landmarks")
    p.add_argument("--kind", choices=("range", "bearing"), required=True)
    p.add_argument("--points", type=float, nargs=6, required=True,
                   metavar=("AX", "AY", "BX", "BY", "CX", "CY"))
    p.add_argument("--s", type=float, default=1.0, help="offset for the range construction")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_alias)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UsageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except RUNTIME_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, ArithmeticError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
