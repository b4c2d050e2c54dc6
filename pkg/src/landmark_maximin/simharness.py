"""Monte-Carlo evaluation: perturb landmark positions, localize from the
resulting unlabelled readings, and collect pose-error statistics.

Two perturbation regimes are supported. ``random`` draws a fresh Gaussian
offset for every landmark at every pose; ``non_stochastic`` draws one
offset per landmark per trial and keeps it for every pose, which models
landmarks parked slightly off their intended spots.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .confounder import GridSpec, evaluate_q
from .geometry import Constellation, GeometryConfig, PlanarPose, as_points
from .localizer import MeasurementSet, localize, measure, pose_error
from .positioner import OptimizerOptions, initialize, optimize

NoiseKind = Literal["random", "non_stochastic"]
NOISE_KINDS = ("random", "non_stochastic")

CSV_COLUMNS = [
    "sigma", "kind", "constellation_id", "xy_err_mean", "xy_err_std",
    "yaw_err_mean", "yaw_err_std", "n_accepted", "n_total",
    "reduction_xy_mean_pct", "reduction_yaw_mean_pct", "yaw_abs_err_mean",
]


@dataclass(frozen=True)
class NoiseModel:
    kind: NoiseKind = "random"
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError("sigma must be >= 0")


@dataclass(frozen=True)
class TrialConfig:
    constellation: Constellation
    geo: GeometryConfig
    noise: NoiseModel
    n_poses: int = 200
    pose_seed: int = 0

    def __post_init__(self):
        if self.n_poses < 10:
            raise ValueError("n_poses must be >= 10")


@dataclass(frozen=True)
class ErrorStats:
    """Errors over accepted estimates; yaw errors are signed (estimate - truth)."""

    xy_err_mean: float
    xy_err_std: float
    yaw_err_mean: float
    yaw_err_std: float
    n_accepted: int
    n_total: int
    yaw_abs_err_mean: float = float("nan")


def sample_poses(geo: GeometryConfig, n: int, rng: np.random.Generator) -> list[PlanarPose]:
    """Uniform positions over ``F_a`` and uniform yaw."""
    r = geo.f_a.radius * np.sqrt(rng.uniform(size=n))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    yaw = rng.uniform(-math.pi, math.pi, size=n)
    pos = geo.center + np.stack([r * np.cos(phi), r * np.sin(phi)], axis=-1)
    return [PlanarPose(p, y) for p, y in zip(pos, yaw)]


def trial_errors(cfg: TrialConfig, gate_threshold: Optional[float] = math.inf,
                 on_perturbation: Optional[Callable[[int, np.ndarray], None]] = None):
    """Per-pose ``(xy_errors, yaw_errors)`` over accepted estimates.

    See :func:`run_trial` for the arguments.
    """
    pts = cfg.constellation.points
    m = pts.shape[0]
    root = np.random.SeedSequence([int(cfg.pose_seed), int(cfg.noise.seed)])
    pose_ss, noise_ss, shuffle_ss = root.spawn(3)
    poses = sample_poses(cfg.geo, cfg.n_poses, np.random.default_rng(pose_ss))
    noise_rng = np.random.default_rng(noise_ss)
    shuffle_rng = np.random.default_rng(shuffle_ss)
    if gate_threshold is None:
        gate_threshold = evaluate_q(pts, cfg.geo).q / 4.0

    fixed = noise_rng.normal(scale=cfg.noise.sigma, size=(m, 2))
    xy, yaw = [], []
    for i, pose in enumerate(poses):
        if cfg.noise.kind == "random":
            offsets = noise_rng.normal(scale=cfg.noise.sigma, size=(m, 2))
        else:
            offsets = fixed
        if on_perturbation is not None:
            on_perturbation(i, offsets)
        readings = measure(pose, pts + offsets).readings
        readings = readings[shuffle_rng.permutation(m)]
        res = localize(MeasurementSet(readings), pts, cfg.geo, gate_threshold)
        if res.accepted:
            e_xy, e_yaw = pose_error(res.pose, pose)
            xy.append(e_xy)
            yaw.append(e_yaw)
    return xy, yaw


def run_trial(cfg: TrialConfig, gate_threshold: Optional[float] = math.inf,
              on_perturbation: Optional[Callable[[int, np.ndarray], None]] = None) -> ErrorStats:
    """Localize from ``n_poses`` random poses and summarize the errors.

    Landmark positions are perturbed per the noise model, readings are
    formed exactly from the perturbed positions, shuffled, and matched
    against the nominal constellation. ``gate_threshold=None`` uses the
    default residual gate (a quarter of Q); the default ``inf`` keeps only
    the ``F_a`` membership gate. ``on_perturbation(pose_index, offsets)`` is
    called with the landmark offsets used at every pose.
    """
    xy, yaw = trial_errors(cfg, gate_threshold, on_perturbation)
    return summarize(xy, yaw, cfg.n_poses)


def summarize(xy_errors: Sequence[float], yaw_errors: Sequence[float], n_total: int) -> ErrorStats:
    xy = np.asarray(xy_errors, dtype=float)
    yaw = np.asarray(yaw_errors, dtype=float)
    if xy.size == 0:
        nan = float("nan")
        return ErrorStats(nan, nan, nan, nan, 0, n_total, nan)
    return ErrorStats(
        xy_err_mean=float(xy.mean()),
        xy_err_std=float(xy.std()),
        yaw_err_mean=float(yaw.mean()),
        yaw_err_std=float(yaw.std()),
        n_accepted=int(xy.size),
        n_total=int(n_total),
        yaw_abs_err_mean=float(np.abs(yaw).mean()),
    )


def reduction_pct(ours: float, random: float, atol: float = 1e-9) -> Optional[float]:
    """Signed percentage improvement ``(random - ours) / random * 100``.

    Equals ``|ours - random| / random * 100`` whenever ours is the smaller
    error. ``None`` when both errors vanish (the exact regime).
    """
    if not (math.isfinite(ours) and math.isfinite(random)):
        return None
    if abs(random) <= atol:
        return None if abs(ours) <= atol else -math.inf
    return (random - ours) / random * 100.0


@dataclass
class ComparisonRow:
    sigma: float
    kind: str
    constellation_id: str
    stats: ErrorStats
    reduction_xy_mean_pct: Optional[float] = None
    reduction_yaw_mean_pct: Optional[float] = None


@dataclass
class Comparison:
    """Output of :func:`compare`: one row per (sigma, kind, constellation)."""

    optimized: Constellation
    optimized_q: float
    baselines: list
    baseline_q: list
    rows: list = field(default_factory=list)

    def reductions(self, kind: str, metric: str = "xy"):
        key = f"reduction_{metric}_mean_pct"
        return {r.sigma: getattr(r, key) for r in self.rows
                if r.kind == kind and r.constellation_id == "optimized"}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            s = r.stats
            writer.writerow([
                _fmt(r.sigma), r.kind, r.constellation_id,
                _fmt(s.xy_err_mean), _fmt(s.xy_err_std), _fmt(s.yaw_err_mean),
                _fmt(s.yaw_err_std), s.n_accepted, s.n_total,
                _fmt_reduction(r.reduction_xy_mean_pct, r),
                _fmt_reduction(r.reduction_yaw_mean_pct, r),
                _fmt(s.yaw_abs_err_mean),
            ])
        return buf.getvalue()

    def summary(self) -> dict:
        out = {
            "optimized": {"points": self.optimized.points.tolist(), "q": self.optimized_q},
            "baselines": [{"points": c.points.tolist(), "q": q}
                          for c, q in zip(self.baselines, self.baseline_q)],
            "kinds": {},
        }
        for kind in sorted({r.kind for r in self.rows}):
            entry = {}
            for metric in ("xy", "yaw"):
                red = self.reductions(kind, metric)
                vals = [v for v in red.values() if v is not None]
                entry[f"reduction_{metric}_mean_pct"] = {_fmt(k): v for k, v in red.items()}
                entry[f"median_reduction_{metric}_mean_pct"] = (
                    float(np.median(vals)) if vals else None)
            out["kinds"][kind] = entry
        return out


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _fmt_reduction(value, row: ComparisonRow) -> str:
    if row.constellation_id != "optimized":
        return ""
    return "exact regime" if value is None else repr(float(value))


def compare(geo: GeometryConfig, m: int, sigmas: Sequence[float], n_random_baselines: int = 20,
            seed: int = 0, grid: GridSpec = GridSpec(), opts: Optional[OptimizerOptions] = None,
            kinds: Sequence[str] = NOISE_KINDS, n_poses: int = 200, n_trials: int = 10,
            gate_threshold: Optional[float] = math.inf,
            optimized: Optional[Constellation] = None,
            baselines: Optional[Sequence[Constellation]] = None) -> Comparison:
    """Optimized constellation versus random placements across noise levels.

    For every (sigma, kind) the optimized constellation and each random
    baseline get the same pose and noise seeds, so the comparison is paired.
    Errors are pooled over ``n_trials`` independent trials of ``n_poses``
    poses; a non-stochastic trial holds a single offset draw, so one trial
    alone says little about the constellation.
    The reduction columns compare the optimized row with the median of the
    baseline rows; yaw is compared on mean absolute error.
    """
    root = np.random.SeedSequence(int(seed))
    opt_ss, base_ss, trial_ss = root.spawn(3)
    if optimized is None:
        if opts is None:
            opts = OptimizerOptions(rng_seed=int(opt_ss.generate_state(1, np.uint64)[0]))
        optimized = optimize(geo, m, opts, grid).constellation
    if baselines is None:
        rng = np.random.default_rng(base_ss)
        baselines = [initialize(geo.f_g, m, rng) for _ in range(n_random_baselines)]
    baselines = [c if isinstance(c, Constellation) else Constellation(as_points(c))
                 for c in baselines]

    comp = Comparison(
        optimized=optimized,
        optimized_q=evaluate_q(optimized.points, geo, grid).q,
        baselines=list(baselines),
        baseline_q=[evaluate_q(c.points, geo, grid).q for c in baselines],
    )
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    trial_seeds = trial_ss.generate_state(2 * len(sigmas) * len(kinds) * n_trials, np.uint64)
    trial_seeds = trial_seeds.reshape(len(sigmas), len(kinds), n_trials, 2)
    for si, sigma in enumerate(sigmas):
        for ki, kind in enumerate(kinds):
            seeds = trial_seeds[si, ki]

            def trial(c):
                xy, yaw = [], []
                for pose_seed, noise_seed in seeds:
                    cfg = TrialConfig(c, geo, NoiseModel(kind, float(sigma), int(noise_seed)),
                                      n_poses, int(pose_seed))
                    e_xy, e_yaw = trial_errors(cfg, gate_threshold)
                    xy += e_xy
                    yaw += e_yaw
                return summarize(xy, yaw, n_poses * n_trials)

            ours = trial(optimized)
            rand = [trial(c) for c in baselines]
            med_xy = float(np.nanmedian([s.xy_err_mean for s in rand])) if rand else math.nan
            med_yaw = float(np.nanmedian([s.yaw_abs_err_mean for s in rand])) if rand else math.nan
            comp.rows.append(ComparisonRow(
                float(sigma), kind, "optimized", ours,
                reduction_pct(ours.xy_err_mean, med_xy),
                reduction_pct(ours.yaw_abs_err_mean, med_yaw),
            ))
            for i, s in enumerate(rand):
                comp.rows.append(ComparisonRow(float(sigma), kind, f"random_{i:02d}", s))
            if rand:
                median_stats = ErrorStats(
                    med_xy,
                    float(np.nanmedian([s.xy_err_std for s in rand])),
                    float(np.nanmedian([s.yaw_err_mean for s in rand])),
                    float(np.nanmedian([s.yaw_err_std for s in rand])),
                    int(np.median([s.n_accepted for s in rand])),
                    n_poses * n_trials,
                    med_yaw,
                )
                comp.rows.append(ComparisonRow(float(sigma), kind, "random_median", median_stats))
    return comp


def write_outputs(comp: Comparison, out_dir) -> tuple:
    """Write ``results.csv`` and ``summary.json`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    json_path = out / "summary.json"
    csv_path.write_text(comp.to_csv())
    json_path.write_text(json.dumps(comp.summary(), indent=2, sort_keys=True) + "\n")
    return csv_path, json_path
