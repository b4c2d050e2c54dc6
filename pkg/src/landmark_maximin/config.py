"""Run configuration: a JSON document in meters and degrees."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .confounder import GridSpec
from .geometry import GeometryConfig, InfeasibleGeometryError
from .positioner import OptimizerOptions


class ConfigError(ValueError):
    pass


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GeometrySection(_Strict):
    center: List[float] = Field(default=[0.0, 0.0], min_length=2, max_length=2)
    r_a: float = Field(gt=0)
    r_outer: float = Field(gt=0)
    half_width: float = Field(gt=0)
    half_height: float = Field(gt=0)
    r_res: float = Field(gt=0)
    beta_res_deg: float = Field(gt=0, lt=180)
    r_sense: float = Field(gt=0)

    @model_validator(mode="after")
    def _feasible(self):
        d_semi = math.hypot(self.half_width, self.half_height)
        if self.r_a + d_semi > self.r_sense:
            raise ValueError(
                f"feasibility constraint R_a + d_semi <= R_sense violated: "
                f"{self.r_a:g} + {d_semi:g} > {self.r_sense:g}")
        if self.r_a > self.r_outer:
            raise ValueError("r_a must not exceed r_outer")
        return self

    def build(self) -> GeometryConfig:
        return GeometryConfig.centered(
            self.center, r_a=self.r_a, r_outer=self.r_outer, half_width=self.half_width,
            half_height=self.half_height, r_res=self.r_res,
            beta_res=math.radians(self.beta_res_deg), r_sense=self.r_sense)


class GridSection(_Strict):
    n_theta: int = Field(default=720, ge=8)


class OptimizerSection(_Strict):
    n_starts: int = Field(default=16, ge=1)
    max_evals_per_start: int = Field(default=2000, ge=0)
    initial_step: Optional[float] = Field(default=None, gt=0)
    step_tolerance: float = Field(default=1e-3, gt=0)


class SimSection(_Strict):
    sigmas: List[float] = Field(default=[0.5, 1.0, 2.0, 4.0])
    kinds: List[Literal["random", "non_stochastic"]] = ["random", "non_stochastic"]
    n_random_baselines: int = Field(default=20, ge=1)
    n_poses: int = Field(default=200, ge=10)
    n_trials: int = Field(default=10, ge=1)
    # null keeps only the F_a gate; a number is a residual gate in m^2
    gate_threshold: Optional[float] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _nonneg(self):
        if any(s < 0 or not math.isfinite(s) for s in self.sigmas):
            raise ValueError("sigmas must be finite and >= 0")
        return self


class RunConfig(_Strict):
    geometry: GeometrySection
    m: int = Field(default=3, ge=1, le=8)
    grid: GridSection = GridSection()
    optimizer: OptimizerSection = OptimizerSection()
    sim: SimSection = SimSection()
    seed: int = Field(default=0, ge=0, lt=2 ** 64)

    def geo(self) -> GeometryConfig:
        return self.geometry.build()

    def grid_spec(self) -> GridSpec:
        return GridSpec(self.grid.n_theta)

    def optimizer_options(self) -> OptimizerOptions:
        o = self.optimizer
        return OptimizerOptions(o.n_starts, o.max_evals_per_start, o.initial_step,
                                o.step_tolerance, self.seed)


def _format_errors(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        path = ".".join(str(p) for p in e["loc"]) or "<root>"
        lines.append(f"{path}: {e['msg']}")
    return "\n".join(lines)


def parse_config(data: dict) -> RunConfig:
    try:
        cfg = RunConfig.model_validate(data)
        cfg.geo()
    except ValidationError as err:
        raise ConfigError(_format_errors(err)) from None
    except InfeasibleGeometryError as err:
        raise ConfigError(f"geometry: {err}") from None
    return cfg


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    return parse_config(data)


__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]
