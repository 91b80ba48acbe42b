#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src import config


class GridGeometry(BaseModel):
    model_config = ConfigDict(frozen=True)

    width: int = Field(ge=2)
    height: int = Field(ge=2)
    h: float = Field(default=config.DEFAULT_H, gt=0)


class ModelParams(BaseModel):
    """Elastica weights a (length) and b (curvature), time step tau and mesh size h."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(default=config.DEFAULT_A, ge=0)
    b: float = Field(default=config.DEFAULT_B, ge=0)
    tau: float = Field(default=config.DEFAULT_TAU, gt=0)
    h: float = Field(default=config.DEFAULT_H, gt=0)

    @model_validator(mode="after")
    def _reject_degenerate_energy(self) -> "ModelParams":
        if self.a == 0 and self.b == 0:
            raise ValueError("a and b cannot both be zero")
        return self


class FixedPointConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    fp_tol: float = Field(default=config.DEFAULT_FP_TOL, gt=0)
    fp_max_iter: int = Field(default=config.DEFAULT_FP_MAX_ITER, ge=1)


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: ModelParams = Field(default_factory=ModelParams)
    tol: float = Field(default=config.DEFAULT_TOL, gt=0)
    max_iter: int = Field(default=config.DEFAULT_MAX_ITER, ge=1)
    fp: FixedPointConfig = Field(default_factory=FixedPointConfig)
    gamma_exponent: Literal[1, 2] = config.DEFAULT_GAMMA_EXPONENT
    trace_every: int = Field(default=config.DEFAULT_TRACE_EVERY, ge=1)


class RofConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    weight: float = Field(default=config.DEFAULT_A, gt=0)
    step: float = Field(default=config.DEFAULT_ROF_STEP, gt=0, le=0.25)
    tol: float = Field(default=config.DEFAULT_ROF_TOL, gt=0)
    max_iter: int = Field(default=config.DEFAULT_ROF_MAX_ITER, ge=1)


class NoiseSpec(BaseModel):
    """Zero-mean Gaussian noise; std is on the [0, 1] intensity scale (20/255 ~ 0.0784)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["gaussian"] = "gaussian"
    mean: Literal[0] = 0
    std: float = Field(ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)


class TraceRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    iter: int = Field(ge=0)
    e_total: float
    e_elastica: float
    e_fidelity: float
    e_p13: float
    e_lam13: float
    e_proj23: float
    e_u: float
    rel_err: float = Field(ge=0)


class EnergyTrace(BaseModel):
    records: list[TraceRecord] = Field(default_factory=list)

    def append(self, record: TraceRecord) -> TraceRecord:
        if self.records and record.iter <= self.records[-1].iter:
            raise ValueError(
                f"trace records must be strictly increasing in iteration "
                f"(got {record.iter} after {self.records[-1].iter})"
            )
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    @property
    def totals(self) -> list[float]:
        return [r.e_total for r in self.records]


class BenchCase(BaseModel):
    kind: str
    size: int = Field(ge=2)
    std: float = Field(ge=0)
    tol: float = Field(gt=0)
    seed: int = 0


class BenchResult(BaseModel):
    kind: str
    size: int
    std: float
    tol: float
    iterations: int
    converged: bool
    seconds: float
    seconds_per_iter: float
    final_energy: float
