"""Pydantic request/response models for the HTTP service.

The grid-function payload doubles as the on-disk JSON file format:
``{"d": ..., "n": ..., "values": [[re, im], ...]}`` with ``n + 1`` pairs.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..grids import Grid, GridFunction

SUITE_CHOICES = ("spectrum", "metric", "forms", "expansions", "all")


class GridFunctionPayload(BaseModel):
    d: float = Field(gt=0)
    n: int = Field(ge=2)
    values: list[tuple[float, float]]

    @model_validator(mode="after")
    def _check_length(self) -> "GridFunctionPayload":
        if len(self.values) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} value pairs, got {len(self.values)}")
        return self

    def to_grid_function(self) -> GridFunction:
        data = np.array([complex(re, im) for re, im in self.values])
        return GridFunction(Grid(self.d, self.n), data)

    @classmethod
    def from_grid_function(cls, f: GridFunction) -> "GridFunctionPayload":
        pairs = [(float(v.real), float(v.imag)) for v in f.values]
        return cls(d=float(f.grid.d), n=int(f.grid.n), values=pairs)


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str


class SpectrumRequest(BaseModel):
    alpha: float = 0.0
    beta: float = 0.0
    d: float = Field(default=math.pi, gt=0)
    j_max: int = Field(default=10, ge=0)
    k_max: float | None = Field(default=None, gt=0)
    expect_complex: bool = False
    residual_tol: float = Field(default=1e-12, gt=0)


class SpectrumRecord(BaseModel):
    j: int
    re_k2: float
    im_k2: float
    residual: float
    resolved: bool = True


class SpectrumResponse(BaseModel):
    mode: Literal["closed-form", "root-finder"]
    alpha: float
    beta: float
    d: float
    records: list[SpectrumRecord]


class MetricApplyRequest(BaseModel):
    alpha: float
    method: Literal["closed", "series"] = "closed"
    j_max: int = Field(default=1000, ge=1)
    d: float | None = Field(default=None, gt=0)
    function: GridFunctionPayload

    @model_validator(mode="after")
    def _check_interval(self) -> "MetricApplyRequest":
        if self.d is not None and not math.isclose(self.d, self.function.d, rel_tol=1e-12):
            raise ValueError(
                f"requested d = {self.d} does not match the function's d = {self.function.d}"
            )
        return self


class MetricApplyResponse(BaseModel):
    alpha: float
    method: str
    function: GridFunctionPayload


class VerifyRequest(BaseModel):
    d: float = Field(default=math.pi, gt=0)
    alpha: float | None = None
    n: int = Field(default=4096, ge=2)
    j_max: int = Field(default=20, ge=1)
    # None: 1000 capped at what the grid can represent (n/2)
    series_j_max: int | None = Field(default=None, ge=1)
    seed: int = 1234
    suites: list[str] = ["all"]
    tol_scale: float = Field(default=1.0, gt=0)

    @field_validator("suites")
    @classmethod
    def _known_suites(cls, suites: list[str]) -> list[str]:
        unknown = [s for s in suites if s not in SUITE_CHOICES]
        if unknown:
            raise ValueError(f"unknown suite name(s) {unknown}; valid: {list(SUITE_CHOICES)}")
        return suites


class CheckRecordModel(BaseModel):
    name: str
    suite: str
    status: Literal["pass", "fail", "info"]
    residual: float | None
    tolerance: float | None
    params: dict
    detail: str = ""


class VerifyResponse(BaseModel):
    schema_name: str = Field(alias="schema", default="ptrobin.verification-report/1")
    seed: int
    config: dict
    generated_at: str
    elapsed_seconds: float
    summary: dict
    checks: list[CheckRecordModel]

    model_config = {"populate_by_name": True}


class SweepRequest(BaseModel):
    param: Literal["alpha", "beta"]
    start: float
    stop: float
    steps: int = Field(ge=2)
    alpha: float = 0.0
    beta: float = 0.0
    d: float = Field(default=math.pi, gt=0)
    j_max: int = Field(default=10, ge=0)
    k_max: float | None = Field(default=None, gt=0)
    residual_tol: float = Field(default=1e-12, gt=0)


class SweepRow(BaseModel):
    param_value: float
    j: int
    re_k2: float
    im_k2: float
    residual: float
    resolved: bool = True


class SweepResponse(BaseModel):
    param: str
    d: float
    rows: list[SweepRow]
    pairing_defects: int
