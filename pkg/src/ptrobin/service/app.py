"""FastAPI application wrapping the core package.

All computation is stateless and pure, so the endpoints are plain
request/response wrappers around the library.  Degenerate couplings where
a requested operation is singular map to 409 with a structured detail;
semantic parameter errors map to 400.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..metric import MetricConfig, apply_closed, apply_series
from ..spectrum import (
    DegeneracyError,
    ModelParams,
    RootRecord,
    check_nondegenerate,
    closed_spectrum,
    conjugate_pairing_defects,
    solve_spectrum,
)
from ..verify import VerifyConfig, run_all
from .schemas import (
    GridFunctionPayload,
    HealthResponse,
    MetricApplyRequest,
    MetricApplyResponse,
    SpectrumRecord,
    SpectrumRequest,
    SpectrumResponse,
    SweepRequest,
    SweepResponse,
    SweepRow,
    VerifyRequest,
    VerifyResponse,
)


def _records_to_models(records: list[RootRecord]) -> list[SpectrumRecord]:
    return [
        SpectrumRecord(
            j=j,
            re_k2=r.eigenvalue.real,
            im_k2=r.eigenvalue.imag,
            residual=r.residual,
            resolved=r.resolved,
        )
        for j, r in enumerate(records)
    ]


def _spectrum_records(
    params: ModelParams,
    j_max: int,
    k_max: float | None,
    expect_complex: bool,
    residual_tol: float = 1e-12,
):
    if params.beta == 0.0:
        return "closed-form", closed_spectrum(params, j_max)
    if k_max is None:
        k_max = (j_max + 0.5) * math.pi / params.d
    return "root-finder", solve_spectrum(
        params, k_max, expect_complex=expect_complex, residual_tol=residual_tol
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="ptrobin",
        version=__version__,
        description=(
            "Spectra, biorthonormal expansions and the closed-form metric "
            "operator of the PT-symmetric Robin Laplacian on an interval."
        ),
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(version=__version__)

    @app.post("/spectrum", response_model=SpectrumResponse)
    def spectrum(req: SpectrumRequest) -> SpectrumResponse:
        params = ModelParams(alpha=req.alpha, beta=req.beta, d=req.d)
        mode, records = _spectrum_records(
            params, req.j_max, req.k_max, req.expect_complex, req.residual_tol
        )
        return SpectrumResponse(
            mode=mode,
            alpha=req.alpha,
            beta=req.beta,
            d=req.d,
            records=_records_to_models(records),
        )

    @app.post("/metric/apply", response_model=MetricApplyResponse)
    def metric_apply(req: MetricApplyRequest) -> MetricApplyResponse:
        f = req.function.to_grid_function()
        cfg = MetricConfig(alpha=req.alpha, d=f.grid.d, j_max=req.j_max)
        try:
            image = apply_closed(f, cfg) if req.method == "closed" else apply_series(f, cfg)
        except DegeneracyError as exc:
            raise HTTPException(
                status_code=409,
                detail={"code": "degenerate_alpha", "message": str(exc)},
            ) from exc
        return MetricApplyResponse(
            alpha=req.alpha,
            method=req.method,
            function=GridFunctionPayload.from_grid_function(image),
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        defaults = VerifyConfig()
        alphas = defaults.alphas
        degenerate_alpha = defaults.degenerate_alpha
        if req.alpha is not None:
            probe = ModelParams(req.alpha, 0.0, req.d)
            if check_nondegenerate(probe).degenerate:
                alphas = (0.0,)
                degenerate_alpha = req.alpha
            else:
                alphas = (0.0, req.alpha) if req.alpha != 0.0 else (0.0,)
        series_j_max = (
            req.series_j_max if req.series_j_max is not None else min(1000, req.n // 2)
        )
        try:
            cfg = VerifyConfig(
                d=req.d,
                alphas=alphas,
                degenerate_alpha=degenerate_alpha,
                n=req.n,
                j_max=req.j_max,
                series_j_max=series_j_max,
                seed=req.seed,
                suites=tuple(req.suites),
                tol_scale=req.tol_scale,
            )
        except ValueError as exc:
            raise HTTPException(
                status_code=400,
                detail={"code": "invalid_parameters", "message": str(exc)},
            ) from exc
        report = run_all(cfg)
        return VerifyResponse(**report.to_dict())

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest) -> SweepResponse:
        values = np.linspace(req.start, req.stop, req.steps)
        rows: list[SweepRow] = []
        defects_total = 0
        for value in values:
            alpha = float(value) if req.param == "alpha" else req.alpha
            beta = float(value) if req.param == "beta" else req.beta
            params = ModelParams(alpha=alpha, beta=beta, d=req.d)
            _, records = _spectrum_records(
                params,
                req.j_max,
                req.k_max,
                expect_complex=params.beta != 0.0,
                residual_tol=req.residual_tol,
            )
            defects_total += len(conjugate_pairing_defects(records))
            for j, r in enumerate(records):
                rows.append(
                    SweepRow(
                        param_value=float(value),
                        j=j,
                        re_k2=r.eigenvalue.real,
                        im_k2=r.eigenvalue.imag,
                        residual=r.residual,
                        resolved=r.resolved,
                    )
                )
        return SweepResponse(param=req.param, d=req.d, rows=rows, pairing_defects=defects_total)

    return app
