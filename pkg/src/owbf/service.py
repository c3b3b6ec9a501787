"""HTTP front end: pydantic request/response models around the pipeline.

Images travel as base64-encoded grayscale PFM payloads so float images
round-trip without quantization surprises.
"""

from __future__ import annotations

import base64
import math
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .direct import BilateralParams
from .image import ImageError, psnr
from .pgmio import ImageIOError, pfm_from_bytes, pfm_to_bytes
from .pipeline import add_noise_op, bench_op, denoise_op, resolve_threads, sweep_op


def encode_image(img: np.ndarray) -> str:
    return base64.b64encode(pfm_to_bytes(img)).decode("ascii")


def decode_image(payload: str) -> np.ndarray:
    return pfm_from_bytes(base64.b64decode(payload.encode("ascii")), name="<payload>")


def _json_float(x: float) -> float | str:
    return "inf" if math.isinf(x) else x


class FilterSettings(BaseModel):
    sigma_s: float = Field(gt=0)
    sigma_r: float = Field(gt=0)
    half_width: Optional[int] = Field(default=None, ge=1)
    box_half_width: int = Field(default=1, ge=1)

    def to_params(self) -> BilateralParams:
        return BilateralParams(
            sigma_s=self.sigma_s,
            sigma_r=self.sigma_r,
            half_width=self.half_width or 0,
            box_half_width=self.box_half_width,
        )


class AddNoiseRequest(BaseModel):
    image: str
    sigma: float = Field(ge=0)
    seed: int = Field(default=0, ge=0)


class AddNoiseResponse(BaseModel):
    image: str
    mse: float
    psnr_db: float | str  # "inf" when mse == 0


class MetricsRequest(BaseModel):
    a: str
    b: str


class MetricsResponse(BaseModel):
    mse: float
    psnr_db: float | str


class Diagnostics(BaseModel):
    n_terms: Optional[int] = None
    T: Optional[float] = None
    theta: Optional[list[float]] = None
    sure_sbf: Optional[float] = None
    sure_rbf: Optional[float] = None
    sure_wbf: Optional[float] = None
    degenerate: Optional[bool] = None
    max_abs_diff: Optional[float] = None
    mse: Optional[float] = None
    psnr_db: Optional[float | str] = None
    time_s: Optional[float] = None


class DenoiseRequest(BaseModel):
    image: str
    filter: Literal["sbf", "rbf", "wbf"]
    impl: Literal["direct", "fast"] = "fast"
    settings: FilterSettings
    sigma: Optional[float] = Field(default=None, gt=0)
    clean: Optional[str] = None
    n_override: Optional[int] = Field(default=None, ge=1)
    fd_derivatives: bool = False
    compare: bool = False
    threads: Optional[int] = Field(default=None, ge=1)


class DenoiseResponse(BaseModel):
    image: str
    diagnostics: Diagnostics


class SweepRequest(BaseModel):
    image: str
    filter: Literal["sbf", "rbf", "wbf"]
    impl: Literal["direct", "fast"] = "fast"
    sigma: Optional[float] = Field(default=None, gt=0)
    sigma_s_values: list[float]
    sigma_r_values: list[float]
    box_half_width: int = Field(default=1, ge=1)
    clean: Optional[str] = None
    fd_derivatives: bool = False
    threads: Optional[int] = Field(default=None, ge=1)


class SweepRow(BaseModel):
    sigma_s: float
    sigma_r: float
    n_terms: Optional[int] = None
    T: Optional[float] = None
    theta: Optional[list[float]] = None
    sure_sbf: Optional[float] = None
    sure_rbf: Optional[float] = None
    sure_wbf: Optional[float] = None
    degenerate: Optional[bool] = None
    mse: Optional[float] = None
    psnr_db: Optional[float | str] = None
    time_s: Optional[float] = None
    best_psnr: bool = False
    best_sure: bool = False


class SweepResponse(BaseModel):
    rows: list[SweepRow]


class BenchRequest(BaseModel):
    image: str
    settings: list[tuple[float, float]]  # (sigma_s, sigma_r) pairs
    repeats: int = Field(default=3, ge=1)
    box_half_width: int = Field(default=1, ge=1)


class BenchCell(BaseModel):
    sigma_s: float
    sigma_r: float
    direct_mean_s: float
    direct_min_s: float
    fast_mean_s: float
    fast_min_s: float
    max_abs_diff: float


class BenchResponse(BaseModel):
    cells: list[BenchCell]


app = FastAPI(title="owbf", version=__version__)


@app.exception_handler(ImageError)
@app.exception_handler(ImageIOError)
def _domain_error(request: Request, exc: Exception):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/healthz")
def healthz():
    return {"status": "ok", "version": __version__}


@app.post("/v1/add-noise", response_model=AddNoiseResponse)
def add_noise(req: AddNoiseRequest):
    clean = decode_image(req.image)
    r = add_noise_op(clean, req.sigma, req.seed)
    return AddNoiseResponse(
        image=encode_image(r["image"]), mse=r["mse"], psnr_db=_json_float(r["psnr_db"])
    )


@app.post("/v1/metrics", response_model=MetricsResponse)
def metrics(req: MetricsRequest):
    m = psnr(decode_image(req.a), decode_image(req.b))
    return MetricsResponse(mse=m.mse, psnr_db=_json_float(m.psnr_db))


def _diag_model(diag: dict) -> Diagnostics:
    d = dict(diag)
    if "psnr_db" in d:
        d["psnr_db"] = _json_float(d["psnr_db"])
    return Diagnostics(**d)


@app.post("/v1/denoise", response_model=DenoiseResponse)
def denoise(req: DenoiseRequest):
    resolve_threads(req.threads)  # validate; filtering itself is single-run
    noisy = decode_image(req.image)
    clean = decode_image(req.clean) if req.clean is not None else None
    r = denoise_op(
        noisy,
        req.filter,
        req.impl,
        req.settings.to_params(),
        req.sigma,
        clean=clean,
        n_override=req.n_override,
        fd_enabled=req.fd_derivatives,
        compare=req.compare,
    )
    return DenoiseResponse(image=encode_image(r["image"]), diagnostics=_diag_model(r["diagnostics"]))


@app.post("/v1/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest):
    threads = resolve_threads(req.threads)
    noisy = decode_image(req.image)
    clean = decode_image(req.clean) if req.clean is not None else None
    base = BilateralParams(sigma_s=1.0, sigma_r=1.0, box_half_width=req.box_half_width)
    r = sweep_op(
        noisy,
        req.filter,
        req.impl,
        base,
        req.sigma,
        req.sigma_s_values,
        req.sigma_r_values,
        clean=clean,
        threads=threads,
        fd_enabled=req.fd_derivatives,
    )
    rows = []
    for row in r["rows"]:
        row = dict(row)
        if "psnr_db" in row:
            row["psnr_db"] = _json_float(row["psnr_db"])
        rows.append(SweepRow(**row))
    return SweepResponse(rows=rows)


@app.post("/v1/bench", response_model=BenchResponse)
def bench(req: BenchRequest):
    img = decode_image(req.image)
    r = bench_op(img, req.settings, req.repeats, L=req.box_half_width)
    return BenchResponse(cells=[BenchCell(**c) for c in r["cells"]])
