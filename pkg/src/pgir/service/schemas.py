"""Pydantic request/response models for the reconstruction service.

Requests carry file contents (edge lists, masks, signal CSVs) inline, so a
client's files never need to live on the server; responses return the same
text formats the CLI writes to disk.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class GenGraphRequest(BaseModel):
    model: Literal["er"] = "er"
    n: int = Field(ge=2)
    m: int = Field(ge=1)
    seed: int


class GenGraphResponse(BaseModel):
    edge_list: str
    n: int
    m: int
    graph_hash: str


class AnalyzeRequest(BaseModel):
    edge_list: str
    mask: str
    omega: float | None = None


class AnalyzeResponse(BaseModel):
    n: int
    m: int
    graph_hash: str
    sampled_count: int
    density: float
    sigma_min: float
    omega: float | None = None
    band_width: int | None = None
    width_fraction: float | None = None
    rho_A1: float | None = None
    mu_opt: float | None = None
    rho_A_mu_opt: float | None = None
    predicted_rate_ilsr: float | None = None
    predicted_rate_opgir: float | None = None
    notes: list[str] = Field(default_factory=list)


class GenSignalRequest(BaseModel):
    edge_list: str
    omega: float
    seed: int


class GenSignalResponse(BaseModel):
    signal_csv: str
    band_width: int


class SampleRequest(BaseModel):
    edge_list: str
    fraction: float
    seed: int


class SampleResponse(BaseModel):
    mask: str
    sampled_count: int
    density: float


class ReconstructRequest(BaseModel):
    edge_list: str
    signal_csv: str
    mask: str
    omega: float
    method: str = "opgir"            # "ilsr" | "opgir" | "mu=<real>"
    tolerance: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=5000, ge=1)
    truth_csv: str | None = None


class ReconstructResponse(BaseModel):
    signal_csv: str
    trace_csv: str
    report: dict


class ErSpec(BaseModel):
    n: int = Field(ge=2)
    m: int = Field(ge=1)


class BenchmarkRequest(BaseModel):
    edge_list: str | None = None
    er: ErSpec | None = None
    fraction: float
    omega: float | Literal["auto"] = "auto"
    methods: list[str] = Field(default_factory=lambda: ["ilsr", "opgir"])
    trials: int = Field(default=100, ge=1)
    seed: int = 0
    snr_db: list[float] | None = None
    tolerance: float = Field(default=1e-10, gt=0)
    max_iterations: int = Field(default=5000, ge=1)
    redraw_mask_per_trial: bool = False
    keep_traces: bool = False


class BenchmarkResponse(BaseModel):
    curves_csv: str
    snr_csv: str | None = None
    trials_csv: str | None = None
    metadata: dict
