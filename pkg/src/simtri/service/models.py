"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator

SCHEMA_VERSION = 1


class ShapeSpec(BaseModel):
    """A triangle shape, given either as three angles in degrees (any
    positive triple; it is rescaled to sum 180) or as a complex parameter."""

    angles_deg: Optional[tuple[float, float, float]] = None
    z: Optional[tuple[float, float]] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.angles_deg is None) == (self.z is None):
            raise ValueError("give exactly one of angles_deg or z")
        if self.angles_deg is not None:
            if min(self.angles_deg) <= 0:
                raise ValueError("angles must be positive")
        elif self.z is not None and self.z[1] == 0:
            raise ValueError("shape parameter needs nonzero imaginary part")
        return self


class HypergraphSpec(BaseModel):
    r: int = Field(ge=0)
    edges: list[tuple[int, int, int]]


class CountRequest(BaseModel):
    points: list[tuple[float, float]]
    shape: ShapeSpec
    eps_deg: float = Field(gt=0)
    include_edges: bool = False


class CountResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    n: int
    total: int
    edges: Optional[list[tuple[int, int, int]]] = None

    model_config = {"populate_by_name": True}


class HnRequest(BaseModel):
    n_max: int = Field(ge=0, le=10_000)


class HnRow(BaseModel):
    n: int
    h: int
    a: Optional[int] = None
    b: Optional[int] = None
    c: Optional[int] = None
    upper_bound: int
    gap: int


class HnResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    rows: list[HnRow]

    model_config = {"populate_by_name": True}


class CustomSkeleton(BaseModel):
    points: list[tuple[float, float]]
    shape: ShapeSpec
    eps_deg: float = Field(gt=0)
    weights: list[float]


class BuildRequest(BaseModel):
    example: Optional[str] = None
    custom: Optional[CustomSkeleton] = None
    n: int = Field(ge=0, le=5000)
    eps_deg: float = Field(default=0.5, gt=0)
    verify_recount: bool = True

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.example is None) == (self.custom is None):
            raise ValueError("give exactly one of example or custom")
        return self


class BuildResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    n: int
    points: list[tuple[float, float]]
    predicted_count: int
    recount: Optional[int] = None
    rho: float
    tree: dict

    model_config = {"populate_by_name": True}


class OptimizeRequest(BaseModel):
    hypergraph: Optional[HypergraphSpec] = None
    example: Optional[str] = None
    starts: int = Field(default=200, ge=1, le=100_000)
    tol: float = Field(default=1e-12, gt=0)
    seed: int = 0

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.hypergraph is None) == (self.example is None):
            raise ValueError("give exactly one of hypergraph or example")
        return self


class OptimizeResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    value: float
    x_star: list[float]
    starts_used: int
    converged: bool

    model_config = {"populate_by_name": True}


class DetectRequest(BaseModel):
    hypergraph: HypergraphSpec
    patterns: Optional[list[str]] = None


class DetectResult(BaseModel):
    found: bool
    mapping: Optional[dict[int, int]] = None


class DetectResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    results: dict[str, DetectResult]
    iterated_threepartite: Optional[bool] = None

    model_config = {"populate_by_name": True}


class RealizeRequest(BaseModel):
    pattern: str
    shape: ShapeSpec
    tol: float = Field(default=1e-9, gt=0)


class RealizeResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    found: bool
    points: Optional[list[tuple[float, float]]] = None
    branch_trace: list[int]
    residual: float

    model_config = {"populate_by_name": True}


class ScanRequest(BaseModel):
    pattern: str
    grid_steps: int = Field(ge=1, le=400)
    tol: float = Field(default=1e-6, gt=0)
    threads: int = 0


class ScanRowModel(BaseModel):
    alpha: float
    beta: float
    gamma: float
    realizable: bool
    residual: float


class ScanResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    fraction: float
    rows: list[ScanRowModel]

    model_config = {"populate_by_name": True}


class VerifyAppendixRequest(BaseModel):
    n_max: int = Field(default=1000, ge=3, le=10_000)
    f_range_samples: int = Field(default=2000, ge=0)
    seed: int = 0


class VerifyAppendixResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    ok: bool
    upper_bound_violations: int
    monotone_violations: int
    supermultiplicative_violations: int
    gamma_bounds_violations: int
    f_range_violations: int
    gamma_estimate: float

    model_config = {"populate_by_name": True}


class VerifySweepResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    ok: bool
    checked: int
    counterexamples: int

    model_config = {"populate_by_name": True}


class VerifyGridCaseResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    ok: bool

    model_config = {"populate_by_name": True}


class HealthResponse(BaseModel):
    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    status: str
    version: str

    model_config = {"populate_by_name": True}
