"""Request/response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ClassifyRequest(BaseModel):
    space: str = Field(description="space descriptor, e.g. 'S:0,3' or 'T:0,2,0'")
    rank: int = Field(2, ge=1)


class ClassifyResponse(BaseModel):
    space: str
    rank: int
    rank_label: str
    status: str  # empty | unique | group
    cell: str
    group: str | None = None
    invariant: str | None = None
    complete: bool = True
    note: str = ""
    line: str


class CohomologyRequest(BaseModel):
    space: str
    degree: int = Field(ge=0)
    twist: int = Field(0, description="coefficient twist; only parity matters")


class CohomologyResponse(BaseModel):
    space: str
    degree: int
    twist: int
    group: str
    free_rank: int
    torsion: list[int]


class InvariantRequest(BaseModel):
    model: str = Field(description="'builtin:NAME' or inline model document text")
    grid: int = Field(32, ge=8)
    which: str = Field("all", pattern="^(all|chern|z2|fkmm)$")
    gap_tol: float | None = None
    params: dict[str, float] = Field(default_factory=dict)


class InvariantResponse(BaseModel):
    model: str
    space: str
    grid_n: int
    rank: int
    min_gap: float
    chern: dict[str, int]
    fkm_signs: dict[str, int]
    z2_indices: dict[str, int]
    fkmm_group: str | None
    fkmm_coords: dict[str, int | None] | None
    admissible: bool
    max_plaquette_phase: float
    max_unitarity_defect: float
    note: str = ""
    text: str


class SweepRequest(BaseModel):
    model: str
    param: str
    start: float
    stop: float
    step: float = Field(gt=0)
    grid: int = Field(32, ge=8)
    gap_tol: float | None = None


class SweepResponse(BaseModel):
    model: str
    space: str
    param: str
    columns: list[str]
    rows: list[list[float | int | None]]
    csv: str


class VerifyCheck(BaseModel):
    label: str
    worst: float
    where: str


class VerifyRequest(BaseModel):
    model: str
    grid: int = Field(32, ge=8)
    tol: float = 1e-9
    params: dict[str, float] = Field(default_factory=dict)


class VerifyResponse(BaseModel):
    model: str
    space: str
    ok: bool
    tol: float
    checks: list[VerifyCheck]
    matrix_defect: float
    matrix_where: str
    summary: str


class ModelInfo(BaseModel):
    name: str
    space: str
    family: str
    description: str


class ErrorBody(BaseModel):
    error: str
    message: str
