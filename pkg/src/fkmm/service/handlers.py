"""Service-layer operations: plain functions from request to response models.

The FastAPI app and the command-line client both call these; domain errors
propagate to the caller, which maps them to HTTP errors or exit codes.
"""

from __future__ import annotations

import io

from .. import invariants as inv
from .. import models as md
from ..cohomology import classify, cohomology
from ..errors import UnsupportedSpace
from ..geometry import SphereGrid, build_grid
from ..spaces import parse_space
from . import schemas as sc


def classify_handler(req: sc.ClassifyRequest) -> sc.ClassifyResponse:
    space = parse_space(req.space)
    result = classify(space, req.rank)
    return sc.ClassifyResponse(
        space=str(space),
        rank=req.rank,
        rank_label=result.rank_label,
        status=result.status,
        cell=result.cell(),
        group=result.group.render() if result.group is not None else None,
        invariant=result.invariant_name,
        complete=result.complete,
        note=result.note,
        line=result.render(),
    )


def cohomology_handler(req: sc.CohomologyRequest) -> sc.CohomologyResponse:
    space = parse_space(req.space)
    group = cohomology(space, req.degree, req.twist)
    return sc.CohomologyResponse(
        space=str(space),
        degree=req.degree,
        twist=req.twist % 2,
        group=group.render(),
        free_rank=group.free_rank,
        torsion=list(group.torsion),
    )


def _resolve_model(ref: str, params: dict) -> md.CliffordModel:
    model = md.load_model(ref)
    if params:
        model = model.with_params(**params)
    return model


def invariant_handler(req: sc.InvariantRequest) -> sc.InvariantResponse:
    model = _resolve_model(req.model, req.params)
    report = inv.compute_invariants(model, req.grid, which=req.which, gap_tol=req.gap_tol)
    return sc.InvariantResponse(text="\n".join(report.lines()), **report.to_dict())


def verify_handler(req: sc.VerifyRequest) -> sc.VerifyResponse:
    model = _resolve_model(req.model, req.params)
    grid = build_grid(model.space, req.grid)
    report = md.verify_trs(model, grid, tol=req.tol)
    return sc.VerifyResponse(
        model=model.name or "<inline>",
        space=str(model.space),
        ok=report.ok,
        tol=report.tol,
        checks=[
            sc.VerifyCheck(label=c.label, worst=c.worst, where=str(c.where))
            for c in report.checks
        ],
        matrix_defect=report.matrix_defect,
        matrix_where=str(report.matrix_where),
        summary=report.summary(),
    )


def sweep_handler(req: sc.SweepRequest) -> sc.SweepResponse:
    model = md.load_model(req.model)
    if req.param not in dict(model.params):
        raise UnsupportedSpace(
            f"model has no parameter {req.param!r}; available: "
            f"{sorted(dict(model.params))}"
        )
    labels = inv.sweep_index_labels(model.space)
    columns = [req.param, "gap_min"] + labels
    rows = []
    value = req.start
    while value <= req.stop + 1e-12:
        point = model.with_params(**{req.param: value})
        gap, indices = inv.sweep_point(point, req.grid, gap_tol=req.gap_tol)
        row = [round(value, 12), gap]
        if indices is None:
            row += [None] * len(labels)
        else:
            row += [indices[label] for label in labels]
        rows.append(row)
        value += req.step
    out = io.StringIO()
    out.write(",".join(columns) + "\n")
    for row in rows:
        cells = []
        for cell in row:
            if cell is None:
                cells.append("NA")
            elif isinstance(cell, float):
                cells.append(f"{cell:.9g}")
            else:
                cells.append(str(cell))
        out.write(",".join(cells) + "\n")
    return sc.SweepResponse(
        model=model.name or "<inline>",
        space=str(model.space),
        param=req.param,
        columns=columns,
        rows=rows,
        csv=out.getvalue(),
    )


def list_models_handler() -> list[sc.ModelInfo]:
    registry = md.hopf_models()
    return [
        sc.ModelInfo(
            name=m.name, space=str(m.space), family=m.family, description=m.description
        )
        for _, m in sorted(registry.items())
    ]


def curvature_csv(ref: str, grid_n: int, params: dict | None = None) -> str:
    """Plaquette-resolved curvature dump for external plotting."""
    model = _resolve_model(ref, params or {})
    grid = build_grid(model.space, grid_n)
    field = inv.ProjectorField.from_model(model, grid)
    out = io.StringIO()
    if isinstance(grid, SphereGrid):
        out.write("theta,phi,F_plaquette\n")
        for path in grid.plaquettes():
            theta, phi = grid._angles(path[0])
            phase = inv.plaquette_phase(field, path)
            out.write(f"{theta:.9g},{phi:.9g},{phase:.9g}\n")
        return out.getvalue()
    if grid.d != 2:
        from ..errors import BadSelector

        raise BadSelector("curvature dump supports 2D grids only")
    names = [f"k{i + 1}" for i in range(grid.d)]
    out.write(",".join(names) + ",F_plaquette\n")
    for path in grid.plaquettes():
        coords = grid.coords(path[0])
        phase = inv.plaquette_phase(field, path)
        out.write(",".join(f"{c:.9g}" for c in coords) + f",{phase:.9g}\n")
    return out.getvalue()
