"""Command-line front end.

A thin client over the service layer: each subcommand builds the request
model, calls the shared handler in-process and renders the response.  Exit
codes are stable: 2 for unsupported/malformed input, 3 when the spectral gap
closes, 4 when the grid is too coarse for a trustworthy integer, 5 for a
time-reversal symmetry violation.  Diagnostics go to stderr, data to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import (
    BadSelector,
    FkmmError,
    GapClosed,
    ModelSyntaxError,
    NoIsolatedFixedPoints,
    NotAdmissible,
    NotAntisymmetric,
    NotFree,
    NumericalInconsistency,
    OddChernParity,
    OddResolution,
    TRSViolation,
    UnsupportedDimension,
    UnsupportedSpace,
)
from .service import handlers
from .service import schemas as sc

EXIT_BAD_INPUT = 2
EXIT_GAP_CLOSED = 3
EXIT_NOT_ADMISSIBLE = 4
EXIT_TRS = 5

_EXIT_CODES = [
    ((GapClosed,), EXIT_GAP_CLOSED),
    ((NotAdmissible, NumericalInconsistency), EXIT_NOT_ADMISSIBLE),
    ((TRSViolation,), EXIT_TRS),
    (
        (
            UnsupportedSpace,
            ModelSyntaxError,
            NotFree,
            NoIsolatedFixedPoints,
            OddChernParity,
            BadSelector,
            OddResolution,
            UnsupportedDimension,
            NotAntisymmetric,
            ValueError,
            KeyError,
        ),
        EXIT_BAD_INPUT,
    ),
]


def _exit_code(exc) -> int:
    for classes, code in _EXIT_CODES:
        if isinstance(exc, classes):
            return code
    return 1


def _model_ref(text: str) -> str:
    """Pass builtin references through; read anything else as a file."""
    if text.startswith("builtin:"):
        return text
    path = Path(text)
    if not path.exists():
        raise ModelSyntaxError(f"model file {text!r} not found")
    return path.read_text()


def _params(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        name, _, value = pair.partition("=")
        if not _ or not name:
            raise ValueError(f"--set expects name=value, got {pair!r}")
        out[name] = float(value)
    return out


def _emit(payload: str, out_path):
    if out_path:
        Path(out_path).write_text(payload if payload.endswith("\n") else payload + "\n")
    else:
        print(payload)


def _json(model) -> str:
    return json.dumps(model.model_dump(), indent=2, sort_keys=True)


def cmd_classify(args) -> int:
    resp = handlers.classify_handler(sc.ClassifyRequest(space=args.space, rank=args.rank))
    if args.format == "json":
        _emit(_json(resp), args.out)
    elif args.format == "text":
        _emit(resp.line, args.out)
    else:
        raise ValueError("classify supports --format text|json")
    return 0


def cmd_cohomology(args) -> int:
    resp = handlers.cohomology_handler(
        sc.CohomologyRequest(space=args.space, degree=args.deg, twist=args.twist)
    )
    if args.format == "json":
        _emit(_json(resp), args.out)
    elif args.format == "text":
        _emit(resp.group, args.out)
    else:
        raise ValueError("cohomology supports --format text|json")
    return 0


def cmd_invariant(args) -> int:
    req = sc.InvariantRequest(
        model=_model_ref(args.model),
        grid=args.grid,
        which=args.which,
        gap_tol=args.gap_tol,
        params=_params(args.set),
    )
    resp = handlers.invariant_handler(req)
    if args.dump_curvature:
        csv = handlers.curvature_csv(req.model, req.grid, req.params)
        Path(args.dump_curvature).write_text(csv)
        print(f"curvature dump written to {args.dump_curvature}", file=sys.stderr)
    if args.format == "json":
        _emit(_json(resp), args.out)
    elif args.format == "text":
        _emit(resp.text, args.out)
    else:
        raise ValueError("invariant supports --format text|json")
    return 0


def cmd_sweep(args) -> int:
    try:
        start, stop, step = (float(x) for x in args.range.split(":"))
    except ValueError:
        raise ValueError(f"--range expects a:b:step, got {args.range!r}") from None
    resp = handlers.sweep_handler(
        sc.SweepRequest(
            model=_model_ref(args.model),
            param=args.param,
            start=start,
            stop=stop,
            step=step,
            grid=args.grid,
            gap_tol=args.gap_tol,
        )
    )
    if args.format == "json":
        _emit(_json(resp), args.out)
    else:  # text and csv are the same payload
        _emit(resp.csv.rstrip("\n"), args.out)
    return 0


def cmd_verify(args) -> int:
    resp = handlers.verify_handler(
        sc.VerifyRequest(
            model=_model_ref(args.model), grid=args.grid, tol=args.tol,
            params=_params(args.set),
        )
    )
    if args.format == "json":
        _emit(_json(resp), args.out)
    else:
        _emit(resp.summary, args.out)
    return 0 if resp.ok else EXIT_TRS


def cmd_models(args) -> int:
    infos = handlers.list_models_handler()
    if args.format == "json":
        _emit(json.dumps([m.model_dump() for m in infos], indent=2), args.out)
    else:
        lines = [f"builtin:{m.name}  [{m.space}, {m.family}]  {m.description}" for m in infos]
        _emit("\n".join(lines), args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fkmm",
        description=(
            "classification of time-reversal-symmetric bundle phases over "
            "involutive spheres/tori, and numerical invariants of gapped "
            "Clifford models"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("--out", metavar="PATH", help="write output to a file")

    p = sub.add_parser("classify", help="classification cell for a space and rank")
    p.add_argument("--space", required=True)
    p.add_argument("--rank", type=int, default=2)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cohomology", help="equivariant cohomology group")
    p.add_argument("--space", required=True)
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--twist", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("invariant", help="numerical invariants of a model")
    p.add_argument("--model", required=True, help="builtin:NAME or a model file path")
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--which", choices=["all", "chern", "z2", "fkmm"], default="all")
    p.add_argument("--gap-tol", type=float, default=None)
    p.add_argument("--set", action="append", metavar="NAME=VALUE",
                   help="override a model parameter")
    p.add_argument("--dump-curvature", metavar="PATH",
                   help="write per-plaquette curvature CSV")
    common(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("sweep", help="parameter sweep: gap minima and indices")
    p.add_argument("--model", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True, metavar="A:B:STEP")
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--gap-tol", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="time-reversal symmetry check")
    p.add_argument("--model", required=True)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--set", action="append", metavar="NAME=VALUE")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("models", help="list builtin models")
    common(p)
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FkmmError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
