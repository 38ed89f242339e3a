"""Gapped Clifford-type Hamiltonian families with odd time-reversal symmetry.

The main family is the 4x4 one: five anticommuting Hermitian generators
``SIGMA[0..4]`` and a Hamiltonian ``H(x) = sum_j F_j(x) SIGMA[j]`` built from
user-supplied coefficient expressions.  With the antiunitary ``theta``
(squaring to -1) the symmetry ``theta H(x) theta* = H(tau x)`` holds exactly
when ``F_2`` is even and the other four coefficients are odd under the
involution.  The occupied bands are the rank-2 eigenprojector of the lower
band.

A second, rank-1 family lives on 2x2 matrices: projectors
``(1 + sum_j g_j sigma_{j+1}) / 2`` with three odd coefficients, carrying the
antiunitary ``sigma_2 . conj`` between antipodal points.  It supplies the
classic line-bundle examples over the free 2-sphere.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import expressions as ex
from .errors import GapClosed, ModelSyntaxError, UnknownSymbol, UnsupportedSpace
from .geometry import TorusGrid
from .spaces import InvolutiveSpace, Torus, parse_space

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# Irreducible 4x4 representation of five anticommuting Hermitian generators.
SIGMA = np.stack(
    [
        np.kron(PAULI[0], PAULI[2]),
        np.kron(PAULI[1], PAULI[2]),
        np.kron(np.eye(2), PAULI[0]),
        np.kron(np.eye(2), PAULI[1]),
        np.kron(PAULI[2], PAULI[2]),
    ]
)

J4 = np.kron(PAULI[1], np.eye(2))  # unitary part of the 4x4 antiunitary

DEFAULT_GAP_TOL = 1e-8
GAP_TOL_ENV = "FKMM_GAP_TOL"


def gap_tolerance(override=None):
    if override is not None:
        return float(override)
    return float(os.environ.get(GAP_TOL_ENV, DEFAULT_GAP_TOL))


def theta_apply(vectors, family="clifford"):
    """Apply the antiunitary lift columnwise: conj after J (4x4 family) or
    sigma_2 after conj (2x2 family)."""
    if family == "clifford":
        return np.conj(J4 @ vectors)
    return PAULI[1] @ np.conj(vectors)


def theta_conjugate(matrix, family="clifford"):
    """theta M theta* for a linear map M on the fiber."""
    if family == "clifford":
        return J4 @ matrix.conj() @ J4
    return PAULI[1] @ matrix.conj() @ PAULI[1]


def theta_parity_signs(family="clifford"):
    """Required parity of each coefficient under the involution: -1 odd."""
    if family == "clifford":
        return (-1, -1, +1, -1, -1)
    return (-1, -1, -1)


@dataclass(frozen=True)
class CliffordModel:
    """Parsed coefficient functions over an involutive space.

    ``family`` selects the matrix realization: "clifford" (4x4, five
    coefficients, two occupied bands) or "pauli-line" (2x2, three
    coefficients, one occupied band).
    """

    space: InvolutiveSpace
    coeffs: tuple
    params: tuple  # ((name, value), ...)
    family: str = "clifford"
    name: str = ""
    description: str = ""

    def __post_init__(self):
        expected = 5 if self.family == "clifford" else 3
        if len(self.coeffs) != expected:
            raise ValueError(f"{self.family} family needs {expected} coefficients")

    @property
    def rank(self):
        return 2 if self.family == "clifford" else 1

    @property
    def dim(self):
        return 4 if self.family == "clifford" else 2

    @property
    def generators(self):
        return SIGMA if self.family == "clifford" else PAULI

    def param_map(self):
        return dict(self.params)

    def with_params(self, **updates):
        merged = dict(self.params)
        for key in updates:
            if key not in merged:
                raise KeyError(f"model has no parameter {key!r}")
        merged.update(updates)
        return CliffordModel(
            self.space, self.coeffs, tuple(sorted(merged.items())), self.family,
            self.name, self.description,
        )

    def coefficient_values(self, env):
        """Evaluate all coefficients; env maps coordinate names to scalars or
        same-shaped arrays.  Constant coefficients broadcast to that shape."""
        full = dict(self.params)
        full.update(env)
        shape = np.shape(next(iter(env.values())))
        values = [
            np.broadcast_to(np.asarray(ex.evaluate(c, full), dtype=float), shape)
            for c in self.coeffs
        ]
        return np.stack(values)

    def to_text(self):
        lines = ["format = 1", f'space = "{self.space}"']
        for j, c in enumerate(self.coeffs):
            lines.append(f'F{j} = "{ex.to_text(c)}"')
        if self.params:
            lines.append("")
            lines.append("[params]")
            for key, value in self.params:
                lines.append(f"{key} = {float(value)!r}")
        return "\n".join(lines) + "\n"


def coordinate_names(space: InvolutiveSpace):
    if isinstance(space, Torus):
        return tuple(f"k{i + 1}" for i in range(space.dimension))
    return ("x0", "x1", "x2")


def grid_env(model, grid, indices):
    """Coordinate arrays for a list of grid indices."""
    names = coordinate_names(model.space)
    if isinstance(grid, TorusGrid):
        coords = grid.coord_arrays(list(indices))
        return {name: coords[:, i] for i, name in enumerate(names)}
    xyz = np.array([grid.xyz(p) for p in indices])
    return {name: xyz[:, i] for i, name in enumerate(names)}


def hamiltonians(model: CliffordModel, grid, indices):
    """Stack of fiber Hamiltonians sum_j F_j SIGMA_j over the given indices.

    For the 2x2 family the 'Hamiltonian' is sum_j g_j sigma_{j+1} whose upper
    band is the occupied one.
    """
    values = model.coefficient_values(grid_env(model, grid, indices))
    gens = model.generators
    return np.einsum("jn,jab->nab", values, gens), values


def q_values(coefficient_values):
    return np.sum(np.asarray(coefficient_values, dtype=float) ** 2, axis=0)


@dataclass(frozen=True)
class GapScan:
    min_q: float
    argmin: tuple
    max_q: float

    @property
    def min_gap(self):
        # Spectral gap is 2 sqrt(Q); report sqrt(Q) of the worst point.
        return float(np.sqrt(max(self.min_q, 0.0)))


def gap_scan(model: CliffordModel, grid, check=True, gap_tol=None) -> GapScan:
    """Minimum of Q = sum_j F_j^2 over all grid points.

    With ``check`` the scan raises :class:`GapClosed` when the minimum falls
    at or below the (relative) tolerance.
    """
    indices = list(grid.points())
    values = model.coefficient_values(grid_env(model, grid, indices))
    q = q_values(values)
    pos = int(np.argmin(q))
    scan = GapScan(float(q[pos]), indices[pos], float(np.max(q)))
    if check:
        tol = gap_tolerance(gap_tol) * max(scan.max_q, 1e-300)
        if scan.min_q <= tol:
            raise GapClosed(
                f"gap closed: min Q = {scan.min_q:.3e} at {scan.argmin} "
                f"(threshold {tol:.3e})"
            )
    return scan


def projector(model: CliffordModel, point_env) -> np.ndarray:
    """Occupied-band projector at one point given coordinate values."""
    values = model.coefficient_values(point_env).astype(float)
    q = float(q_values(values))
    if q <= gap_tolerance():
        raise GapClosed(f"gap closed at evaluation point (Q = {q:.3e})")
    return projectors_from_values(values[:, None], np.array([q]), model)[0]


def projectors_from_values(values, q, model: CliffordModel):
    """Vectorized occupied projectors from coefficient values (j, N)."""
    f = values / np.sqrt(q)[None, :]
    gens = model.generators
    band = np.einsum("jn,jab->nab", f, gens)
    eye = np.eye(model.dim)
    if model.family == "clifford":
        return (eye[None, :, :] - band) / 2.0
    return (eye[None, :, :] + band) / 2.0


def frames_from_projectors(proj, rank):
    """Deterministic orthonormal frames spanning each projector's range.

    Column-pivoted Gram-Schmidt on the projector columns; the pivot is the
    largest column norm, ties broken by lowest index, so the output depends
    only on the input matrix.
    """
    n, dim, _ = proj.shape
    rows = np.arange(n)
    norms = np.linalg.norm(proj, axis=1)
    j1 = np.argmax(norms, axis=1)
    u1 = proj[rows, :, j1]
    scale = norms[rows, j1]
    if np.any(scale < 1e-13):
        raise GapClosed("projector has no usable column (rank collapse)")
    u1 = u1 / scale[:, None]
    if rank == 1:
        return u1[:, :, None]
    overlap = np.einsum("na,nab->nb", u1.conj(), proj)
    resid = proj - u1[:, :, None] * overlap[:, None, :]
    norms2 = np.linalg.norm(resid, axis=1)
    j2 = np.argmax(norms2, axis=1)
    u2 = resid[rows, :, j2]
    scale2 = norms2[rows, j2]
    if np.any(scale2 < 1e-13):
        raise GapClosed("projector rank below 2 (second pivot vanished)")
    u2 = u2 / scale2[:, None]
    return np.stack([u1, u2], axis=2)


def frame(proj: np.ndarray, rank=None) -> np.ndarray:
    """Frame for a single projector matrix; rank inferred from the trace."""
    from .errors import RankMismatch

    trace = float(np.real(np.trace(proj)))
    inferred = int(round(trace))
    if abs(trace - inferred) > 1e-9 or inferred < 1:
        raise RankMismatch(f"projector trace {trace} is not a usable rank")
    if rank is not None and rank != inferred:
        raise RankMismatch(f"expected rank {rank}, projector trace is {trace}")
    return frames_from_projectors(proj[None, :, :], inferred)[0]


@dataclass(frozen=True)
class ParityCheck:
    label: str
    worst: float
    where: tuple


@dataclass(frozen=True)
class TrsReport:
    ok: bool
    tol: float
    checks: tuple  # per-coefficient ParityCheck
    matrix_defect: float
    matrix_where: tuple

    @property
    def worst(self):
        return max([c.worst for c in self.checks] + [self.matrix_defect])

    def summary(self):
        status = "PASS" if self.ok else "FAIL"
        lines = [f"time-reversal check: {status} (tol {self.tol:g})"]
        for c in self.checks:
            lines.append(f"  {c.label}: worst violation {c.worst:.3e} at {c.where}")
        lines.append(
            f"  matrix check |theta H theta* - H(tau x)|: {self.matrix_defect:.3e} "
            f"at {self.matrix_where}"
        )
        return "\n".join(lines)


def verify_trs(model: CliffordModel, grid, tol=1e-9) -> TrsReport:
    """Check the coefficient parities and the conjugation identity on every
    grid point; reports worst violations rather than raising."""
    indices = list(grid.points())
    tau_indices = [grid.tau(p) for p in indices]
    values = model.coefficient_values(grid_env(model, grid, indices))
    tau_values = model.coefficient_values(grid_env(model, grid, tau_indices))
    signs = theta_parity_signs(model.family)
    checks = []
    for j, sign in enumerate(signs):
        defect = np.abs(tau_values[j] - sign * values[j])
        pos = int(np.argmax(defect))
        kind = "even" if sign > 0 else "odd"
        checks.append(ParityCheck(f"F{j} ({kind})", float(defect[pos]), indices[pos]))
    gens = model.generators
    h = np.einsum("jn,jab->nab", values, gens)
    h_tau = np.einsum("jn,jab->nab", tau_values, gens)
    if model.family == "clifford":
        conj = np.einsum("ab,nbc,cd->nad", J4, h.conj(), J4)
    else:
        conj = np.einsum("ab,nbc,cd->nad", PAULI[1], h.conj(), PAULI[1])
    defect = np.linalg.norm(conj - h_tau, axis=(1, 2))
    pos = int(np.argmax(defect))
    worst_matrix = float(defect[pos])
    ok = worst_matrix <= tol and all(c.worst <= tol for c in checks)
    return TrsReport(ok, tol, tuple(checks), worst_matrix, indices[pos])


def _parse_coefficient(key, text, allowed):
    try:
        node = ex.parse(text)
    except ModelSyntaxError as err:
        raise type(err)(f"{key}: {err.args[0]}") from None
    extra = ex.free_symbols(node) - allowed
    if extra:
        raise UnknownSymbol(f"{key}: unknown symbol(s) {sorted(extra)}")
    return node


def parse_model(text: str, name="") -> CliffordModel:
    """Parse a model document (TOML: format/space/F0..F4 plus [params])."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ModelSyntaxError(f"model file is not valid TOML: {err}") from None
    if doc.get("format") != 1:
        raise ModelSyntaxError("model file must declare `format = 1`")
    if "space" not in doc:
        raise ModelSyntaxError("model file must declare `space`")
    space = parse_space(str(doc["space"]))
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise ModelSyntaxError("`params` must be a table of name = value")
    for key, value in params.items():
        if not isinstance(value, (int, float)):
            raise ModelSyntaxError(f"parameter {key!r} must be a number")
    allowed = set(coordinate_names(space)) | set(params)
    coeffs = []
    for j in range(5):
        key = f"F{j}"
        if key not in doc:
            raise ModelSyntaxError(f"model file is missing coefficient {key}")
        coeffs.append(_parse_coefficient(key, str(doc[key]), allowed))
    return CliffordModel(
        space,
        tuple(coeffs),
        tuple(sorted((k, float(v)) for k, v in params.items())),
        "clifford",
        name=name,
    )


def _model(space_text, coeffs, params=(), family="clifford", name="", description=""):
    space = parse_space(space_text)
    allowed = set(coordinate_names(space)) | {k for k, _ in params}
    parsed = tuple(_parse_coefficient(f"F{j}", c, allowed) for j, c in enumerate(coeffs))
    return CliffordModel(space, parsed, tuple(params), family, name, description)


def hopf_models():
    """Built-in model registry.

    The 3-sphere Hopf restriction carries the same class as its equatorial
    2-sphere restriction (restriction induces an isomorphism on the relevant
    groups), so it is evaluated on that 2-sphere grid.
    """
    registry = {}

    def add(model):
        registry[model.name] = model

    add(
        _model(
            "S:1,2",
            ("x1", "x2", "x0", "0", "0"),
            name="hopf-s12",
            description="Hopf bundle restricted to the TR 2-sphere",
        )
    )
    add(
        _model(
            "S:1,2",
            ("x1", "x2", "x0", "0", "0"),
            name="hopf-s13",
            description=(
                "Hopf bundle restricted to the TR 3-sphere; computed on the "
                "equatorial TR 2-sphere carrying the same class"
            ),
        )
    )
    add(
        _model(
            "S:0,3",
            ("x0", "x1", "x2"),
            family="pauli-line",
            name="hopf-s03",
            description="rank-1 Hopf line bundle over the antipodal 2-sphere",
        )
    )
    add(
        _model(
            "T:0,2,0",
            ("sin(k1)", "sin(k2)", "m + cos(k1) + cos(k2)", "t*sin(k1)*cos(k2)", "0"),
            params=(("m", 1.0), ("t", 0.5)),
            name="mass-t020",
            description="two-parameter mass family on the TR 2-torus",
        )
    )
    for space_text, suffix in [
        ("T:0,2,0", "t020"),
        ("T:0,3,0", "t030"),
        ("S:1,2", "s12"),
        ("S:2,1", "s21"),
        ("S:0,3", "s03"),
        ("T:0,1,1", "t011"),
    ]:
        add(
            _model(
                space_text,
                ("0", "0", "1", "0", "0"),
                name=f"trivial-{suffix}",
                description="constant-Hamiltonian product model",
            )
        )
    return registry


_REGISTRY = None


def builtin_model(name: str) -> CliffordModel:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = hopf_models()
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise UnsupportedSpace(f"unknown builtin model {name!r} (known: {known})") from None


def load_model(ref: str) -> CliffordModel:
    """Resolve ``builtin:NAME``, or parse ``ref`` as model document text."""
    if ref.startswith("builtin:"):
        return builtin_model(ref.split(":", 1)[1])
    return parse_model(ref)
