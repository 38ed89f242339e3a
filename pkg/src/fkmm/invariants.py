"""Numerical topological invariants of projector fields on involutive grids.

Chern numbers come from the standard link-variable method: the phase of the
determinant of the cycle of frame overlaps around every plaquette, summed and
divided by 2 pi.  All phases use the principal branch, and any plaquette
phase near the branch cut makes the result non-admissible instead of silently
wrong.

The Z2 (Kramers) index of a time-reversal invariant 2D cycle uses the
gauge-invariant half-domain method: curvature collected over a fundamental
domain minus the boundary connection evaluated in a boundary gauge locked to
the time-reversal pairing.  The integer so produced is a lattice vorticity
count; its parity is the index.  A second, independent route (kept as a
cross-check oracle) builds a smooth periodic gauge by parallel transport,
evaluates the normalized Pfaffian of the sewing matrix at the four invariant
momenta and multiplies the signs.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import models as md
from .cohomology import ClassificationResult, classify
from .errors import (
    GapClosed,
    NoIsolatedFixedPoints,
    NotAdmissible,
    NotAntisymmetric,
    NotFree,
    NumericalInconsistency,
    OddChernParity,
    TRSViolation,
)
from .geometry import CycleSelector, SphereGrid, TorusGrid, build_grid
from .spaces import Sphere, Torus

ADMISSIBLE_FRACTION = 0.95
INTEGER_TOL = 1e-6


class ProjectorField:
    """Frames spanning the occupied bands at each grid index.

    Frames are computed lazily in vectorized batches and cached; the gauge
    (choice of orthonormal frame) is free, every invariant below is gauge
    invariant.
    """

    def __init__(self, grid, rank, dim, family, frame_batch_fn, label=""):
        self.grid = grid
        self.rank = rank
        self.dim = dim
        self.family = family
        self._frame_batch_fn = frame_batch_fn
        self._frames = {}
        self.label = label

    @classmethod
    def from_model(cls, model: md.CliffordModel, grid, gap_tol=None):
        scan = md.gap_scan(model, grid, check=True, gap_tol=gap_tol)

        def batch(indices):
            h, values = md.hamiltonians(model, grid, indices)
            q = md.q_values(values)
            proj = md.projectors_from_values(values, q, model)
            return md.frames_from_projectors(proj, model.rank)

        out = cls(grid, model.rank, model.dim, model.family, batch, label=model.name)
        out.gap_scan = scan
        return out

    @classmethod
    def from_frames(cls, grid, frames: dict, rank, family="clifford"):
        dim = next(iter(frames.values())).shape[0]
        out = cls(grid, rank, dim, family, None)
        out._frames = dict(frames)
        return out

    def ensure(self, indices):
        missing = [p for p in indices if p not in self._frames]
        if not missing:
            return
        if self._frame_batch_fn is None:
            raise KeyError(f"no frames for {missing[:3]}...")
        frames = self._frame_batch_fn(missing)
        for p, fr in zip(missing, frames):
            self._frames[p] = fr

    def frame(self, idx):
        if idx not in self._frames:
            self.ensure([idx])
        return self._frames[idx]

    def theta_frame(self, frame):
        """Antiunitary lift applied columnwise; maps a frame spanning the
        fiber at x to one spanning the fiber at tau(x)."""
        return md.theta_apply(frame, self.family)

    def twisted(self, rng):
        """Multiply every cached-or-computable frame by a random unitary."""
        base = self

        def batch(indices):
            base.ensure(indices)
            out = []
            for p in indices:
                u = _random_unitary(rng, base.rank)
                out.append(base.frame(p) @ u)
            return out

        return ProjectorField(self.grid, self.rank, self.dim, self.family, batch,
                              label=self.label)


def _random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def _edge_det(field, a, b):
    fa, fb = field.frame(a), field.frame(b)
    overlap = fa.conj().T @ fb
    if field.rank == 1:
        return complex(overlap[0, 0])
    return complex(np.linalg.det(overlap))


def plaquette_phase(field, path):
    """Principal-branch phase of the determinant around one oriented
    plaquette (any polygon of grid indices)."""
    det = 1.0 + 0.0j
    for i, a in enumerate(path):
        det *= _edge_det(field, a, path[(i + 1) % len(path)])
    if abs(det) < 1e-12:
        raise GapClosed("vanishing plaquette overlap (frames nearly orthogonal)")
    return float(np.angle(det))


def _phase_sum(field, plaqs):
    total = 0.0
    max_abs = 0.0
    for path in plaqs:
        phase = plaquette_phase(field, path)
        total += phase
        max_abs = max(max_abs, abs(phase))
    return total, max_abs


def _check_admissible(max_abs):
    limit = ADMISSIBLE_FRACTION * np.pi
    if max_abs >= limit:
        raise NotAdmissible(
            f"plaquette phase {max_abs:.4f} exceeds {limit:.4f}; refine the grid"
        )


def _integer(value, what):
    nearest = int(round(value))
    if abs(value - nearest) > INTEGER_TOL:
        raise NumericalInconsistency(f"{what} = {value!r} is not close to an integer")
    return nearest


def chern_number(field: ProjectorField, selector: CycleSelector | None = None,
                 with_diagnostics=False):
    """First Chern number of the field over a closed 2D cycle."""
    plaqs = field.grid.plaquettes(selector)
    total, max_abs = _phase_sum(field, plaqs)
    _check_admissible(max_abs)
    value = _integer(total / (2.0 * np.pi), "Chern sum / 2 pi")
    if with_diagnostics:
        return value, max_abs
    return value


def pfaffian(a: np.ndarray) -> complex:
    """Pfaffian of a 2x2 or 4x4 complex antisymmetric matrix (closed form)."""
    a = np.asarray(a, dtype=complex)
    if a.shape not in [(2, 2), (4, 4)]:
        raise NotAntisymmetric(f"unsupported shape {a.shape}")
    if np.linalg.norm(a + a.T) > 1e-8:
        raise NotAntisymmetric("matrix is not antisymmetric")
    if a.shape == (2, 2):
        return complex(a[0, 1])
    return complex(a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2])


@dataclass
class SewingField:
    """Overlaps w_ab(k) = <u_a(tau k), theta u_b(k)> over a set of indices."""

    matrices: dict
    max_unitarity_defect: float
    max_fixed_point_asymmetry: float


def sewing(field: ProjectorField, indices=None) -> SewingField:
    grid = field.grid
    if indices is None:
        indices = list(grid.points())
    matrices = {}
    unit_defect = 0.0
    asym = 0.0
    eye = np.eye(field.rank)
    for idx in indices:
        w = field.frame(grid.tau(idx)).conj().T @ field.theta_frame(field.frame(idx))
        matrices[idx] = w
        unit_defect = max(unit_defect, float(np.linalg.norm(w.conj().T @ w - eye)))
        if grid.tau(idx) == idx:
            asym = max(asym, float(np.linalg.norm(w + w.T)))
    return SewingField(matrices, unit_defect, asym)


def _loop_tr_connection(field: ProjectorField, loop):
    """Boundary connection of an invariant loop in the transported
    time-reversal-locked gauge.

    The loop satisfies tau(loop[p]) = loop[-p mod L], with invariant momenta
    at positions 0 and L/2.  The gauge: a Kramers frame (v, theta v) at
    position 0, parallel transport (polar orthonormalization) along the first
    half, theta-images on the second half.  In that gauge all link phases
    vanish identically except at the far invariant momentum, where the phase
    is that of (minus) the Pfaffian of the transported frame's sewing matrix;
    the loop connection is exactly twice that junction angle.  Its 2 pi branch
    ambiguity shifts the vorticity count by 2, so the parity is branch-safe.
    """
    L = len(loop)
    half = L // 2
    base = field.frame(loop[0])
    v = base[:, 0:1]
    g = np.concatenate([v, field.theta_frame(v)], axis=1)
    for p in range(1, half + 1):
        fr = field.frame(loop[p])
        g = _transport(fr, g)
    w = g.conj().T @ field.theta_frame(g)
    pf = pfaffian(_antisymmetrize(w))
    if abs(abs(pf) - 1.0) > 1e-6:
        raise NumericalInconsistency(f"|Pf| = {abs(pf)} != 1 on boundary loop")
    return 2.0 * float(np.angle(-pf))


def _transport(frame, g):
    """Move the frame g through the plane spanned by ``frame`` (the overlap
    stays Hermitian positive, so the step carries no phase)."""
    a = frame @ (frame.conj().T @ g)
    return _orthonormalize(a)


def z2_index(field: ProjectorField, half_domain) -> int:
    """Kramers Z2 index of a time-reversal invariant 2D cycle, as +-1.

    Vorticity count: (curvature over the fundamental domain minus the signed
    boundary connection in the time-reversal-locked gauge) / 2 pi is an exact
    integer; the index is its parity.
    """
    if field.rank != 2:
        raise NoIsolatedFixedPoints("Kramers index needs rank-2 frames")
    region_total, max_abs = _phase_sum(field, half_domain.region)
    _check_admissible(max_abs)
    boundary_total = 0.0
    for loop, sign in half_domain.loops:
        boundary_total += sign * _loop_tr_connection(field, loop)
    count = _integer((region_total - boundary_total) / (2.0 * np.pi), "Z2 vorticity")
    return 1 if count % 2 == 0 else -1


@dataclass
class FkmResult:
    signs: dict  # fixed point label -> +-1 (canonical coset representative)
    indices: dict  # named Z2 values, +-1


def _axis_plane_selector(grid: TorusGrid, axis, offset):
    dirs = tuple(sorted(set(range(grid.d)) - {axis}))
    return CycleSelector(dirs, ((axis, offset),))


def _point_label(idx):
    if isinstance(idx, tuple):
        return ",".join(str(m) for m in idx)
    return str(idx)


def fkm_indices_field(field: ProjectorField) -> FkmResult:
    """Fixed-point sign data of a field over a grid with isolated fixed
    points.  Signs are reported as canonical coset representatives: the
    independent Z2 indices are pinned on distinguished momenta and every
    other fixed point carries +1."""
    grid = field.grid
    space = grid.space
    if isinstance(grid, SphereGrid):
        if grid.involution != "tr":
            raise NoIsolatedFixedPoints(f"{space} has no isolated fixed points")
        nu = z2_index(field, grid.half_domain())
        return FkmResult({"N": nu, "S": 1}, {"nu": nu})
    if not (isinstance(space, Torus) and space.a == 0 and space.c == 0 and space.b >= 1):
        raise NoIsolatedFixedPoints(f"{space} has no isolated fixed points")
    n = grid.n
    fixed = grid.fixed_points().points
    if space.b == 1:
        return FkmResult({_point_label(p): 1 for p in fixed}, {"nu": 1})
    if space.b == 2:
        nu = z2_index(field, grid.half_domain(grid.full_surface()))
        signs = {_point_label(p): 1 for p in fixed}
        signs[_point_label((0, 0))] = nu
        return FkmResult(signs, {"nu": nu})
    # Three reflection directions: one strong and three weak indices from the
    # six invariant planes.
    plane = {}
    for axis in range(3):
        for offset in (0, n // 2):
            sel = _axis_plane_selector(grid, axis, offset)
            plane[(axis, offset)] = z2_index(field, grid.half_domain(sel))
    strongs = {plane[(axis, 0)] * plane[(axis, n // 2)] for axis in range(3)}
    if len(strongs) != 1:
        raise NumericalInconsistency(
            f"strong index disagrees across plane pairs: {sorted(strongs)}"
        )
    strong = strongs.pop()
    weak = [plane[(axis, n // 2)] for axis in range(3)]
    indices = {"strong": strong, "weak_1": weak[0], "weak_2": weak[1], "weak_3": weak[2]}
    signs = {_point_label(p): 1 for p in fixed}
    signs[_point_label((0, 0, 0))] = strong * weak[0] * weak[1] * weak[2]
    half = n // 2
    axes = [(half, 0, 0), (0, half, 0), (0, 0, half)]
    for axis, point in enumerate(axes):
        signs[_point_label(point)] = weak[axis]
    return FkmResult(signs, indices)


def fkm_indices(model: md.CliffordModel, grid) -> FkmResult:
    return fkm_indices_field(ProjectorField.from_model(model, grid))


def free_part_cycles(grid):
    """Generating 2D cycles of the free part of the classification group.

    One cycle per (trivial, reflection) direction pair, plus one per
    (reflection, free) pair; for spheres the single surface cycle.
    """
    if isinstance(grid, SphereGrid):
        return [None]
    space = grid.space
    trivial = list(range(space.a))
    tr = list(range(space.a, space.a + space.b))
    free = list(range(space.a + space.b, grid.d))
    cycles = []
    for i in tr:
        for f in free:
            cycles.append(_pair_selector(grid, i, f))
    for j in trivial:
        for i in tr:
            cycles.append(_pair_selector(grid, j, i))
    return cycles


def _pair_selector(grid, d1, d2):
    dirs = (min(d1, d2), max(d1, d2))
    offsets = tuple((k, 0) for k in range(grid.d) if k not in dirs)
    return CycleSelector(dirs, offsets)


def _cycle_label(grid, selector):
    if selector is None:
        return "surface"
    return selector.label(grid)


@dataclass
class FkmmFreeResult:
    classification: ClassificationResult
    coords: dict  # generator label -> int (or None when not computable)
    chern: dict  # cycle label -> raw Chern number
    note: str = ""


def fkmm_free_field(field: ProjectorField, rank: int) -> FkmmFreeResult:
    """Class coordinates of a field over a free-involution space, from Chern
    numbers on the generating cycles.

    Halved (with the odd-rank offset over the antipodal 2-sphere) exactly as
    the classification embeds the classes among the integers; a Chern number
    of the wrong parity signals a broken model.
    """
    grid = field.grid
    space = grid.space
    if not space.fixed_set.is_empty:
        raise NotFree(f"{space} has fixed points")
    result = classify(space, rank)
    coords = {}
    chern = {}
    note = ""
    if isinstance(space, Sphere):
        c = chern_number(field)
        chern["surface"] = c
        if rank % 2 == 1:
            if c % 2 == 0:
                raise OddChernParity(
                    f"odd-rank field over {space} must have odd Chern number, got {c}"
                )
            coords["surface"] = (c - rank) // 2
        else:
            if c % 2 == 1:
                raise OddChernParity(
                    f"even-rank field over {space} must have even Chern number, got {c}"
                )
            coords["surface"] = c // 2
        return FkmmFreeResult(result, coords, chern, note)
    for sel in free_part_cycles(grid):
        label = _cycle_label(grid, sel)
        c = chern_number(field, sel)
        chern[label] = c
        if c % 2 == 1:
            raise OddChernParity(
                f"Chern number on {label} must be even for {space}, got {c}"
            )
        coords[label] = c // 2
    if result.group is not None and result.group.torsion:
        for i in range(len(result.group.torsion)):
            coords[f"torsion_{i}"] = None
        note = "torsion coordinates carry no Chern data and are not computed"
    return FkmmFreeResult(result, coords, chern, note)


def fkmm_free(model: md.CliffordModel, grid) -> FkmmFreeResult:
    return fkmm_free_field(ProjectorField.from_model(model, grid), model.rank)


def gauge_twist(field: ProjectorField, seed=0) -> ProjectorField:
    """Random per-point unitary change of frames; invariants must not move."""
    return field.twisted(np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# Independent cross-check: smooth-gauge Pfaffian construction.


def _orthonormalize(a):
    h = a.conj().T @ a
    vals, vecs = np.linalg.eigh(h)
    if float(vals.min()) < 1e-12:
        raise NumericalInconsistency("parallel transport degenerated")
    inv_sqrt = vecs @ np.diag(vals ** -0.5) @ vecs.conj().T
    return a @ inv_sqrt


def _unitary_fractional_powers(w, n):
    """[w^(-m/n) for m in 0..n-1] through a minimal-winding eigenvalue log.

    Eigenphases are shifted by 2 pi so that their sum equals the principal
    angle of det(w).  On time-reversal invariant loops the holonomy spectrum
    comes in conjugate pairs and can sit exactly at -1; the minimal-winding
    branch is the one compatible with that pairing, and it keeps the spread
    correction free of spurious determinant winding.
    """
    vals, vecs = np.linalg.eig(w)
    vecs_inv = np.linalg.inv(vecs)
    phases = np.angle(vals)
    target = float(np.angle(np.linalg.det(w)))
    while phases.sum() - target > np.pi:
        phases[int(np.argmax(phases))] -= 2.0 * np.pi
    while phases.sum() - target < -np.pi:
        phases[int(np.argmin(phases))] += 2.0 * np.pi
    return [
        vecs @ np.diag(np.exp(-1j * phases * (m / n))) @ vecs_inv for m in range(n)
    ]


def _principal_sqrt_step(s, det_prev, det_next):
    ratio = det_next / det_prev
    if abs(np.angle(ratio)) > 0.5 * np.pi:
        raise NumericalInconsistency(
            "square-root branch tracking lost (grid too coarse)"
        )
    return s * np.sqrt(ratio)


def pfaffian_oracle_index(model: md.CliffordModel, grid: TorusGrid) -> int:
    """Product of normalized sewing-matrix Pfaffians over the four invariant
    momenta of a 2-torus with both directions reflected.

    A smooth periodic gauge is built by parallel transport along the base row
    and then up every column (loop holonomies spread evenly), the square-root
    branch is continued along those same paths from the origin, where it is
    normalized so a constant field gives +1.
    """
    space = grid.space
    if not (isinstance(space, Torus) and (space.a, space.b, space.c) == (0, 2, 0)):
        raise NoIsolatedFixedPoints("oracle supports the doubly-reflected 2-torus")
    n = grid.n
    half = n // 2

    def projector_at(indices):
        h, values = md.hamiltonians(model, grid, indices)
        q = md.q_values(values)
        if float(q.min()) <= md.gap_tolerance() * max(float(q.max()), 1e-300):
            raise GapClosed("gap closed on transport path")
        return md.projectors_from_values(values, q, model)

    # Row m2 = 0: transport, then spread the loop holonomy.
    row_indices = [(m, 0) for m in range(n)]
    row_proj = projector_at(row_indices)
    frames = {}
    g = md.frames_from_projectors(row_proj[0][None], model.rank)[0]
    transported = [g]
    for m in range(1, n):
        g = _orthonormalize(row_proj[m] @ g)
        transported.append(g)
    closing = _orthonormalize(row_proj[0] @ transported[-1])
    holonomy = transported[0].conj().T @ closing
    for m, corr in enumerate(_unitary_fractional_powers(holonomy, n)):
        frames[(m, 0)] = transported[m] @ corr

    # Columns: same construction starting from the row gauge.
    for m1 in range(n):
        col_indices = [(m1, m2) for m2 in range(n)]
        col_proj = projector_at(col_indices)
        g = frames[(m1, 0)]
        transported = [g]
        for m2 in range(1, n):
            g = _orthonormalize(col_proj[m2] @ g)
            transported.append(g)
        closing = _orthonormalize(col_proj[0] @ transported[-1])
        holonomy = transported[0].conj().T @ closing
        for m2, corr in enumerate(_unitary_fractional_powers(holonomy, n)):
            frames[(m1, m2)] = transported[m2] @ corr

    def sewing_at(idx):
        return frames[grid.tau(idx)].conj().T @ md.theta_apply(frames[idx], model.family)

    def normalized_sign(w, s):
        value = pfaffian(_antisymmetrize(w)) / s
        if abs(abs(value) - 1.0) > 1e-6:
            raise NumericalInconsistency(f"|Pf/sqrt(det)| = {abs(value)} != 1")
        sign = int(round(value.real))
        if sign not in (-1, 1) or abs(value - sign) > 1e-6:
            raise NumericalInconsistency(f"fixed-point sign {value} not real")
        return sign

    base = sewing_at((0, 0))
    s = pfaffian(_antisymmetrize(base))  # normalization: sign +1 at the origin
    det_prev = complex(np.linalg.det(base))
    signs = {(0, 0): 1}

    # Continue the branch along the base row to (half, 0).
    s_row = s
    det_row = det_prev
    for m in range(1, half + 1):
        w = sewing_at((m, 0))
        det_next = complex(np.linalg.det(w))
        s_row = _principal_sqrt_step(s_row, det_row, det_next)
        det_row = det_next
        if m == half:
            signs[(half, 0)] = normalized_sign(w, s_row)
    # Continue up the two invariant columns.
    for m1, s0 in [((0), s), ((half), s_row)]:
        s_col = s0
        det_col = complex(np.linalg.det(sewing_at((m1, 0))))
        for m2 in range(1, half + 1):
            w = sewing_at((m1, m2))
            det_next = complex(np.linalg.det(w))
            s_col = _principal_sqrt_step(s_col, det_col, det_next)
            det_col = det_next
            if m2 == half:
                signs[(m1, half)] = normalized_sign(w, s_col)
    product = 1
    for value in signs.values():
        product *= value
    return product


def _antisymmetrize(w):
    # The sewing matrix at an invariant momentum is antisymmetric up to
    # rounding; symmetrize away the noise before taking the Pfaffian.
    defect = np.linalg.norm(w + w.T)
    if defect > 1e-8:
        raise NotAntisymmetric(f"sewing matrix asymmetry {defect:.2e} at a fixed point")
    return (w - w.T) / 2.0


# ---------------------------------------------------------------------------
# Report pipeline.


@dataclass
class InvariantReport:
    model: str
    space: str
    grid_n: int
    rank: int
    min_gap: float
    chern: dict
    fkm_signs: dict
    z2_indices: dict
    fkmm_group: str | None
    fkmm_coords: dict | None
    admissible: bool
    max_plaquette_phase: float
    max_unitarity_defect: float
    note: str = ""

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def lines(self):
        out = [
            f"model: {self.model}",
            f"space: {self.space}  grid: n={self.grid_n}  rank: {self.rank}",
            f"min gap: {self.min_gap:.6g}",
        ]
        for label, value in self.chern.items():
            out.append(f"chern[{label}]: {value}")
        for label, value in self.z2_indices.items():
            out.append(f"Z2 index[{label}]: {value:+d}")
        if self.fkm_signs:
            signs = "  ".join(f"{k}:{v:+d}" for k, v in self.fkm_signs.items())
            out.append(f"fixed-point signs: {signs}")
        if self.fkmm_group is not None:
            out.append(f"class group: {self.fkmm_group}")
            if self.fkmm_coords:
                coords = "  ".join(
                    f"{k}={'?' if v is None else v}" for k, v in self.fkmm_coords.items()
                )
                out.append(f"class coordinates: {coords}")
        out.append(
            f"diagnostics: admissible={str(self.admissible).lower()} "
            f"max_plaquette_phase={self.max_plaquette_phase:.4f} "
            f"max_unitarity_defect={self.max_unitarity_defect:.2e}"
        )
        if self.note:
            out.append(f"note: {self.note}")
        return out


def _report_cycles(grid):
    """Cycles listed in the Chern section of a report."""
    if isinstance(grid, SphereGrid):
        return [None]
    if grid.d == 2:
        return [grid.full_surface()]
    return [_axis_plane_selector(grid, axis, 0) for axis in range(3)]


def compute_invariants(model: md.CliffordModel, n: int, which="all", gap_tol=None,
                       trs_tol=1e-9) -> InvariantReport:
    """End-to-end pipeline: symmetry check, gap scan, frames, invariants."""
    grid = build_grid(model.space, n)
    trs = md.verify_trs(model, grid, tol=trs_tol)
    if not trs.ok:
        raise TRSViolation(trs.summary())
    field = ProjectorField.from_model(model, grid, gap_tol=gap_tol)
    space = model.space
    chern = {}
    max_phase = 0.0
    fkm_signs = {}
    z2 = {}
    fkmm_group = None
    fkmm_coords = None
    note = ""

    classification = classify(space, model.rank)
    if classification.status == "group":
        fkmm_group = classification.cell()
    elif classification.status == "unique":
        fkmm_group = "0"

    def want(key):
        return which in ("all", key)

    if want("chern") and space.dimension >= 2:
        for sel in _report_cycles(grid):
            value, phase = chern_number(field, sel, with_diagnostics=True)
            chern[_cycle_label(grid, sel)] = value
            max_phase = max(max_phase, phase)

    isolated = (
        space.fixed_set.structure == "isolated" and space.dimension >= 2
    )
    if want("z2") and isolated:
        result = fkm_indices_field(field)
        fkm_signs = result.signs
        z2 = result.indices

    if want("fkmm"):
        if space.fixed_set.is_empty and space.dimension >= 2:
            free_result = fkmm_free_field(field, model.rank)
            fkmm_coords = free_result.coords
            note = free_result.note
            for label, value in free_result.chern.items():
                chern.setdefault(label, value)
        elif classification.status == "group":
            fkmm_coords = {}
            group = classification.group
            if group.free_rank and not isolated:
                # Positive-dimensional fixed sets: the free part is measured
                # by halved Chern numbers; any torsion is left uncomputed.
                for sel in free_part_cycles(grid):
                    label = _cycle_label(grid, sel)
                    c = chern.get(label)
                    if c is None:
                        c = chern_number(field, sel)
                        chern[label] = c
                    if c % 2 == 1:
                        raise OddChernParity(
                            f"Chern number on {label} must be even for {space}"
                        )
                    fkmm_coords[label] = c // 2
            if isolated:
                indices = z2 or fkm_indices_field(field).indices
                for key, value in indices.items():
                    fkmm_coords[key] = (1 - value) // 2
            uncomputed = (
                len(group.torsion) if not isolated else 0
            )
            for i in range(uncomputed):
                fkmm_coords[f"torsion_{i}"] = None
            if uncomputed:
                note = "torsion coordinates carry no Chern data and are not computed"

    sew = sewing(field, _sewing_sample(grid))
    return InvariantReport(
        model=model.name or "<inline>",
        space=str(space),
        grid_n=n,
        rank=model.rank,
        min_gap=field.gap_scan.min_gap,
        chern=chern,
        fkm_signs=fkm_signs,
        z2_indices=z2,
        fkmm_group=fkmm_group,
        fkmm_coords=fkmm_coords,
        admissible=True,
        max_plaquette_phase=max_phase,
        max_unitarity_defect=sew.max_unitarity_defect,
        note=note,
    )


def _sewing_sample(grid):
    """Small index sample for the unitarity diagnostic."""
    points = list(grid.points())
    if len(points) <= 256:
        return points
    stride = len(points) // 256
    sample = points[::stride]
    return sample


def sweep_index_labels(space) -> list:
    """Stable column set for parameter sweeps over the given space."""
    if space.dimension < 2:
        return []
    if space.fixed_set.structure == "isolated":
        if isinstance(space, Torus) and space.b == 3:
            return ["strong", "weak_1", "weak_2", "weak_3"]
        return ["nu"]
    grid = build_grid(space, 8)
    return [_cycle_label(grid, sel) for sel in free_part_cycles(grid)]


def sweep_point(model: md.CliffordModel, n: int, gap_tol=None):
    """One sweep sample: (gap minimum, index dict or None when closed).

    Gap-closed points report the gap and no indices; a symmetry violation
    still raises, since it signals a structurally broken model rather than a
    phase boundary.
    """
    grid = build_grid(model.space, n)
    trs = md.verify_trs(model, grid)
    if not trs.ok:
        raise TRSViolation(trs.summary())
    scan = md.gap_scan(model, grid, check=False)
    threshold = md.gap_tolerance(gap_tol) * max(scan.max_q, 1e-300)
    if scan.min_q <= threshold:
        return scan.min_gap, None
    field = ProjectorField.from_model(model, grid, gap_tol=gap_tol)
    labels = sweep_index_labels(model.space)
    if not labels:
        return scan.min_gap, {}
    space = model.space
    if space.fixed_set.structure == "isolated":
        return scan.min_gap, fkm_indices_field(field).indices
    values = {}
    for sel in free_part_cycles(grid):
        label = _cycle_label(grid, sel)
        c = chern_number(field, sel)
        if c % 2 == 1:
            raise OddChernParity(f"odd Chern number {c} on {label} for {space}")
        values[label] = c // 2
    return scan.min_gap, values
