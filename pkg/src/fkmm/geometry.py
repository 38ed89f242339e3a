"""Discretized involutive base spaces.

Grids carry an involution that acts exactly on indices (no interpolation):
reflection directions send m to -m mod n, free directions translate by half a
period, trivial directions do nothing.  Spheres use a cell-centered
latitude/longitude mesh (poles kept as two extra cap points) on which all
three sphere involutions in scope are index-exact.

Plaquettes are oriented polygons of grid indices; every closed surface is
covered with each interior edge traversed once in each direction, so signed
sums over plaquettes telescope correctly.  The half-domain decomposition
returns the plaquettes of a fundamental domain for the involution on a 2D
cycle together with its boundary loop(s): on each boundary loop the
involution acts as position p -> -p mod L with the time-reversal-invariant
points at positions 0 and L/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadSelector, NoTRDirection, OddResolution, UnsupportedDimension, UnsupportedSpace
from .spaces import Sphere, Torus


@dataclass(frozen=True)
class CycleSelector:
    """Names a 2D sub-torus: a direction pair plus offsets for the rest."""

    dirs: tuple
    offsets: tuple = ()  # ((direction, index), ...)

    def label(self, grid=None):
        d1, d2 = self.dirs
        text = f"k{d1 + 1}^k{d2 + 1}"
        for direction, m in self.offsets:
            if grid is not None and m == grid.n // 2:
                value = "pi"
            else:
                value = str(m)
            text += f"@k{direction + 1}={value}"
        return text


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple
    structure: str  # "empty" | "isolated" | "circle" | "surface" | "full"


@dataclass(frozen=True)
class HalfDomain:
    """Fundamental-domain plaquettes plus oriented boundary loops.

    ``sum(sign * loop_phase) - sum(region plaquette phases)`` is 2*pi times
    an integer for link phases derived from any single-valued gauge.
    """

    region: tuple  # plaquette paths
    loops: tuple  # (points, sign) pairs; points form a closed loop


class TorusGrid:
    """Uniform grid on an involutive torus, n points per direction."""

    def __init__(self, space: Torus, n: int):
        if n % 2 != 0:
            raise OddResolution(f"n={n} must be even")
        if n < 8:
            raise OddResolution(f"n={n} too coarse (need n >= 8)")
        d = space.dimension
        if d < 1 or d > 3:
            raise UnsupportedDimension(f"torus grids support dimensions 1..3, got {d}")
        self.space = space
        self.n = n
        self.factor_types = ("trivial",) * space.a + ("tr",) * space.b + ("free",) * space.c
        self.d = d

    def points(self):
        n, d = self.n, self.d
        idx = [0] * d
        while True:
            yield tuple(idx)
            for axis in range(d - 1, -1, -1):
                idx[axis] += 1
                if idx[axis] < n:
                    break
                idx[axis] = 0
            else:
                return

    @property
    def num_points(self):
        return self.n ** self.d

    def tau(self, idx):
        n = self.n
        out = []
        for kind, m in zip(self.factor_types, idx):
            if kind == "trivial":
                out.append(m)
            elif kind == "tr":
                out.append((-m) % n)
            else:
                out.append((m + n // 2) % n)
        return tuple(out)

    def coords(self, idx):
        return tuple(2.0 * np.pi * m / self.n for m in idx)

    def coord_arrays(self, indices):
        arr = np.asarray(indices, dtype=float).reshape(len(indices), self.d)
        return 2.0 * np.pi * arr / self.n

    def fixed_points(self) -> FixedPointSet:
        fs = self.space.fixed_set
        if fs.structure == "empty":
            return FixedPointSet((), "empty")
        pts = tuple(p for p in self.points() if self.tau(p) == p)
        return FixedPointSet(pts, fs.structure)

    def shift(self, idx, direction, step=1):
        out = list(idx)
        out[direction] = (out[direction] + step) % self.n
        return tuple(out)

    def full_surface(self) -> CycleSelector:
        if self.d != 2:
            raise BadSelector("full-surface selector needs a 2D grid")
        return CycleSelector((0, 1))

    def _check_selector(self, selector: CycleSelector):
        d1, d2 = selector.dirs
        if not (0 <= d1 < self.d and 0 <= d2 < self.d and d1 != d2):
            raise BadSelector(f"direction pair {selector.dirs} invalid for d={self.d}")
        fixed = dict(selector.offsets)
        rest = set(range(self.d)) - {d1, d2}
        if set(fixed) != rest:
            raise BadSelector(f"offsets must cover directions {sorted(rest)}")
        for direction, m in fixed.items():
            if not 0 <= m < self.n:
                raise BadSelector(f"offset {m} out of range")

    def _embed(self, selector, m1, m2):
        idx = [0] * self.d
        d1, d2 = selector.dirs
        idx[d1], idx[d2] = m1 % self.n, m2 % self.n
        for direction, m in selector.offsets:
            idx[direction] = m
        return tuple(idx)

    def cycle_points(self, selector: CycleSelector):
        self._check_selector(selector)
        return [
            self._embed(selector, m1, m2)
            for m1 in range(self.n)
            for m2 in range(self.n)
        ]

    def plaquettes(self, selector: CycleSelector | None = None):
        """Oriented 4-cycles covering the selected 2D sub-torus once."""
        if selector is None:
            selector = self.full_surface()
        self._check_selector(selector)
        out = []
        for m1 in range(self.n):
            for m2 in range(self.n):
                out.append(
                    (
                        self._embed(selector, m1, m2),
                        self._embed(selector, m1 + 1, m2),
                        self._embed(selector, m1 + 1, m2 + 1),
                        self._embed(selector, m1, m2 + 1),
                    )
                )
        return out

    def _cycle_is_tau_closed(self, selector):
        d1, d2 = selector.dirs
        if self.factor_types[d1] != "tr" or self.factor_types[d2] != "tr":
            return False
        for direction, m in selector.offsets:
            kind = self.factor_types[direction]
            if kind == "tr" and m not in (0, self.n // 2):
                return False
            if kind == "free":
                return False
        return True

    def half_domain(self, selector: CycleSelector | None = None) -> HalfDomain:
        """Effective (half) zone of a 2D cycle whose both directions are
        reflection directions: plaquettes with the second coordinate in
        [0, n/2) plus the two invariant boundary loops."""
        if selector is None:
            selector = self.full_surface()
        self._check_selector(selector)
        if not self._cycle_is_tau_closed(selector):
            raise NoTRDirection(
                "half-domain needs a cycle with two reflection directions and "
                "invariant offsets"
            )
        half = self.n // 2
        region = tuple(
            (
                self._embed(selector, m1, m2),
                self._embed(selector, m1 + 1, m2),
                self._embed(selector, m1 + 1, m2 + 1),
                self._embed(selector, m1, m2 + 1),
            )
            for m1 in range(self.n)
            for m2 in range(half)
        )
        loop0 = tuple(self._embed(selector, t, 0) for t in range(self.n))
        loop1 = tuple(self._embed(selector, t, half) for t in range(self.n))
        return HalfDomain(region, ((loop0, +1), (loop1, -1)))

    def interior_indices(self, selector: CycleSelector | None = None):
        """Open half of the cycle; disjoint from its involution image."""
        if selector is None:
            selector = self.full_surface()
        half = self.n // 2
        return [
            self._embed(selector, m1, m2)
            for m1 in range(self.n)
            for m2 in range(1, half)
        ]


_SPHERE_INVOLUTIONS = {(0, 3): "antipodal", (1, 2): "tr", (2, 1): "axial"}


class SphereGrid:
    """Cell-centered latitude/longitude mesh on the 2-sphere plus two poles.

    Latitudes sit at theta = pi (i + 1/2) / n_theta, longitudes at
    phi = 2 pi j / n_phi.  The polar caps are covered by two polygon
    plaquettes bounded by the first and last latitude rings.
    """

    def __init__(self, space: Sphere, n_theta: int, n_phi: int):
        key = (space.p, space.q)
        if key not in _SPHERE_INVOLUTIONS:
            raise UnsupportedSpace(f"no 2-sphere grid for {space}")
        if n_phi % 2 != 0:
            raise OddResolution(f"n_phi={n_phi} must be even")
        if n_theta < 4 or n_phi < 4:
            raise OddResolution("sphere resolution too coarse (need >= 4)")
        self.space = space
        self.involution = _SPHERE_INVOLUTIONS[key]
        self.n_theta = n_theta
        self.n_phi = n_phi

    def points(self):
        yield "N"
        for i in range(self.n_theta):
            for j in range(self.n_phi):
                yield (i, j)
        yield "S"

    @property
    def num_points(self):
        return self.n_theta * self.n_phi + 2

    def _angles(self, idx):
        if idx == "N":
            return 0.0, 0.0
        if idx == "S":
            return np.pi, 0.0
        i, j = idx
        return np.pi * (i + 0.5) / self.n_theta, 2.0 * np.pi * j / self.n_phi

    def xyz(self, idx):
        theta, phi = self._angles(idx)
        st, ct = np.sin(theta), np.cos(theta)
        if self.involution == "antipodal":
            return (st * np.cos(phi), st * np.sin(phi), ct)
        if self.involution == "tr":
            return (ct, st * np.cos(phi), st * np.sin(phi))
        return (ct, st * np.sin(phi), st * np.cos(phi))

    def tau(self, idx):
        np_, nt = self.n_phi, self.n_theta
        if self.involution == "antipodal":
            if idx == "N":
                return "S"
            if idx == "S":
                return "N"
            i, j = idx
            return (nt - 1 - i, (j + np_ // 2) % np_)
        if idx in ("N", "S"):
            return idx
        i, j = idx
        if self.involution == "tr":
            return (i, (j + np_ // 2) % np_)
        return (i, (np_ - j) % np_)

    def fixed_points(self) -> FixedPointSet:
        if self.involution == "antipodal":
            return FixedPointSet((), "empty")
        pts = tuple(p for p in self.points() if self.tau(p) == p)
        structure = "isolated" if self.involution == "tr" else "circle"
        return FixedPointSet(pts, structure)

    def plaquettes(self, selector=None):
        """Interior quads plus the two polar cap polygons (whole surface)."""
        if selector is not None:
            raise BadSelector("sphere grids only support the full surface")
        nt, np_ = self.n_theta, self.n_phi
        out = []
        for i in range(nt - 1):
            for j in range(np_):
                jp = (j + 1) % np_
                out.append(((i, j), (i + 1, j), (i + 1, jp), (i, jp)))
        out.append(tuple((0, j) for j in range(np_)))
        out.append(tuple((nt - 1, (np_ - j) % np_) for j in range(np_)))
        return out

    def half_domain(self, selector=None) -> HalfDomain:
        """Hemisphere phi in [0, pi] bounded by the meridian great circle
        through the two poles (the invariant loop holding both fixed
        points)."""
        if self.involution != "tr":
            raise NoTRDirection("sphere half-domain needs the two-fixed-point involution")
        nt, np_ = self.n_theta, self.n_phi
        half = np_ // 2
        region = []
        for i in range(nt - 1):
            for j in range(half):
                region.append(((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)))
        region.append(("N",) + tuple((0, j) for j in range(half + 1)))
        region.append(("S",) + tuple((nt - 1, half - j) for j in range(half + 1)))
        loop = (
            ("N",)
            + tuple((i, 0) for i in range(nt))
            + ("S",)
            + tuple((nt - 1 - i, half) for i in range(nt))
        )
        return HalfDomain(tuple(region), ((loop, +1),))


def build_torus_grid(space: Torus, n: int) -> TorusGrid:
    return TorusGrid(space, n)


def build_sphere_grid(space: Sphere, n: int) -> SphereGrid:
    return SphereGrid(space, n, n)


def build_grid(space, n):
    """Grid for any space with a supported discretization."""
    if isinstance(space, Torus):
        return build_torus_grid(space, n)
    if isinstance(space, Sphere):
        return build_sphere_grid(space, n)
    raise UnsupportedSpace(f"cannot build a grid for {space!r}")
