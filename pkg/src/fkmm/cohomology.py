"""Closed-form Z2-equivariant cohomology of involutive spheres and tori,
and the resulting classification of time-reversal-symmetric (quaternionic)
vector bundles in dimension <= 3.

The calculator composes three ingredients:

* the cohomology of a fixed point (a polynomial ring on one degree-2 class,
  all torsion of order 2 in positive degree),
* the two sphere families (free antipodal involution, computed through the
  orbit projective space; and suspensions of the fixed point for spheres
  with fixed points),
* a pair of splitting rules that peel one circle factor off an involutive
  torus at a time.

Relative degree-2 groups, and the classification built on them, branch on an
explicit finite catalog: in dimension <= 3 each space admits a closed-form
answer and nothing heavier than the recursions above is needed.

Scope: outside the cataloged spheres and tori the classifying map into the
(relative) degree-2 group is still injective in dimension <= 3 but can fail
to be onto -- certain involutive quotient 3-manifolds (lens-space type)
carry fewer bundle classes than group elements.  The calculator therefore
refuses uncataloged spaces instead of extrapolating, and no attempt is made
to compute the (infinite-dimensional) classifying-space cohomology that
underlies the general theory.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abelian import AbelianGroup, direct_sum
from .errors import UnsupportedSpace
from .spaces import InvolutiveSpace, Sphere, Torus

_Z = AbelianGroup.free(1)
_Z2 = AbelianGroup.cyclic(2)
_0 = AbelianGroup.trivial()


def point_cohomology(k: int, j: int) -> AbelianGroup:
    """Equivariant cohomology of a fixed point with constant (j even) or
    sign-twisted (j odd) integer coefficients."""
    if k < 0:
        return _0
    if j % 2 == 0:
        if k == 0:
            return _Z
        return _Z2 if k % 2 == 0 else _0
    return _Z2 if k % 2 == 1 else _0


def free_sphere_cohomology(d: int, k: int, j: int) -> AbelianGroup:
    """Cohomology of the d-sphere with the free antipodal involution.

    For untwisted coefficients this is the integral cohomology of the orbit
    projective space; the twisted answer follows from the Gysin sequence of
    the sphere bundle over a point.
    """
    if d < 0:
        raise ValueError("sphere dimension must be >= 0")
    if k < 0:
        return _0
    if j % 2 == 0:
        # H^k(RP^d, Z)
        if k == 0:
            return _Z
        if k > d:
            return _0
        if k < d:
            return _Z2 if k % 2 == 0 else _0
        return _Z if d % 2 == 1 else _Z2
    if d % 2 == 1:
        return _Z2 if (k % 2 == 1 and k <= d) else _0
    if k == d:
        return _Z
    return _Z2 if (k % 2 == 1 and k < d) else _0


def _suspended_sphere_cohomology(p: int, q: int, k: int, j: int) -> AbelianGroup:
    # Reduced cohomology of S^{p,q} (p >= 1) collapses, by iterated
    # suspension, to the fixed point in shifted degree and twist; the full
    # group restores the basepoint contribution.
    reduced = point_cohomology(k - q - (p - 1), j - q)
    return direct_sum(reduced, point_cohomology(k, j))


def tr_sphere_cohomology(d: int, k: int, j: int) -> AbelianGroup:
    """Cohomology of the d-sphere whose involution fixes exactly two points
    (one fixed coordinate, d negated ones)."""
    if d < 0:
        raise ValueError("sphere dimension must be >= 0")
    if k < 0:
        return _0
    return _suspended_sphere_cohomology(1, d, k, j)


def sphere_cohomology(space: Sphere, k: int, j: int) -> AbelianGroup:
    if space.is_empty:
        return _0
    if k < 0:
        return _0
    if space.p == 0:
        return free_sphere_cohomology(space.dimension, k, j)
    return _suspended_sphere_cohomology(space.p, space.q, k, j)


@lru_cache(maxsize=None)
def _torus_cohomology(a: int, b: int, c: int, k: int, j: int) -> AbelianGroup:
    if k < 0:
        return _0
    if a > 0:
        # Splitting off one circle with trivial involution.
        return direct_sum(
            _torus_cohomology(a - 1, b, c, k, j),
            _torus_cohomology(a - 1, b, c, k - 1, j),
        )
    if b > 0:
        # Splitting off one circle with the reflection involution flips the
        # twist of the shifted summand.
        return direct_sum(
            _torus_cohomology(a, b - 1, c, k, j),
            _torus_cohomology(a, b - 1, c, k - 1, j - 1),
        )
    if c == 1:
        return free_sphere_cohomology(1, k, j)
    return point_cohomology(k, j)


def torus_cohomology(space: Torus, k: int, j: int) -> AbelianGroup:
    """Cohomology of an involutive torus by iterated circle splittings.

    Descriptors are normalized (c <= 1) at construction; the recursion peels
    trivial factors, then reflection factors, down to a point (c = 0) or the
    free circle (c = 1).
    """
    if space.is_empty:
        return _0
    return _torus_cohomology(space.a, space.b, space.c, k, j % 2)


def cohomology(space: InvolutiveSpace, k: int, j: int) -> AbelianGroup:
    """Equivariant cohomology H^k with Z(j) coefficients for any cataloged
    sphere or torus descriptor."""
    if isinstance(space, Sphere):
        return sphere_cohomology(space, k, j)
    return torus_cohomology(space, k, j)


_Z_IN_2Z = AbelianGroup.free(1, scale=2)

# Relative degree-2 groups with twisted coefficients for the cataloged
# fixed-point spaces of dimension 2 and 3, with the lattice-embedding
# metadata recording how the free part is measured by the first Chern class.
_SPHERE_RELATIVE_H2 = {
    (1, 2): _Z2,
    (1, 3): _Z2,
    (2, 1): _Z_IN_2Z,
    (2, 2): _0,
    (3, 1): _0,
}

_TORUS_RELATIVE_H2 = {
    (0, 2): _Z2,
    (0, 3): AbelianGroup(0, (2, 2, 2, 2)),
    (1, 1): _Z_IN_2Z,
    (2, 1): AbelianGroup.free(2, scale=2),
    (1, 2): AbelianGroup(2, (2,), 2),
}


def relative_h2(space: InvolutiveSpace) -> AbelianGroup:
    """Degree-2 equivariant cohomology of the pair (space, fixed set) with
    twisted coefficients, for spaces with a nonempty fixed set.

    The group vanishes whenever the involution is trivial or the dimension is
    at most 1; the remaining cases form a finite catalog.
    """
    if space.is_empty or space.fixed_set.is_empty:
        raise UnsupportedSpace(f"{space} has no fixed points")
    d = space.dimension
    if d > 3:
        raise UnsupportedSpace(f"{space} has dimension {d} > 3")
    if space.is_trivial_involution or d <= 1:
        return _0
    if isinstance(space, Sphere):
        key = (space.p, space.q)
        table = _SPHERE_RELATIVE_H2
    else:
        key = (space.a, space.b)
        table = _TORUS_RELATIVE_H2
    try:
        return table[key]
    except KeyError:
        raise UnsupportedSpace(f"{space} is outside the computed catalog") from None


@dataclass(frozen=True)
class ClassificationResult:
    """Isomorphism classes of rank-`rank` bundles with an odd time-reversal
    lift over `space`, presented the way the classifying invariant measures
    them (coset offsets included)."""

    space: InvolutiveSpace
    rank: int
    status: str  # "empty" | "unique" | "group"
    group: AbelianGroup | None = None
    embedding_offset: int = 0
    invariant_name: str | None = None
    complete: bool = True
    note: str = ""

    @property
    def rank_label(self):
        return "2m" if self.rank % 2 == 0 else "2m+1"

    def cell(self) -> str:
        """Table-cell rendering: EMPTY, 0, or the group with its coset."""
        if self.status == "empty":
            return "EMPTY"
        if self.status == "unique":
            return "0"
        text = self.group.render()
        if self.embedding_offset:
            text += f"+{self.embedding_offset}"
        return text

    def render(self) -> str:
        head = f"{self.space} rank={self.rank_label} -> {self.cell()}"
        if self.status == "empty":
            return head
        if self.status == "unique":
            return f"{head} (unique, {self.note})" if self.note else f"{head} (unique)"
        tail = f" via {self.invariant_name}" if self.invariant_name else ""
        bij = " (bijective)" if self.complete else ""
        return head + tail + bij


def _invariant_label(group: AbelianGroup) -> str:
    has_free = group.free_rank > 0
    has_torsion = bool(group.torsion)
    if has_free and has_torsion:
        return "FKMM+c1"
    if has_free:
        return "c1"
    return "FKMM"


def classify(space: InvolutiveSpace, rank: int) -> ClassificationResult:
    """Decide the classification cell for bundles of the given rank.

    Fixed points force even rank; dimension <= 1 forces a unique class; with
    fixed points the classes embed in the relative degree-2 group, and for a
    free involution in the absolute one, with coset metadata recording how
    the first Chern class singles out representatives.
    """
    if rank < 1:
        raise ValueError("rank must be a positive integer")
    if space.is_empty:
        return ClassificationResult(space, rank, "empty", note="empty base space")
    if space.dimension > 3:
        raise UnsupportedSpace(f"{space} has dimension {space.dimension} > 3")
    odd = rank % 2 == 1

    if not space.fixed_set.is_empty:
        if odd:
            return ClassificationResult(
                space, rank, "empty", note="fixed points force even rank"
            )
        group = relative_h2(space)
        if group.is_trivial:
            return ClassificationResult(
                space, rank, "unique", note="trivial product bundle"
            )
        return ClassificationResult(
            space, rank, "group", group, 0, _invariant_label(group)
        )

    # Free involution.
    if isinstance(space, Sphere):
        q = space.q
        if q in (1, 2):
            note = "trivial product bundle" if not odd else "not a product bundle"
            return ClassificationResult(space, rank, "unique", note=note)
        if q == 3:
            return ClassificationResult(
                space, rank, "group", _Z_IN_2Z, 1 if odd else 0, "c1"
            )
        if q == 4:
            if odd:
                return ClassificationResult(
                    space, rank, "empty", note="no line bundle with the required lift"
                )
            return ClassificationResult(
                space, rank, "unique", note="trivial product bundle"
            )
        raise UnsupportedSpace(f"{space} is outside the computed catalog")

    # Free torus (c = 1): all ranks see the same group; the free part is
    # measured by halved Chern numbers on the generating 2-cycles.
    group = torus_cohomology(space, 2, 1)
    if group.free_rank:
        group = group.with_scale(2)
    if group.is_trivial:
        note = "trivial product bundle" if not odd else "not a product bundle"
        return ClassificationResult(space, rank, "unique", note=note)
    return ClassificationResult(space, rank, "group", group, 0, _invariant_label(group))
