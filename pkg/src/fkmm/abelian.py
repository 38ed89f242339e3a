"""Exact arithmetic on finitely generated abelian groups and integer matrices.

Every cohomology computation in this package returns an :class:`AbelianGroup`
in canonical form: a free rank plus a divisibility chain of torsion
coefficients.  Canonicalization goes through an exact Smith normal form over
the integers; all entries are Python ints, so intermediate coefficient growth
is harmless.
"""

from __future__ import annotations

from dataclasses import dataclass


class IntMatrix:
    """Dense matrix of exact (arbitrary-precision) integers."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries, cols=None):
        data = [list(map(int, row)) for row in entries]
        self.rows = len(data)
        self.cols = len(data[0]) if data else (cols or 0)
        if any(len(row) != self.cols for row in data):
            raise ValueError("ragged rows")
        self._data = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, diag):
        n = len(diag)
        m = cls.zeros(n, n)
        for i, d in enumerate(diag):
            m._data[i][i] = int(d)
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self._data[i][j] = int(value)

    def copy(self):
        return IntMatrix(self._data, cols=self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self._data == other._data
        )

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = IntMatrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            row = self._data[i]
            for j in range(other.cols):
                out._data[i][j] = sum(row[k] * other._data[k][j] for k in range(self.cols))
        return out

    def transpose(self):
        return IntMatrix(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def diagonal_entries(self):
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def det(self):
        """Determinant via fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [row[:] for row in self._data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __repr__(self):
        return f"IntMatrix({self._data!r})"


def smith_normal_form(a: IntMatrix):
    """Diagonalize ``a`` by unimodular row/column operations.

    Returns ``(u, d, v)`` with ``u @ a @ v == d``, ``u`` and ``v`` unimodular,
    and ``d`` diagonal with non-negative entries forming a divisibility chain.
    Pivots are chosen by smallest absolute value (ties broken by lowest
    row-major index), which makes the output deterministic.
    """
    d = a.copy()
    u = IntMatrix.identity(a.rows)
    v = IntMatrix.identity(a.cols)
    m, n = d.rows, d.cols

    def swap_rows(i, j):
        if i != j:
            d._data[i], d._data[j] = d._data[j], d._data[i]
            u._data[i], u._data[j] = u._data[j], u._data[i]

    def swap_cols(i, j):
        if i != j:
            for row in d._data:
                row[i], row[j] = row[j], row[i]
            for row in v._data:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row[dst] += q * row[src]
        drow, srow = d._data[dst], d._data[src]
        for j in range(n):
            drow[j] += q * srow[j]
        drow, srow = u._data[dst], u._data[src]
        for j in range(m):
            drow[j] += q * srow[j]

    def add_col(src, dst, q):
        for row in d._data:
            row[dst] += q * row[src]
        for row in v._data:
            row[dst] += q * row[src]

    def negate_row(i):
        d._data[i] = [-x for x in d._data[i]]
        u._data[i] = [-x for x in u._data[i]]

    def find_pivot(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d._data[i][j]
                if x != 0 and (best is None or abs(x) < abs(d._data[best[0]][best[1]])):
                    best = (i, j)
        return best

    for t in range(min(m, n)):
        pos = find_pivot(t)
        if pos is None:
            break
        while True:
            swap_rows(t, pos[0])
            swap_cols(t, pos[1])
            if d._data[t][t] < 0:
                negate_row(t)
            pivot = d._data[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = d._data[i][t] // pivot
                if q:
                    add_row(t, i, -q)
                if d._data[i][t] != 0:
                    dirty = True
            for j in range(t + 1, n):
                q = d._data[t][j] // pivot
                if q:
                    add_col(t, j, -q)
                if d._data[t][j] != 0:
                    dirty = True
            if dirty:
                pos = find_pivot(t)
                continue
            # Row and column are clear; enforce that the pivot divides the
            # remaining block, otherwise fold an offending row in and retry.
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d._data[i][j] % pivot != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
            pos = (t, t)
    return u, d, v


def invariant_factors(a: IntMatrix):
    """Diagonal of the Smith normal form (unit and zero entries included)."""
    _, d, _ = smith_normal_form(a)
    return d.diagonal_entries()


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group in canonical form.

    ``torsion`` is a divisibility chain of coefficients >= 2.
    ``embedding_scale`` is presentation metadata recording that the free part
    sits inside a bigger lattice (e.g. scale 2 renders as ``2Z``); it never
    changes the abstract isomorphism type, but two values compare equal only
    if the metadata agrees too.
    """

    free_rank: int = 0
    torsion: tuple = ()
    embedding_scale: int | None = None

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        tors = tuple(int(t) for t in self.torsion)
        object.__setattr__(self, "torsion", tors)
        for t in tors:
            if t < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for x, y in zip(tors, tors[1:]):
            if y % x != 0:
                raise ValueError(f"torsion {tors} is not a divisibility chain")
        if self.embedding_scale is not None and self.embedding_scale < 1:
            raise ValueError("embedding_scale must be positive")

    @classmethod
    def trivial(cls):
        return cls(0, ())

    @classmethod
    def free(cls, rank, scale=None):
        return cls(rank, (), scale)

    @classmethod
    def cyclic(cls, order):
        if order == 0:
            return cls(1, ())
        return cls(0, (order,))

    @classmethod
    def from_orders(cls, orders, embedding_scale=None):
        """Canonical form of a direct sum of cyclic groups Z/o (o=0 means Z)."""
        free = sum(1 for o in orders if o == 0)
        tors = [abs(o) for o in orders if abs(o) > 1]
        if tors:
            # Smith normal form of the diagonal matrix renormalizes the
            # coefficients into a divisibility chain.
            facs = invariant_factors(IntMatrix.diagonal(tors))
            tors = [f for f in facs if f > 1]
        return cls(free, tuple(tors), embedding_scale)

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def is_isomorphic_to(self, other):
        """Abstract isomorphism: ignores embedding metadata."""
        return self.free_rank == other.free_rank and self.torsion == other.torsion

    def with_scale(self, scale):
        return AbelianGroup(self.free_rank, self.torsion, scale)

    def render(self):
        """Canonical text form: ``0``, ``Z``, ``Z_2^4 (+) Z^2``, ``(2Z)^2`` ..."""
        parts = []
        i = 0
        while i < len(self.torsion):
            t = self.torsion[i]
            count = 1
            while i + count < len(self.torsion) and self.torsion[i + count] == t:
                count += 1
            parts.append(f"Z_{t}" if count == 1 else f"Z_{t}^{count}")
            i += count
        if self.free_rank:
            s = self.embedding_scale
            if s is None or s == 1:
                base, wrapped = "Z", "Z"
            else:
                base, wrapped = f"{s}Z", f"({s}Z)"
            if self.free_rank == 1:
                parts.append(base)
            else:
                parts.append(f"{wrapped}^{self.free_rank}")
        return " (+) ".join(parts) if parts else "0"

    def __str__(self):
        return self.render()


def group_from_presentation(relations: IntMatrix, generators: int) -> AbelianGroup:
    """Cokernel Z^generators / (row space of ``relations``), canonical form."""
    if relations.cols != generators:
        raise ValueError("relation matrix must have one column per generator")
    diag = invariant_factors(relations)
    free = generators - sum(1 for x in diag if x != 0)
    torsion = [x for x in diag if x > 1]
    return AbelianGroup.from_orders([0] * free + torsion)


def direct_sum(*groups: AbelianGroup) -> AbelianGroup:
    """Canonical form of a direct sum; embedding metadata is kept only when
    every summand with a free part agrees on it."""
    free = sum(g.free_rank for g in groups)
    orders = [0] * free
    for g in groups:
        orders.extend(g.torsion)
    scales = {g.embedding_scale for g in groups if g.free_rank > 0}
    scale = scales.pop() if len(scales) == 1 else None
    return AbelianGroup.from_orders(orders, embedding_scale=scale)
