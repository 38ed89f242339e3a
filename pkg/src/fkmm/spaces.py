"""Symbolic descriptors of involutive spheres and tori.

A sphere descriptor ``S:p,q`` is the unit sphere of dimension p+q-1 whose
involution fixes the first p coordinates and negates the last q.  A torus
descriptor ``T:a,b,c`` is a product of a circles with trivial involution,
b circles with the reflection involution, and c circles with the half-period
(free) translation.  Descriptors with c >= 2 are normalized to c = 1 at
construction time, reflecting the equivariant homeomorphism between the two
presentations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedSpace


@dataclass(frozen=True)
class FixedSet:
    """Shape of the fixed-point set: structure tag + component count."""

    structure: str  # "empty" | "isolated" | "circle" | "surface" | "full"
    components: int = 0
    description: str = ""

    @property
    def is_empty(self):
        return self.structure == "empty"


@dataclass(frozen=True)
class Sphere:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise UnsupportedSpace("sphere indices must be non-negative")

    @property
    def is_empty(self):
        return self.p == 0 and self.q == 0

    @property
    def dimension(self):
        return self.p + self.q - 1

    @property
    def is_free(self):
        return self.p == 0 and self.q > 0

    @property
    def is_trivial_involution(self):
        return self.q == 0 and self.p > 0

    @property
    def fixed_set(self):
        if self.is_empty or self.is_free:
            return FixedSet("empty", 0, "empty")
        if self.q == 0:
            return FixedSet("full", 1, "whole space (trivial involution)")
        # Fixed set is the sub-sphere of dimension p-1 cut out by the
        # negated coordinates.
        if self.p == 1:
            return FixedSet("isolated", 2, "two points")
        if self.p == 2:
            return FixedSet("circle", 1, "one circle")
        return FixedSet("surface", 1, f"sphere of dimension {self.p - 1}")

    def __str__(self):
        return f"S:{self.p},{self.q}"


@dataclass(frozen=True)
class Torus:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or self.c < 0:
            raise UnsupportedSpace("torus indices must be non-negative")
        if self.c >= 2:
            # A product of c free circles is equivariantly a product of one
            # free circle with c-1 trivial ones.
            object.__setattr__(self, "a", self.a + self.c - 1)
            object.__setattr__(self, "c", 1)

    @property
    def is_empty(self):
        return self.a == 0 and self.b == 0 and self.c == 0

    @property
    def dimension(self):
        return self.a + self.b + self.c

    @property
    def is_free(self):
        return self.c >= 1

    @property
    def is_trivial_involution(self):
        return self.b == 0 and self.c == 0 and self.a > 0

    @property
    def fixed_set(self):
        if self.is_empty or self.is_free:
            return FixedSet("empty", 0, "empty")
        if self.b == 0:
            return FixedSet("full", 1, "whole space (trivial involution)")
        count = 2 ** self.b
        if self.a == 0:
            return FixedSet("isolated", count, f"{count} points")
        if self.a == 1:
            return FixedSet("circle", count, f"{count} circles")
        return FixedSet("surface", count, f"{count} tori of dimension {self.a}")

    def __str__(self):
        return f"T:{self.a},{self.b},{self.c}"


InvolutiveSpace = Sphere | Torus


def parse_space(text: str) -> InvolutiveSpace:
    """Parse ``S:p,q`` or ``T:a,b,c`` descriptor strings."""
    try:
        head, _, tail = text.strip().partition(":")
        nums = [int(x) for x in tail.split(",")]
    except ValueError:
        raise UnsupportedSpace(f"malformed space descriptor {text!r}") from None
    if head == "S" and len(nums) == 2:
        return Sphere(*nums)
    if head == "T" and len(nums) == 3:
        return Torus(*nums)
    raise UnsupportedSpace(f"malformed space descriptor {text!r}")
