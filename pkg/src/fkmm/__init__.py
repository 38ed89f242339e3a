"""Toolkit for topological phases protected by an odd time-reversal symmetry.

Two halves:

* a symbolic calculator for Z2-equivariant cohomology of low-dimensional
  involutive spheres and tori, and the resulting bundle classification;
* a numerical engine computing Chern numbers, fixed-point sign indices and
  the class coordinates of user-defined gapped Clifford models on
  discretized involutive Brillouin zones.
"""

from .abelian import AbelianGroup, IntMatrix, direct_sum, group_from_presentation, smith_normal_form
from .cohomology import ClassificationResult, classify, cohomology, relative_h2
from .spaces import Sphere, Torus, parse_space

__all__ = [
    "AbelianGroup",
    "IntMatrix",
    "smith_normal_form",
    "group_from_presentation",
    "direct_sum",
    "cohomology",
    "relative_h2",
    "classify",
    "ClassificationResult",
    "Sphere",
    "Torus",
    "parse_space",
]

__version__ = "0.1.0"
