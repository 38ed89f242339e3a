"""Exception types shared across the package.

Each numerical failure mode gets its own class so that callers (CLI,
service) can map them to stable exit codes / HTTP errors.
"""


class FkmmError(Exception):
    """Base class for all package errors."""


class UnsupportedSpace(FkmmError):
    """Space is outside the catalog of low-dimensional spheres/tori."""


class OddResolution(FkmmError):
    """Grid resolution must be even so the involution is index-exact."""


class UnsupportedDimension(FkmmError):
    """Grid dimension outside the supported range."""


class BadSelector(FkmmError):
    """2D cycle selector does not name a valid sub-surface of the grid."""


class NoTRDirection(FkmmError):
    """Half-domain decomposition needs at least one time-reversal direction."""


class NoIsolatedFixedPoints(FkmmError):
    """Fixed-point sign indices require isolated fixed points."""


class GapClosed(FkmmError):
    """The spectral gap closed somewhere on the grid."""


class NotAdmissible(FkmmError):
    """Grid too coarse: a plaquette phase came too close to the branch cut."""


class NumericalInconsistency(FkmmError):
    """A quantity that must be an exact integer failed its rounding check."""


class RankMismatch(FkmmError):
    """Projector trace does not match the expected band count."""


class NotAntisymmetric(FkmmError):
    """Pfaffian input failed the antisymmetry check."""


class NotFree(FkmmError):
    """Operation requires a free involution."""


class OddChernParity(FkmmError):
    """Chern number parity contradicts the space/rank constraint."""


class TRSViolation(FkmmError):
    """Model failed the time-reversal symmetry check."""


class ModelSyntaxError(FkmmError):
    """Parse failure in an expression or model file, with location info."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" at line {line}" if column is None else f" at line {line}, column {column}"
        super().__init__(message + where)


class UnknownSymbol(ModelSyntaxError):
    """Expression uses a symbol that is neither a coordinate nor a parameter."""


class ArityError(ModelSyntaxError):
    """Function called with the wrong number of arguments."""
