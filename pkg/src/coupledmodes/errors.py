"""Exception hierarchy shared by all modules."""


class CoupledModesError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(CoupledModesError, ValueError):
    """Shapes of the arguments do not agree."""


class NumericalError(CoupledModesError):
    """A numerical procedure could not deliver a trustworthy result."""


class NonConvergence(NumericalError):
    """The Jacobi sweep limit was reached before the off-diagonal part vanished."""


class TruncationError(NumericalError):
    """A coherent amplitude is too large for the requested Fock cutoff."""


class EmptyGrid(CoupledModesError, ValueError):
    pass


class InsufficientData(CoupledModesError, ValueError):
    """Fewer than three usable samples were available for a fit."""
