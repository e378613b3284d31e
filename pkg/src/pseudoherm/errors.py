"""Exception types raised by the toolkit.

All toolkit errors derive from ToolkitError so callers can distinguish
numerical failures from argument mistakes (plain ValueError/TypeError).
"""


class ToolkitError(Exception):
    """Base class for all toolkit-specific failures."""


class DimensionMismatchError(ToolkitError, ValueError):
    """Operands live on bases of different dimension."""


class MatrixExpOverflowError(ToolkitError, FloatingPointError):
    """Matrix exponential produced non-finite entries."""


class NotPositiveDefiniteError(ToolkitError, ValueError):
    """An operator required to be positive definite is not.

    Carries the offending eigenvalue in ``eigenvalue``.
    """

    def __init__(self, msg: str, eigenvalue: float):
        super().__init__(msg)
        self.eigenvalue = eigenvalue


class EigConvergenceError(ToolkitError, RuntimeError):
    """The QR eigensolver did not converge within its iteration budget."""


class QuasiDefectivePairError(ToolkitError, ValueError):
    """Left/right overlap of an eigenpair is below the pairing tolerance.

    Signals (near-)Jordan structure; carries ``index`` and ``eigenvalue``.
    """

    def __init__(self, msg: str, index: int, eigenvalue: complex):
        super().__init__(msg)
        self.index = index
        self.eigenvalue = eigenvalue


class EigenvalueMatchingError(ToolkitError, ValueError):
    """Right and left spectra could not be matched as multisets."""


class JOrthogonalityError(ToolkitError, ValueError):
    """Off-diagonal J-products of eigenvectors exceed tolerance."""


class GridSupportError(ToolkitError, ValueError):
    """A sampled function is not contained in the grid domain."""


class SpecValidationError(ToolkitError, ValueError):
    """A model parameter is outside its admissible range."""
