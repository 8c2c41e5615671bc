"""Exception hierarchy.

Every error carries a short stable ``code`` that the command line prints
next to the message, so scripts can branch on it without parsing text.
"""

from __future__ import annotations


class WhittakerError(Exception):
    """Base class for all library errors."""

    code = "E_WHITTAKER"


class SingularMatrix(WhittakerError, ArithmeticError):
    """A pivot underflowed while factoring a matrix that should be invertible."""

    code = "E_SINGULAR"


class DimensionMismatch(WhittakerError, ValueError):
    """Objects of incompatible dimensions were combined."""

    code = "E_DIMENSION"


class IrregularParameters(WhittakerError, ValueError):
    """Langlands parameters lie outside the absolute-convergence region."""

    code = "E_IRREGULAR"


class EvaluationFailure(WhittakerError, ArithmeticError):
    """A scalar field returned a non-finite value at a stencil point."""

    code = "E_EVALUATION"


class UnsupportedOrder(WhittakerError, ValueError):
    """Casimir or composition order beyond the supported envelope."""

    code = "E_ORDER"


class EigenvalueInconsistency(WhittakerError, ArithmeticError):
    """Base-point cross-check of an extracted eigenvalue failed."""

    code = "E_EIGENVALUE"

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class ConvergenceFailure(WhittakerError, ArithmeticError):
    """The last two quadrature levels disagree by more than ten times the target.

    The best available estimate is attached as ``result`` (a
    :class:`~whittaker.jacquet.WhittakerValue`) so callers that only need
    an upper bound, such as decay scans, can still use it.
    """

    code = "E_CONVERGENCE"

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class DegenerateFit(WhittakerError, ArithmeticError):
    """Too few resolved samples for a decay-exponent fit."""

    code = "E_DEGENERATE_FIT"


class ConfigError(WhittakerError, ValueError):
    """Malformed verification config or command-line payload."""

    code = "E_CONFIG"
