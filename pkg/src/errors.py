"""Exception hierarchy shared by the solvers and the job front-ends.

Every error carries a stable ``code`` so the CLI and the HTTP surface can report
it without parsing messages.
"""
from typing import Optional


class ToolkitError(ValueError):
    """Base class for all errors raised by the toolkit."""

    code = "TOOLKIT_ERROR"

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def to_dict(self) -> dict:
        return {"code": self.code, "message": str(self)}


class InputError(ToolkitError):
    """Malformed or out-of-range job input."""

    code = "INPUT_ERROR"


class ZeroPolynomialError(ToolkitError):
    code = "ZERO_POLYNOMIAL"


class NonFiniteError(ToolkitError):
    code = "NON_FINITE"


class ResolutionError(ToolkitError):
    """Grid resolution too small for the certified correction to apply."""

    code = "RESOLUTION_TOO_SMALL"


class QuadratureError(ToolkitError):
    """Refinement cap reached before the quadrature met its tolerance."""

    code = "QUADRATURE_CAP"

    def __init__(self, message: str, estimate: float, error_estimate: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class DegenerateAtomError(ToolkitError):
    """|Φ(ζ)| too small to divide by (the tuple fails the non-vanishing condition at ζ)."""

    code = "DEGENERATE_ATOM"


class CoronaConditionError(ToolkitError):
    """The tuple has a common zero in the closed disk."""

    code = "CORONA_CONDITION_FAILS"


class DegreeCapExceeded(ToolkitError):
    code = "DEGREE_CAP_EXCEEDED"


class PreconditionError(ToolkitError):
    """A documented precondition does not hold; the message names the failed check."""

    code = "PRECONDITION"


class BudgetError(ToolkitError):
    code = "INVALID_BUDGET"


class EtaNotCertifiedError(ToolkitError):
    """inf(|f| + |h|) over the closed disk could not be certified positive."""

    code = "ETA_NOT_CERTIFIED"
