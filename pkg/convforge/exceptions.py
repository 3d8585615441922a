from typing import Any, Dict, Optional


class ConvForgeError(Exception):
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.details}


class ConvForgeValidationError(ConvForgeError, ValueError):
    pass


class ConvForgeNumericalError(ConvForgeError, ArithmeticError):
    pass


class MaskTooLong(ConvForgeValidationError):
    pass


class ZeroSequence(ConvForgeValidationError):
    pass


class DimensionMismatch(ConvForgeValidationError):
    pass


class InvalidFilterLength(ConvForgeValidationError):
    pass


class DepthTooSmall(ConvForgeValidationError):
    def __init__(self, depth: int, minimal_depth: int) -> None:
        super().__init__(
            f"Depth J={depth} is too small, minimal admissible depth is {minimal_depth}",
            {"depth": depth, "minimal_depth": minimal_depth},
        )
        self.minimal_depth = minimal_depth


class UnstructuredBias(ConvForgeValidationError):
    pass


class InvalidRidgeExpansion(ConvForgeValidationError):
    pass


class UnknownTarget(ConvForgeValidationError):
    pass


class SchemaMismatch(ConvForgeValidationError):
    pass


class DidNotConverge(ConvForgeNumericalError):
    def __init__(self, worst_residual: float, iterations: int) -> None:
        super().__init__(
            f"Root finder did not converge in {iterations} iterations, worst residual {worst_residual:.3e}",
            {"worst_residual": worst_residual, "iterations": iterations},
        )
        self.worst_residual = worst_residual
        self.iterations = iterations


class DegenerateScale(ConvForgeNumericalError):
    pass
