from typing import Optional, Sequence


class GroupMaxError(Exception):
    """Base exception carrying a message and a machine-readable error code."""

    default_code = "GROUPMAX_ERROR"

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.default_code


class StructuralError(GroupMaxError):
    """Custom exception for structural violations (divisibility, dimensions)."""

    default_code = "STRUCTURAL_ERROR"


class ShapeMismatchError(StructuralError):
    """Custom exception for operands whose shapes do not conform."""


class TapeUsageError(GroupMaxError):
    """Custom exception for misuse of a recorded tape."""

    default_code = "TAPE_USAGE_ERROR"


class NumericalError(GroupMaxError):
    """Custom exception for non-finite gradients or a diverging loss."""

    default_code = "NUMERICAL_ERROR"

    def __init__(
        self,
        message: str,
        loss_trace: Sequence[tuple[int, float]] = (),
        error_code: Optional[str] = None,
    ):
        super().__init__(message, error_code)
        self.loss_trace = list(loss_trace)


class NormalizationError(GroupMaxError):
    """Custom exception for degenerate normalization scales."""

    default_code = "NORMALIZATION_ERROR"


class CutOverflowError(GroupMaxError):
    """Custom exception raised when cut enumeration would exceed its cap."""

    default_code = "CUT_OVERFLOW"

    def __init__(self, predicted_count: int, cap: int, formula_count: Optional[int] = None):
        message = f"Cut enumeration would produce {predicted_count} cuts, above the cap of {cap}"
        if formula_count is not None:
            message += f" (M*G^(K(q-1)) predicts {formula_count})"
        super().__init__(message)
        self.predicted_count = predicted_count
        self.cap = cap
        self.formula_count = formula_count


class CutFileParseError(GroupMaxError):
    """Custom exception for malformed cut files."""

    default_code = "CUT_FILE_PARSE_ERROR"

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ModelFileError(GroupMaxError):
    """Custom exception for unreadable or inconsistent model files."""

    default_code = "MODEL_FILE_ERROR"


class ConfigError(GroupMaxError):
    """Custom exception for invalid experiment configuration."""

    default_code = "CONFIG_ERROR"

    def __init__(self, message: str, key: Optional[str] = None, error_code: Optional[str] = None):
        super().__init__(f"{key}: {message}" if key else message, error_code)
        self.key = key


class UnknownIdentifierError(ConfigError):
    """Custom exception for unknown function, architecture or table identifiers."""

    def __init__(self, kind: str, value: str, valid: Sequence[str]):
        super().__init__(
            f"unknown {kind} '{value}', expected one of: {', '.join(valid)}",
            key=kind,
            error_code="UNKNOWN_IDENTIFIER",
        )
        self.valid = list(valid)
