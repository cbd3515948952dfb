from pydantic import ValidationError

from .errors import GroupMaxError
from .logging import get_logger

logger = get_logger()

EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3
EXIT_CUT_OVERFLOW = 4

# Error code to process exit code mapping
error_exit_mapping = {
    "CONFIG_ERROR": EXIT_CONFIG_ERROR,
    "UNKNOWN_IDENTIFIER": EXIT_CONFIG_ERROR,
    "STRUCTURAL_ERROR": EXIT_CONFIG_ERROR,
    "CUT_FILE_PARSE_ERROR": EXIT_CONFIG_ERROR,
    "MODEL_FILE_ERROR": EXIT_CONFIG_ERROR,
    "VALIDATION_ERROR": EXIT_CONFIG_ERROR,
    "NUMERICAL_ERROR": EXIT_NUMERICAL_ERROR,
    "NORMALIZATION_ERROR": EXIT_NUMERICAL_ERROR,
    "CUT_OVERFLOW": EXIT_CUT_OVERFLOW,
}


def format_validation_errors(exc: ValidationError) -> list[str]:
    """Format pydantic errors as 'field -> path: message' lines."""
    formatted_errors = []
    for error in exc.errors():
        field_path = " -> ".join(str(loc) for loc in error["loc"]) or "<root>"
        formatted_errors.append(f"{field_path}: {error['msg']}")
    return formatted_errors


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to a process exit code and log its diagnostic."""
    if isinstance(exc, ValidationError):
        for line in format_validation_errors(exc):
            logger.error(f"Validation Error: {line}")
        return error_exit_mapping["VALIDATION_ERROR"]

    if isinstance(exc, GroupMaxError):
        logger.error(f"{exc.error_code}: {exc.message}")
        return error_exit_mapping.get(exc.error_code, EXIT_FAILURE)

    if isinstance(exc, (FileNotFoundError, IsADirectoryError, PermissionError)):
        logger.error(f"File Error: {exc}")
        return EXIT_CONFIG_ERROR

    logger.exception(f"Unhandled Exception: {exc}")
    return EXIT_FAILURE
