from typing import Any, Dict, Optional


class HyperError(Exception):
    code = "hyper_error"
    exit_code = 1

    def __init__(
        self,
        message: str,
        *,
        code: Optional[str] = None,
        exit_code: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.code = code or self.code
        self.message = message
        self.exit_code = exit_code if exit_code is not None else self.exit_code
        self.details = details or {}
        super().__init__(message)


class ParseError(HyperError):
    code = "parse_error"
    exit_code = 2

    def __init__(self, message: str, *, text: str = "", position: Optional[int] = None):
        details: Dict[str, Any] = {"input": text}
        if position is not None:
            details["position"] = position
        super().__init__(message, details=details)
        self.position = position


class ConfigError(HyperError):
    code = "config_error"
    exit_code = 2


class DomainError(HyperError):
    code = "domain_error"
    exit_code = 3


class PoleError(DomainError):
    code = "gamma_pole"

    def __init__(self, n: int, message: Optional[str] = None):
        # n es el entero no positivo donde cae el polo
        super().__init__(message or f"Gamma pole at {n}", details={"pole": n})
        self.n = n


class ParameterError(DomainError):
    code = "parameter_error"


class AnnulusError(DomainError):
    code = "annulus_unsupported"
    exit_code = 4


class ConsistencyError(HyperError):
    code = "internal_consistency"
    exit_code = 5


class ResonanceError(HyperError):
    code = "resonance"
    exit_code = 6


class DegeneracyError(HyperError):
    code = "degenerate_parameters"
    exit_code = 6


class UnsupportedDegeneracyError(DegeneracyError):
    code = "unsupported_degeneracy"


class UnsupportedInputError(HyperError):
    code = "unsupported_input"
    exit_code = 6


class NotFoundError(HyperError):
    code = "not_found"
    exit_code = 7


INTERNAL_ERROR_EXIT = 70


def error_body(
    *,
    code: str,
    message: str,
    run_id: Optional[str],
    details: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    body: Dict[str, Any] = {
        "error": {
            "code": code,
            "message": message,
            "run_id": run_id,
        }
    }
    if details:
        body["details"] = details
    return body
