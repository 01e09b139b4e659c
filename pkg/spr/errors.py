"""
Error types shared by the library and the command line.

Every error carries the exit code the CLI terminates with, so commands can
raise freely and let ``spr.main`` translate.
"""

from typing import Any, Dict


class SPRError(Exception):
    """Base error with a human readable detail and optional context fields."""

    exit_code: int = 1

    def __init__(self, detail: str, **context: Any):
        super().__init__(detail)
        self.detail = detail
        self.context: Dict[str, Any] = context

    def __str__(self) -> str:
        if not self.context:
            return self.detail
        extras = " ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.detail} ({extras})"


class ValidationFailure(SPRError):
    exit_code = 2


class NonPositiveWeight(ValidationFailure):
    pass


class SelfLoop(ValidationFailure):
    pass


class VertexOutOfRange(ValidationFailure):
    pass


class DuplicateTerminal(ValidationFailure):
    pass


class TerminalOutOfRange(ValidationFailure):
    pass


class DisconnectedGraph(ValidationFailure):
    pass


class FewerThanTwoTerminals(ValidationFailure):
    pass


class InvalidProbability(ValidationFailure):
    pass


class InvalidParameter(ValidationFailure):
    pass


class InvalidParameters(InvalidParameter):
    """Raised by instance generators for an inconsistent parameter set."""


class PreconditionViolated(ValidationFailure):
    pass


class MissingClusterDistances(ValidationFailure):
    pass


class IncompleteRecords(ValidationFailure):
    pass


class NoSteinerVertices(ValidationFailure):
    pass


class ParseError(ValidationFailure):
    pass


class UnknownAlgorithm(ValidationFailure):
    pass


class IoError(SPRError):
    exit_code = 3


class RoundLimitExceeded(SPRError):
    exit_code = 4


class InvariantViolation(SPRError):
    exit_code = 5
