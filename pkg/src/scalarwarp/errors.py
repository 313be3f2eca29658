"""Exception types shared across the package."""


class ScalarwarpError(Exception):
    """Base class for all library errors."""


class DomainError(ScalarwarpError):
    """An input value is outside the mathematical domain of an operation."""


class TopologyError(ScalarwarpError):
    """A mesh fails a closedness/orientability requirement."""


class FieldMismatchError(ScalarwarpError):
    """A scalar field is used with a manifold it does not belong to."""


class UnsupportedBackendError(ScalarwarpError):
    """The manifold backend does not support the requested operation."""


class UnsupportedHypothesisError(ScalarwarpError):
    """A certificate was asked to run outside its standing hypotheses."""


class HypothesisViolationError(ScalarwarpError):
    """Input data violates a named hypothesis of a certificate."""

    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis


class InputError(ScalarwarpError):
    """A required named input is missing or malformed."""


class NumericalError(ScalarwarpError):
    """An iterative routine failed to produce a usable result."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
