"""Exception hierarchy shared by all jensenlab modules."""

from __future__ import annotations


class JensenLabError(Exception):
    """Base class for all library errors."""


class DomainError(JensenLabError):
    """A function was evaluated (or asked to act) outside its domain.

    Carries the offending point when one is known.
    """

    def __init__(self, message: str, point: float | None = None):
        super().__init__(message)
        self.point = point


class ConstructionError(JensenLabError):
    """A catalog object could not be built because an invariant failed."""


class NonConvergenceError(JensenLabError):
    """Quadrature refinement hit its limit with the error estimate above
    tolerance.  ``best_value`` and ``error_estimate`` hold the last iterate.
    """

    def __init__(self, message: str, best_value: float, error_estimate: float):
        super().__init__(message)
        self.best_value = best_value
        self.error_estimate = error_estimate


class PreconditionError(JensenLabError):
    """An operation was called with arguments that violate its contract."""


class SchemaError(JensenLabError):
    """A job or serialized object does not match the expected schema.

    ``path`` is a dotted/indexed location inside the document, e.g.
    ``measure.atoms[2]``.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
