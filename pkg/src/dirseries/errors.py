"""Exception types shared across the package.

The CLI maps these onto process exit codes, so library code should raise
the most specific type that applies rather than bare ValueError.
"""


class DirseriesError(Exception):
    """Base class for all package-specific errors."""


class InvalidArgumentError(DirseriesError, ValueError):
    """An argument violates a documented precondition."""


class NonInvertibleError(DirseriesError, ArithmeticError):
    """Reciprocal requested for a series whose leading coefficient is zero."""


class DomainError(DirseriesError, ValueError):
    """Evaluation requested outside the certified domain."""


class NumericalError(DirseriesError, ArithmeticError):
    """A numerical invariant failed beyond tolerance (e.g. a Gram section
    that should be positive semidefinite has an eigenvalue below -1e-10)."""


class ResourceCapError(DirseriesError, RuntimeError):
    """A computation hit its configured resource cap before finishing."""
