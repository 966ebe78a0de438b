"""Exception hierarchy shared by all modules.

Two families matter to callers (and to the CLI exit codes): configuration or
domain problems, which are the caller's fault, and numerical failures, which
carry whatever best estimate was available when the algorithm gave up.
"""

from __future__ import annotations


class DispersionError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DispersionError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class DegenerateGeometryError(DomainError):
    """Two positions coincide (distance below the coincidence threshold)."""


class AtomInsideConductorError(DomainError):
    """An atom sits at or below the conducting plate at z = 0."""


class ResonancePoleError(DomainError):
    """A real-axis polarizability was requested too close to a transition."""


class InsufficientDataError(DomainError):
    """The model does not carry the data the operation needs (e.g. transitions)."""


class ValidityError(DomainError):
    """Inputs fall outside the stated validity range of an asymptotic formula."""


class UnitError(DomainError):
    """Unknown quantity kind or forbidden unit-system conversion."""


class NumericalError(DispersionError, ArithmeticError):
    """Base class for numerical failures; ``best_estimate`` may be ``None``."""

    def __init__(self, message: str, best_estimate: float | None = None,
                 error_estimate: float | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ConvergenceError(NumericalError):
    """Adaptive quadrature hit its subdivision budget before converging."""


class IntegrandDomainError(NumericalError):
    """The integrand returned NaN somewhere on the integration range."""


class DifferentiationError(NumericalError):
    """The Richardson sequence of a finite-difference estimate did not contract."""


class ConsistencyError(NumericalError):
    """Two independent routes to the same quantity disagree beyond tolerance."""


class NoCrossoverError(DomainError):
    """The deviation threshold is not crossed anywhere in the search bracket."""
