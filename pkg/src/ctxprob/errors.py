"""Exception hierarchy for the contextual probability calculus.

Every error raised by this package derives from :class:`CtxprobError`, so
callers can catch the whole family with one clause.  The leaf classes are
semantic: they say *why* a computation is impossible, not merely that an
argument was bad.
"""

from __future__ import annotations

__all__ = [
    "CtxprobError",
    "ValidationError",
    "OutOfRangeError",
    "DegenerateContextError",
    "NonTrigonometricError",
    "NotBalancedError",
    "ZeroFiltrationError",
    "InfeasibleLambdaError",
    "GenerationExhaustedError",
    "EmptyEnsembleError",
]


class CtxprobError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CtxprobError, ValueError):
    """An input violates its contract (domain, shape, normalization, type)."""


class OutOfRangeError(CtxprobError):
    """A predicted outcome probability falls outside [0, 1].

    The (prior, transition, coefficients) triple is statistically infeasible:
    no experiment can produce these numbers.
    """


class DegenerateContextError(CtxprobError):
    """The interference weight vanishes while the deviation from the
    classical prediction does not, so no coefficient can explain the data."""


class NonTrigonometricError(CtxprobError):
    """An operation requiring trigonometric phases received a hyperbolic one."""


class NotBalancedError(CtxprobError):
    """The transition matrix is not doubly stochastic, so the balance-phase
    constraint does not apply."""


class ZeroFiltrationError(CtxprobError):
    """A filtration outcome has zero probability; the corresponding filtered
    ensemble cannot be prepared."""


class InfeasibleLambdaError(CtxprobError):
    """A target coefficient pair cannot be realized by any valid statistics
    for the given prior and transition matrix."""


class GenerationExhaustedError(CtxprobError):
    """Random model generation exceeded its rejection-sampling retry bound."""


class EmptyEnsembleError(CtxprobError):
    """A required ensemble has size zero; frequencies are undefined."""
