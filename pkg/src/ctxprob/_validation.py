"""Shared input-validation helpers.

All helpers raise :class:`~ctxprob.errors.ValidationError` on contract
violations and return cleaned-up Python floats/ints otherwise.  Probabilities
are allowed to stray outside [0, 1] by at most ``tol`` (floating-point noise
from squared moduli and products) and are clipped back to the boundary.
"""

from __future__ import annotations

import math
from typing import Any, Sequence

from .errors import ValidationError

#: Tolerance for checks on analytically produced inputs (normalization,
#: row sums).  Separates floating-point noise from genuinely bad data.
TOL_EXACT = 1e-9

#: Cutoff below which an interference denominator counts as vanishing.
TOL_DEGENERATE = 1e-12

_MAX_SEED = 2**64


def require_finite(x: Any, name: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{name} must be a real number, got {x!r}")
    value = float(x)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def require_probability(x: Any, name: str, *, tol: float = TOL_EXACT) -> float:
    """Validate a single probability, clipping excursions within ``tol``."""
    value = require_finite(x, name)
    if value < -tol or value > 1.0 + tol:
        raise ValidationError(f"{name} must be in [0, 1], got {value}")
    return min(max(value, 0.0), 1.0)


def require_distribution(
    pair: Sequence[Any], name: str, *, tol: float = TOL_EXACT
) -> tuple[float, float]:
    """Validate a two-outcome probability distribution (sums to 1)."""
    if len(pair) != 2:
        raise ValidationError(f"{name} must have exactly two components")
    p1 = require_probability(pair[0], f"{name}[1]", tol=tol)
    p2 = require_probability(pair[1], f"{name}[2]", tol=tol)
    if abs(p1 + p2 - 1.0) > tol:
        raise ValidationError(f"{name} must sum to 1, got {p1} + {p2} = {p1 + p2}")
    return (p1, p2)


def require_positive_int(n: Any, name: str, *, minimum: int = 1) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValidationError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {n}")
    return n


def require_seed(seed: Any, name: str = "seed") -> int:
    """Validate a 64-bit unsigned seed."""
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f"{name} must be an integer, got {seed!r}")
    if not 0 <= seed < _MAX_SEED:
        raise ValidationError(f"{name} must be in [0, 2^64), got {seed}")
    return seed


def require_outcome_index(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer outcome index, got {value!r}")
    if value not in (0, 1):
        raise ValidationError(f"{name} must be 0 or 1, got {value}")
    return value
