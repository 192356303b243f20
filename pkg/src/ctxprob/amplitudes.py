"""Lift of trigonometric statistics to complex probability amplitudes.

For a trigonometric coefficient ``lambda_j = cos(theta_j)`` the outcome
transformation is the law of cosines ``c^2 = a^2 + b^2 + 2*a*b*cos(theta)``
with ``c^2 = q_j``, ``a^2 = p1*t1j`` and ``b^2 = p2*t2j``.  Reading ``c`` as
the modulus of a sum of two complex numbers of moduli ``a`` and ``b`` at
relative phase ``theta`` gives the amplitude representation

    psi_j = sqrt(p1*t1j) + exp(i*theta_j) * sqrt(p2*t2j),

whose squared modulus reproduces the outcome probability by construction.
The first term is fixed real nonnegative, which pins the free global phase
and makes amplitudes comparable for equality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ._validation import TOL_EXACT
from .calculus import ContextStatistics, PhasePair, check_double_stochastic
from .errors import NonTrigonometricError, NotBalancedError, ValidationError

__all__ = ["AmplitudePair", "lift_to_amplitudes", "born_residual", "balance_phase_constraint"]


@dataclass(frozen=True)
class AmplitudePair:
    """Complex amplitudes (psi1, psi2), one per A-outcome.

    The squared moduli sum to one (inherited from outcome normalization);
    construction rejects pairs violating this within ``norm_tol``.
    """

    psi: tuple[complex, complex]
    phases: PhasePair
    norm_tol: float = TOL_EXACT

    def __post_init__(self) -> None:
        psi = tuple(complex(z) for z in self.psi)
        if len(psi) != 2:
            raise ValidationError("amplitude pair must have exactly two components")
        norm = abs(psi[0]) ** 2 + abs(psi[1]) ** 2
        if abs(norm - 1.0) > self.norm_tol:
            raise ValidationError(
                f"amplitudes must satisfy |psi1|^2 + |psi2|^2 = 1, got {norm}"
            )
        object.__setattr__(self, "psi", psi)

    def probabilities(self) -> tuple[float, float]:
        return (abs(self.psi[0]) ** 2, abs(self.psi[1]) ** 2)


def lift_to_amplitudes(
    stats: ContextStatistics, phases: PhasePair, *, norm_tol: float = TOL_EXACT
) -> AmplitudePair:
    """Build the amplitude pair for trigonometric statistics.

    ``psi_j = sqrt(p1*t1j) + exp(i*theta_j)*sqrt(p2*t2j)``.  With phases
    taken from the statistics' own coefficients, ``|psi_j|^2`` equals the
    observed outcome probability (the Born rule holds by construction).
    Raises :class:`NonTrigonometricError` if either phase is hyperbolic.
    ``norm_tol`` loosens the normalization check on the result, for phases
    that only match the statistics up to statistical noise.
    """
    if not phases.all_trigonometric:
        raise NonTrigonometricError(
            "amplitude lift requires trigonometric phases on both components"
        )
    p1, p2 = stats.prior
    psi = []
    for j, phase in enumerate(phases):
        a = math.sqrt(p1 * stats.transition.rows[0][j])
        b = math.sqrt(p2 * stats.transition.rows[1][j])
        psi.append(a + cmath.exp(1j * phase.theta) * b)
    return AmplitudePair(psi=(psi[0], psi[1]), phases=phases, norm_tol=norm_tol)


def born_residual(amplitudes: AmplitudePair, outcome: tuple[float, float]) -> float:
    """Largest deviation between squared moduli and outcome probabilities."""
    probs = amplitudes.probabilities()
    return max(abs(probs[0] - outcome[0]), abs(probs[1] - outcome[1]))


def balance_phase_constraint(
    stats: ContextStatistics, phases: PhasePair, tol: float = TOL_EXACT
) -> tuple[bool, float]:
    """Check the phase identity implied by statistical balance.

    For a doubly stochastic transition matrix the two interference weights
    coincide, so consistency of the statistics forces
    ``cos(theta1) + cos(theta2) = 0``.  Returns ``(satisfied, residual)``
    with ``residual = |cos(theta1) + cos(theta2)|``.

    Raises :class:`NotBalancedError` if the transition matrix is not doubly
    stochastic within ``tol`` (the constraint does not apply) and
    :class:`NonTrigonometricError` for hyperbolic phases.
    """
    if not phases.all_trigonometric:
        raise NonTrigonometricError("balance-phase constraint requires trigonometric phases")
    report = check_double_stochastic(stats.transition, tol)
    if not report.is_double_stochastic:
        raise NotBalancedError(
            f"transition matrix is not doubly stochastic within {tol}: "
            f"column residuals {report.column_residuals}"
        )
    residual = abs(math.cos(phases.phase1.theta) + math.cos(phases.phase2.theta))
    return (residual <= tol, residual)
