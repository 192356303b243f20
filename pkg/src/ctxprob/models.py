"""Ground-truth model families producing exact context statistics.

Three independent oracles exercise the calculus from the outside:

* :class:`KolmogorovModel` -- a finite classical probability space with
  explicit point weights.  Conditioning is brute-force enumeration, so the
  resulting statistics satisfy the total-probability formula exactly and the
  extracted interference coefficients must vanish.
* :class:`QubitModel` -- a pure two-level quantum state measured in two
  orthonormal bases.  Its transition matrices are doubly stochastic and its
  coefficients trigonometric.
* :class:`SyntheticModel` -- statistics manufactured to carry a prescribed
  coefficient pair, the only practical way to reach the hyperbolic regime.

Random instances of each family are pure functions of ``(kind, seed)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from ._rng import ROLE_MODEL, substream
from ._validation import (
    TOL_EXACT,
    require_distribution,
    require_finite,
    require_outcome_index,
    require_probability,
    require_seed,
)
from .calculus import (
    ContextStatistics,
    LambdaPair,
    TransitionMatrix,
    predict_outcome,
)
from .errors import (
    GenerationExhaustedError,
    InfeasibleLambdaError,
    OutOfRangeError,
    ValidationError,
    ZeroFiltrationError,
)

__all__ = [
    "KolmogorovModel",
    "QubitModel",
    "SyntheticModel",
    "Model",
    "ModelKind",
    "classical_statistics",
    "qubit_statistics",
    "synthesize_statistics",
    "exact_statistics",
    "random_model",
]

_MAX_POINTS = 16
_RETRY_BOUND = 1000


@dataclass(frozen=True)
class KolmogorovModel:
    """Finite classical probability space with two dichotomic random variables.

    Parallel tuples: ``weights[k]`` is the probability of elementary event
    ``k``, ``a_values[k]`` / ``b_values[k]`` its A/B outcome indices (0 or 1).
    """

    weights: tuple[float, ...]
    a_values: tuple[int, ...]
    b_values: tuple[int, ...]

    def __post_init__(self) -> None:
        weights = tuple(require_probability(w, "weight") for w in self.weights)
        if not weights:
            raise ValidationError("model needs at least one elementary event")
        if abs(sum(weights) - 1.0) > TOL_EXACT:
            raise ValidationError(f"weights must sum to 1, got {sum(weights)}")
        a_values = tuple(require_outcome_index(a, "a_value") for a in self.a_values)
        b_values = tuple(require_outcome_index(b, "b_value") for b in self.b_values)
        if not len(weights) == len(a_values) == len(b_values):
            raise ValidationError("weights, a_values and b_values must have equal length")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "a_values", a_values)
        object.__setattr__(self, "b_values", b_values)


@dataclass(frozen=True)
class QubitModel:
    """Pure two-level state and measurement bases, all phases in radians.

    State ``cos(alpha)|a1> + exp(i*phi)*sin(alpha)|a2>`` in the A-eigenbasis;
    the B-eigenbasis is the A-basis rotated by ``b_rotation`` with relative
    phase ``b_phase``.  Global phases are dropped: this is a minimal complete
    chart for two-level measurement statistics.
    """

    alpha: float
    phi: float
    b_rotation: float
    b_phase: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha", "phi", "b_rotation", "b_phase"):
            object.__setattr__(self, name, require_finite(getattr(self, name), name))


@dataclass(frozen=True)
class SyntheticModel:
    """Generator triple (prior, transition, target coefficients)."""

    prior: tuple[float, float]
    transition: TransitionMatrix
    target_lambda: LambdaPair

    def __post_init__(self) -> None:
        object.__setattr__(self, "prior", require_distribution(self.prior, "prior"))
        if not isinstance(self.transition, TransitionMatrix):
            object.__setattr__(self, "transition", TransitionMatrix(tuple(self.transition)))
        if not isinstance(self.target_lambda, LambdaPair):
            object.__setattr__(self, "target_lambda", LambdaPair(*self.target_lambda))


Model = KolmogorovModel | QubitModel | SyntheticModel


class ModelKind(str, Enum):
    CLASSICAL = "classical"
    QUBIT = "qubit"
    SYNTHETIC_TRIGONOMETRIC = "synthetic-trigonometric"
    SYNTHETIC_HYPERBOLIC = "synthetic-hyperbolic"


def classical_statistics(model: KolmogorovModel) -> ContextStatistics:
    """Exact statistics of a finite classical model by brute-force conditioning.

    Prior = marginal law of B; transition rows = conditional laws of A given
    each B-outcome; outcome = marginal law of A.  Raises
    :class:`ZeroFiltrationError` when a B-outcome has zero total weight, since
    the corresponding filtered ensemble cannot be prepared.
    """
    b_weight = [0.0, 0.0]
    joint = [[0.0, 0.0], [0.0, 0.0]]  # [b][a]
    a_weight = [0.0, 0.0]
    for w, a, b in zip(model.weights, model.a_values, model.b_values):
        b_weight[b] += w
        joint[b][a] += w
        a_weight[a] += w
    if min(b_weight) <= 0.0:
        empty = b_weight.index(min(b_weight))
        raise ZeroFiltrationError(
            f"B-outcome {empty + 1} has zero probability; filtration impossible"
        )
    rows = tuple(
        (joint[b][0] / b_weight[b], joint[b][1] / b_weight[b]) for b in range(2)
    )
    return ContextStatistics(
        prior=(b_weight[0], b_weight[1]),
        transition=TransitionMatrix(rows),
        outcome=(a_weight[0], a_weight[1]),
    )


def _b_basis(model: QubitModel) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    c = math.cos(model.b_rotation)
    s = math.sin(model.b_rotation)
    chi = cmath.exp(1j * model.b_phase)
    b1 = (complex(c), chi * s)
    b2 = (-s / chi, complex(c))
    return (b1, b2)


def qubit_statistics(model: QubitModel) -> ContextStatistics:
    """Exact measurement statistics of a pure two-level state.

    Outcome ``q_j = |<a_j|psi>|^2``, prior ``p_i = |<b_i|psi>|^2``, transition
    ``t_ij = |<a_j|b_i>|^2``.  The transition matrix is doubly stochastic by
    completeness of both bases, and the implied coefficients are
    trigonometric.
    """
    psi = (complex(math.cos(model.alpha)), cmath.exp(1j * model.phi) * math.sin(model.alpha))
    b1, b2 = _b_basis(model)
    prior = tuple(
        abs(b[0].conjugate() * psi[0] + b[1].conjugate() * psi[1]) ** 2 for b in (b1, b2)
    )
    rows = tuple((abs(b[0]) ** 2, abs(b[1]) ** 2) for b in (b1, b2))
    outcome = (abs(psi[0]) ** 2, abs(psi[1]) ** 2)
    return ContextStatistics(prior=prior, transition=TransitionMatrix(rows), outcome=outcome)


def synthesize_statistics(model: SyntheticModel) -> ContextStatistics:
    """Statistics carrying exactly the model's target coefficients.

    The outcome pair is the forward prediction for the target coefficients;
    inverting the finished statistics recovers the targets (up to rounding,
    where the interference weights are nondegenerate).  Raises
    :class:`InfeasibleLambdaError` when the prediction leaves [0, 1] or the
    two predictions fail to sum to one (the targets violate the cancellation
    constraint between the interference terms).
    """
    try:
        outcome = predict_outcome(model.prior, model.transition, model.target_lambda)
    except OutOfRangeError as exc:
        raise InfeasibleLambdaError(str(exc)) from exc
    if abs(outcome[0] + outcome[1] - 1.0) > TOL_EXACT:
        raise InfeasibleLambdaError(
            f"target coefficients {tuple(model.target_lambda)} break outcome "
            f"normalization: predictions sum to {outcome[0] + outcome[1]}"
        )
    return ContextStatistics(prior=model.prior, transition=model.transition, outcome=outcome)


def exact_statistics(model: Model) -> ContextStatistics:
    """Dispatch to the family-specific exact-statistics oracle."""
    if isinstance(model, KolmogorovModel):
        return classical_statistics(model)
    if isinstance(model, QubitModel):
        return qubit_statistics(model)
    if isinstance(model, SyntheticModel):
        return synthesize_statistics(model)
    raise ValidationError(f"unknown model type {type(model).__name__}")


# ---------------------------------------------------------------------------
# Random model generation
# ---------------------------------------------------------------------------


def _random_classical(rng) -> KolmogorovModel:
    n = int(rng.integers(2, _MAX_POINTS + 1))
    # Strictly positive weights and a forced point in each filtration keep
    # every draw valid without rejection.
    raw = rng.random(n) + 1e-3
    weights = tuple(float(w) for w in raw / raw.sum())
    a_values = tuple(int(a) for a in rng.integers(0, 2, size=n))
    b_values = [int(b) for b in rng.integers(0, 2, size=n)]
    b_values[0] = 0
    b_values[1] = 1
    return KolmogorovModel(weights=weights, a_values=a_values, b_values=tuple(b_values))


def _random_qubit(rng) -> QubitModel:
    return QubitModel(
        alpha=float(rng.uniform(0.0, math.pi / 2)),
        phi=float(rng.uniform(0.0, 2.0 * math.pi)),
        b_rotation=float(rng.uniform(0.0, math.pi / 2)),
        b_phase=float(rng.uniform(0.0, 2.0 * math.pi)),
    )


def _random_synthetic(rng, hyperbolic: bool) -> SyntheticModel:
    # Symmetric transition rows (q, 1-q), (1-q, q) make the two interference
    # weights equal, so lambda2 = -lambda1 keeps the outcome normalized for
    # any prior; amplitude feasibility is then a one-sided window.
    for _ in range(_RETRY_BOUND):
        p1 = float(rng.uniform(0.2, 0.8))
        q = float(rng.uniform(0.6, 0.95)) if hyperbolic else float(rng.uniform(0.15, 0.85))
        prior = (p1, 1.0 - p1)
        transition = TransitionMatrix(((q, 1.0 - q), (1.0 - q, q)))
        classical_q1 = p1 * q + (1.0 - p1) * (1.0 - q)
        weight = 2.0 * math.sqrt(p1 * (1.0 - p1) * q * (1.0 - q))
        lo = -classical_q1 / weight
        hi = (1.0 - classical_q1) / weight
        if hyperbolic:
            margin = 1.05
            reach = min(hi, -lo)
            if reach <= margin:
                continue
            magnitude = float(rng.uniform(margin, reach))
            lam1 = magnitude if rng.random() < 0.5 else -magnitude
        else:
            bound = min(hi, -lo, 0.999)
            if bound <= 1e-3:
                continue
            lam1 = float(rng.uniform(-bound, bound))
        return SyntheticModel(
            prior=prior, transition=transition, target_lambda=LambdaPair(lam1, -lam1)
        )
    raise GenerationExhaustedError(
        f"no feasible synthetic instance found in {_RETRY_BOUND} attempts"
    )


def random_model(kind: ModelKind | str, seed: int) -> Model:
    """Deterministic random instance of a model family.

    Pure function of ``(kind, seed)``: the same pair always yields the same
    instance, and every instance satisfies its family invariants (classical
    draws have both filtrations nonempty; synthetic draws are feasible, with
    :class:`GenerationExhaustedError` after a bounded number of rejections).
    """
    kind = ModelKind(kind)
    rng = substream(require_seed(seed), ROLE_MODEL)
    if kind is ModelKind.CLASSICAL:
        return _random_classical(rng)
    if kind is ModelKind.QUBIT:
        return _random_qubit(rng)
    return _random_synthetic(rng, hyperbolic=kind is ModelKind.SYNTHETIC_HYPERBOLIC)
