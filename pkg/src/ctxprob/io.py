"""File formats: experiment JSON, analysis-report JSON, sweep CSV.

Experiment files (schema version 1) carry either exact statistics or raw
counts for one (context, A, B) triple, plus an optional model descriptor
that makes a simulation fully reproducible from its own output::

    {
      "format_version": 1,
      "observables": [{"name": "A", "values": ["a1", "a2"]},
                      {"name": "B", "values": ["b1", "b2"]}],
      "exact":  {"prior": [p1, p2],
                 "transition": [[t11, t12], [t21, t22]],
                 "outcome": [q1, q2]},
      -- or --
      "counts": {"n_context": N, "a_counts": [k1, k2],
                 "n_filtration": M, "b_counts": [m1, m2],
                 "filtered": [{"n": n1, "a_counts": [c1, c2]},
                              {"n": n2, "a_counts": [d1, d2]}],
                 "seed": S},
      "model": {"family": ...},     # optional
      "note": "free text"           # optional
    }

Exactly one of ``exact`` / ``counts`` must be present.  All outcome indices
are 0-based; all angles are radians.

Serialization is canonical: keys sorted, two-space indent, floats written as
the shortest decimal that round-trips to the same double, trailing newline.
Writing the same value therefore always produces identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .calculus import ContextStatistics, DichotomicObservable, LambdaPair, TransitionMatrix
from .errors import ValidationError
from .models import KolmogorovModel, Model, QubitModel, SyntheticModel
from .sampling import CountsRecord

__all__ = [
    "FORMAT_VERSION",
    "DEFAULT_OBSERVABLES",
    "ExperimentFile",
    "canonical_dumps",
    "model_to_dict",
    "model_from_dict",
    "statistics_to_dict",
    "statistics_from_dict",
    "counts_to_dict",
    "counts_from_dict",
]

FORMAT_VERSION = 1

DEFAULT_OBSERVABLES = (
    DichotomicObservable("A", ("a1", "a2")),
    DichotomicObservable("B", ("b1", "b2")),
)


def canonical_dumps(payload: Any) -> str:
    """Serialize to canonical JSON text (deterministic bytes)."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"{where} has unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ValidationError(f"{where} is missing keys {sorted(missing)}")


# ---------------------------------------------------------------------------
# Model descriptors
# ---------------------------------------------------------------------------


def model_to_dict(model: Model) -> dict:
    if isinstance(model, KolmogorovModel):
        return {
            "family": "classical",
            "points": [
                {"weight": w, "a": a, "b": b}
                for w, a, b in zip(model.weights, model.a_values, model.b_values)
            ],
        }
    if isinstance(model, QubitModel):
        return {
            "family": "qubit",
            "alpha": model.alpha,
            "phi": model.phi,
            "b_rotation": model.b_rotation,
            "b_phase": model.b_phase,
        }
    if isinstance(model, SyntheticModel):
        return {
            "family": "synthetic",
            "prior": list(model.prior),
            "transition": [list(row) for row in model.transition.rows],
            "lambda": list(model.target_lambda),
        }
    raise ValidationError(f"unknown model type {type(model).__name__}")


def model_from_dict(payload: dict) -> Model:
    if not isinstance(payload, dict) or "family" not in payload:
        raise ValidationError("model descriptor must be an object with a 'family' key")
    family = payload["family"]
    if family == "classical":
        _require_keys(payload, {"family", "points"}, {"family", "points"}, "classical model")
        points = payload["points"]
        if not isinstance(points, list) or not points:
            raise ValidationError("classical model needs a nonempty 'points' list")
        for p in points:
            _require_keys(p, {"weight", "a", "b"}, {"weight", "a", "b"}, "model point")
        return KolmogorovModel(
            weights=tuple(p["weight"] for p in points),
            a_values=tuple(p["a"] for p in points),
            b_values=tuple(p["b"] for p in points),
        )
    if family == "qubit":
        _require_keys(
            payload,
            {"family", "alpha", "phi", "b_rotation", "b_phase"},
            {"family", "alpha", "phi", "b_rotation"},
            "qubit model",
        )
        return QubitModel(
            alpha=payload["alpha"],
            phi=payload["phi"],
            b_rotation=payload["b_rotation"],
            b_phase=payload.get("b_phase", 0.0),
        )
    if family == "synthetic":
        _require_keys(
            payload,
            {"family", "prior", "transition", "lambda"},
            {"family", "prior", "transition", "lambda"},
            "synthetic model",
        )
        transition = payload["transition"]
        if not isinstance(transition, list) or len(transition) != 2:
            raise ValidationError("synthetic model transition must be a 2x2 matrix")
        return SyntheticModel(
            prior=tuple(payload["prior"]),
            transition=TransitionMatrix((tuple(transition[0]), tuple(transition[1]))),
            target_lambda=LambdaPair(*payload["lambda"]),
        )
    raise ValidationError(f"unknown model family {family!r}")


# ---------------------------------------------------------------------------
# Statistics and counts payloads
# ---------------------------------------------------------------------------


def statistics_to_dict(stats: ContextStatistics) -> dict:
    return {
        "prior": list(stats.prior),
        "transition": [list(row) for row in stats.transition.rows],
        "outcome": list(stats.outcome),
    }


def statistics_from_dict(payload: dict) -> ContextStatistics:
    _require_keys(
        payload,
        {"prior", "transition", "outcome"},
        {"prior", "transition", "outcome"},
        "exact statistics",
    )
    transition = payload["transition"]
    if not isinstance(transition, list) or len(transition) != 2:
        raise ValidationError("transition must be a 2x2 matrix (two rows)")
    try:
        return ContextStatistics(
            prior=tuple(payload["prior"]),
            transition=TransitionMatrix((tuple(transition[0]), tuple(transition[1]))),
            outcome=tuple(payload["outcome"]),
        )
    except TypeError as exc:
        raise ValidationError(f"malformed exact statistics: {exc}") from exc


def counts_to_dict(counts: CountsRecord) -> dict:
    return {
        "n_context": counts.n_context,
        "a_counts": list(counts.a_counts),
        "n_filtration": counts.n_filtration,
        "b_counts": list(counts.b_counts),
        "filtered": [
            {"n": counts.n_filtered[i], "a_counts": list(counts.a_counts_given[i])}
            for i in range(2)
        ],
        "seed": counts.seed,
    }


def counts_from_dict(payload: dict, model: Model | None = None) -> CountsRecord:
    _require_keys(
        payload,
        {"n_context", "a_counts", "n_filtration", "b_counts", "filtered", "seed"},
        {"n_context", "a_counts", "n_filtration", "b_counts", "filtered", "seed"},
        "counts",
    )
    filtered = payload["filtered"]
    if not isinstance(filtered, list) or len(filtered) != 2:
        raise ValidationError("counts.filtered must list exactly two filtered contexts")
    for f in filtered:
        _require_keys(f, {"n", "a_counts"}, {"n", "a_counts"}, "filtered context")
    try:
        return CountsRecord(
            n_context=payload["n_context"],
            a_counts=tuple(payload["a_counts"]),
            n_filtration=payload["n_filtration"],
            b_counts=tuple(payload["b_counts"]),
            n_filtered=(filtered[0]["n"], filtered[1]["n"]),
            a_counts_given=(tuple(filtered[0]["a_counts"]), tuple(filtered[1]["a_counts"])),
            seed=payload["seed"],
            model=model,
        )
    except TypeError as exc:
        raise ValidationError(f"malformed counts: {exc}") from exc


# ---------------------------------------------------------------------------
# Experiment files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentFile:
    """In-memory form of one experiment file (exact or counts, never both)."""

    observables: tuple[DichotomicObservable, DichotomicObservable] = DEFAULT_OBSERVABLES
    exact: ContextStatistics | None = None
    counts: CountsRecord | None = None
    model: Model | None = None
    note: str | None = None
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        if (self.exact is None) == (self.counts is None):
            raise ValidationError("experiment file needs exactly one of 'exact' or 'counts'")
        if self.format_version != FORMAT_VERSION:
            raise ValidationError(
                f"unsupported format_version {self.format_version}; this build reads "
                f"version {FORMAT_VERSION}"
            )
        observables = tuple(self.observables)
        if len(observables) != 2 or not all(
            isinstance(o, DichotomicObservable) for o in observables
        ):
            raise ValidationError("experiment file needs exactly two observables")
        object.__setattr__(self, "observables", observables)

    def to_dict(self) -> dict:
        payload: dict[str, Any] = {
            "format_version": self.format_version,
            "observables": [
                {"name": o.name, "values": list(o.value_labels)} for o in self.observables
            ],
        }
        if self.exact is not None:
            payload["exact"] = statistics_to_dict(self.exact)
        if self.counts is not None:
            payload["counts"] = counts_to_dict(self.counts)
        if self.model is not None:
            payload["model"] = model_to_dict(self.model)
        if self.note is not None:
            payload["note"] = self.note
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentFile":
        _require_keys(
            payload,
            {"format_version", "observables", "exact", "counts", "model", "note"},
            {"format_version", "observables"},
            "experiment file",
        )
        if payload["format_version"] != FORMAT_VERSION:
            raise ValidationError(
                f"unsupported format_version {payload['format_version']!r}"
            )
        raw_obs = payload["observables"]
        if not isinstance(raw_obs, list) or len(raw_obs) != 2:
            raise ValidationError("experiment file needs exactly two observables")
        observables = []
        for entry in raw_obs:
            _require_keys(entry, {"name", "values"}, {"name", "values"}, "observable")
            values = entry["values"]
            if not isinstance(values, list) or len(values) != 2:
                raise ValidationError("observable needs exactly two value labels")
            observables.append(DichotomicObservable(entry["name"], (values[0], values[1])))
        model = model_from_dict(payload["model"]) if "model" in payload else None
        exact = statistics_from_dict(payload["exact"]) if "exact" in payload else None
        counts = (
            counts_from_dict(payload["counts"], model=model) if "counts" in payload else None
        )
        note = payload.get("note")
        if note is not None and not isinstance(note, str):
            raise ValidationError("note must be a string")
        return cls(
            observables=(observables[0], observables[1]),
            exact=exact,
            counts=counts,
            model=model,
            note=note,
        )

    def dumps(self) -> str:
        return canonical_dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "ExperimentFile":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from exc
        return cls.from_dict(payload)
