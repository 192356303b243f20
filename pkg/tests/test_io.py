"""Experiment-file schema and canonical serialization."""

import json
import math

import pytest

from ctxprob import (
    ContextStatistics,
    DichotomicObservable,
    ExperimentFile,
    KolmogorovModel,
    LambdaPair,
    QubitModel,
    SyntheticModel,
    TransitionMatrix,
    ValidationError,
    canonical_dumps,
    simulate_counts,
)
from ctxprob.io import model_from_dict, model_to_dict

E1_STATS = ContextStatistics(
    (0.5, 0.5), TransitionMatrix(((0.5, 0.5), (0.5, 0.5))), (0.75, 0.25)
)


class TestCanonicalJson:
    def test_key_order_is_normalized(self):
        a = canonical_dumps({"b": 1, "a": 2})
        b = canonical_dumps({"a": 2, "b": 1})
        assert a == b

    def test_floats_round_trip_shortest(self):
        text = canonical_dumps({"x": 0.1, "y": 1.0 / 3.0})
        assert '"x": 0.1' in text
        parsed = json.loads(text)
        assert parsed["x"] == 0.1 and parsed["y"] == 1.0 / 3.0

    def test_non_finite_is_rejected(self):
        with pytest.raises(ValueError):
            canonical_dumps({"x": float("nan")})

    def test_trailing_newline(self):
        assert canonical_dumps({}).endswith("\n")


class TestModelDescriptors:
    def test_round_trips(self):
        models = [
            KolmogorovModel((0.06, 0.24, 0.42, 0.28), (0, 1, 0, 1), (0, 0, 1, 1)),
            QubitModel(alpha=math.pi / 6, phi=math.pi / 2, b_rotation=math.pi / 4),
            SyntheticModel(
                (0.5, 0.5), TransitionMatrix(((0.8, 0.2), (0.2, 0.8))), LambdaPair(1.25, -1.25)
            ),
        ]
        for model in models:
            payload = json.loads(canonical_dumps(model_to_dict(model)))
            assert model_from_dict(payload) == model

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            model_from_dict({"family": "wavefunction"})

    def test_unknown_keys_are_rejected(self):
        with pytest.raises(ValidationError):
            model_from_dict({"family": "qubit", "alpha": 0.1, "phi": 0, "b_rotation": 0, "spin": 2})


class TestExperimentFile:
    def test_exact_round_trip(self):
        original = ExperimentFile(exact=E1_STATS, note="named instance")
        loaded = ExperimentFile.loads(original.dumps())
        assert loaded == original

    def test_counts_round_trip_including_model(self):
        model = QubitModel(alpha=math.pi / 6, phi=math.pi / 2, b_rotation=math.pi / 4)
        counts = simulate_counts(model, 1000, seed=9)
        original = ExperimentFile(counts=counts, model=model)
        loaded = ExperimentFile.loads(original.dumps())
        assert loaded == original
        assert loaded.counts.model == model

    def test_serialization_is_byte_stable(self):
        record = ExperimentFile(exact=E1_STATS)
        assert record.dumps() == ExperimentFile.loads(record.dumps()).dumps()

    def test_requires_exactly_one_payload(self):
        with pytest.raises(ValidationError):
            ExperimentFile()
        counts = simulate_counts(
            QubitModel(alpha=0.4, phi=0.0, b_rotation=0.6), 100, seed=1
        )
        with pytest.raises(ValidationError):
            ExperimentFile(exact=E1_STATS, counts=counts)

    def test_rejects_unsupported_version(self):
        payload = json.loads(ExperimentFile(exact=E1_STATS).dumps())
        payload["format_version"] = 99
        with pytest.raises(ValidationError):
            ExperimentFile.from_dict(payload)

    def test_rejects_unknown_top_level_keys(self):
        payload = json.loads(ExperimentFile(exact=E1_STATS).dumps())
        payload["comment"] = "?"
        with pytest.raises(ValidationError):
            ExperimentFile.from_dict(payload)

    def test_rejects_malformed_json(self):
        with pytest.raises(ValidationError):
            ExperimentFile.loads("{not json")

    def test_rejects_invalid_statistics(self):
        payload = json.loads(ExperimentFile(exact=E1_STATS).dumps())
        payload["exact"]["prior"] = [0.4, 0.7]
        with pytest.raises(ValidationError):
            ExperimentFile.from_dict(payload)

    def test_custom_observable_labels_survive(self):
        observables = (
            DichotomicObservable("spin-z", ("up", "down")),
            DichotomicObservable("spin-x", ("plus", "minus")),
        )
        record = ExperimentFile(observables=observables, exact=E1_STATS)
        assert ExperimentFile.loads(record.dumps()).observables == observables
