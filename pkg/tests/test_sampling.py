"""Finite-ensemble simulation, frequency estimation, bootstrap inference."""

import math

import pytest

from ctxprob import (
    CountsRecord,
    DegenerateContextError,
    EmptyEnsembleError,
    EnsembleSizes,
    KolmogorovModel,
    LambdaPair,
    QubitModel,
    SyntheticModel,
    TheoryKind,
    TransitionMatrix,
    ValidationError,
    ZeroFiltrationError,
    convergence_study,
    estimate_lambda,
    estimate_statistics,
    simulate_counts,
)

E1_MODEL = QubitModel(alpha=math.pi / 6, phi=math.pi / 2, b_rotation=math.pi / 4)
E2_MODEL = KolmogorovModel(
    weights=(0.06, 0.24, 0.42, 0.28), a_values=(0, 1, 0, 1), b_values=(0, 0, 1, 1)
)


def e2_proportional_counts(n=10000):
    """Tallies exactly proportional to the E2 probabilities."""
    return CountsRecord(
        n_context=n,
        a_counts=(int(0.48 * n), n - int(0.48 * n)),
        n_filtration=n,
        b_counts=(int(0.3 * n), n - int(0.3 * n)),
        n_filtered=(n, n),
        a_counts_given=((int(0.2 * n), n - int(0.2 * n)), (int(0.6 * n), n - int(0.6 * n))),
        seed=0,
    )


class TestSimulateCounts:
    def test_determinism(self):
        first = simulate_counts(E1_MODEL, EnsembleSizes.uniform(1000), seed=7)
        second = simulate_counts(E1_MODEL, EnsembleSizes.uniform(1000), seed=7)
        assert first == second

    def test_seed_changes_draws(self):
        first = simulate_counts(E1_MODEL, 1000, seed=7)
        second = simulate_counts(E1_MODEL, 1000, seed=8)
        assert first != second

    def test_unit_ensembles_give_one_hot_tallies(self):
        counts = simulate_counts(E1_MODEL, EnsembleSizes.uniform(1), seed=3)
        for pair in (counts.a_counts, counts.b_counts, *counts.a_counts_given):
            assert sorted(pair) == [0, 1]

    def test_large_run_lands_within_three_sigma(self):
        # binomial sigma at p=0.75, n=1e6 is ~4.3e-4; freeze the 3-sigma band
        counts = simulate_counts(E1_MODEL, EnsembleSizes.uniform(10**6), seed=7)
        assert abs(counts.a_counts[0] / 10**6 - 0.75) < 0.0013

    def test_zero_filtration_is_rejected(self):
        model = QubitModel(alpha=0.0, phi=0.0, b_rotation=0.0)  # state = b1 exactly
        with pytest.raises(ZeroFiltrationError):
            simulate_counts(model, 100, seed=0)

    def test_sizes_must_be_positive(self):
        with pytest.raises(ValidationError):
            EnsembleSizes.uniform(0)

    def test_tallies_must_sum_to_sizes(self):
        with pytest.raises(ValidationError):
            CountsRecord(
                n_context=10,
                a_counts=(4, 5),
                n_filtration=10,
                b_counts=(5, 5),
                n_filtered=(10, 10),
                a_counts_given=((5, 5), (5, 5)),
                seed=0,
            )


class TestEstimateStatistics:
    def test_frequencies_and_binomial_stderr(self):
        counts = CountsRecord(
            n_context=1000,
            a_counts=(480, 520),
            n_filtration=1000,
            b_counts=(300, 700),
            n_filtered=(1000, 1000),
            a_counts_given=((200, 800), (600, 400)),
            seed=0,
        )
        est = estimate_statistics(counts)
        assert est.point.prior == (0.3, 0.7)
        assert est.stderr.prior[0] == pytest.approx(math.sqrt(0.3 * 0.7 / 1000), abs=1e-15)
        assert est.stderr.prior[0] == pytest.approx(0.0145, abs=2e-4)

    def test_exactly_proportional_tallies_reproduce_e2(self):
        est = estimate_statistics(e2_proportional_counts())
        assert est.point.prior == (0.3, 0.7)
        assert est.point.transition.rows == ((0.2, 0.8), (0.6, 0.4))
        assert est.point.outcome == (0.48, 0.52)

    def test_rows_are_exactly_stochastic_by_construction(self):
        counts = simulate_counts(E1_MODEL, 997, seed=11)
        est = estimate_statistics(counts)
        for row in est.point.transition.rows:
            assert row[0] + row[1] == pytest.approx(1.0, abs=1e-15)

    def test_empty_ensemble(self):
        counts = CountsRecord(
            n_context=10,
            a_counts=(5, 5),
            n_filtration=10,
            b_counts=(5, 5),
            n_filtered=(0, 10),
            a_counts_given=((0, 0), (5, 5)),
            seed=0,
        )
        with pytest.raises(EmptyEnsembleError):
            estimate_statistics(counts)


class TestEstimateLambda:
    def test_exact_e2_frequencies_give_zero_with_covering_interval(self):
        est = estimate_statistics(e2_proportional_counts())
        result = estimate_lambda(est, replicates=400, seed=5)
        assert tuple(result.lambda_hat) == (0.0, 0.0)
        assert result.ci_low[0] <= 0.0 <= result.ci_high[0]
        assert result.ci_low[1] <= 0.0 <= result.ci_high[1]

    def test_bootstrap_is_deterministic(self):
        est = estimate_statistics(simulate_counts(E1_MODEL, 10**4, seed=21))
        first = estimate_lambda(est, replicates=300, seed=9)
        second = estimate_lambda(est, replicates=300, seed=9)
        assert first == second
        third = estimate_lambda(est, replicates=300, seed=10)
        assert third.ci_low != first.ci_low

    def test_interval_contains_point_estimate(self):
        for seed in range(10):
            est = estimate_statistics(simulate_counts(E1_MODEL, 500, seed=seed))
            result = estimate_lambda(est, replicates=200, seed=seed)
            for j in range(2):
                assert result.ci_low[j] <= result.lambda_hat[j] <= result.ci_high[j]

    def test_degenerate_point_statistics_propagate(self):
        model = SyntheticModel(
            prior=(0.5, 0.5),
            transition=TransitionMatrix(((1.0, 0.0), (0.0, 1.0))),
            target_lambda=LambdaPair(0.0, 0.0),
        )
        counts = simulate_counts(model, 1000, seed=2)
        est = estimate_statistics(counts)
        with pytest.raises(DegenerateContextError):
            estimate_lambda(est, replicates=50, seed=0)

    def test_e1_estimate_brackets_truth_at_large_n(self):
        est = estimate_statistics(simulate_counts(E1_MODEL, 10**6, seed=123))
        result = estimate_lambda(est, replicates=500, seed=7)
        assert result.lambda_hat.lambda1 == pytest.approx(0.5, abs=0.01)
        assert result.ci_low[0] <= 0.5 <= result.ci_high[0]
        assert result.classification.kind is TheoryKind.TRIGONOMETRIC
        assert result.failed_replicates == 0

    def test_e3_estimate_classifies_hyperbolic(self):
        # outcome probabilities 1 and 0 give zero-variance outcome tallies
        model = SyntheticModel(
            prior=(0.5, 0.5),
            transition=TransitionMatrix(((0.8, 0.2), (0.2, 0.8))),
            target_lambda=LambdaPair(1.25, -1.25),
        )
        counts = simulate_counts(model, 10**6, seed=17)
        assert counts.a_counts == (10**6, 0)
        result = estimate_lambda(estimate_statistics(counts), replicates=400, seed=3)
        assert result.lambda_hat.lambda1 == pytest.approx(1.25, abs=0.01)
        assert result.classification.kind is TheoryKind.HYPERBOLIC


class TestConvergenceStudy:
    def test_single_cell(self):
        rows = convergence_study(E1_MODEL, [1000], seeds_per_size=1, base_seed=4)
        assert len(rows) == 1
        assert rows[0].n == 1000
        assert rows[0].mean_abs_error[0] >= 0.0
        assert rows[0].stderr == (0.0, 0.0)

    def test_deterministic(self):
        first = convergence_study(E1_MODEL, [100, 1000], seeds_per_size=5, base_seed=4)
        second = convergence_study(E1_MODEL, [100, 1000], seeds_per_size=5, base_seed=4)
        assert first == second

    def test_error_shrinks_with_ensemble_size(self):
        rows = convergence_study(E1_MODEL, [10**2, 10**4], seeds_per_size=30, base_seed=0)
        assert rows[0].mean_abs_error[0] > rows[1].mean_abs_error[0]

    def test_classical_model_estimates_near_zero(self):
        rows = convergence_study(E2_MODEL, [10**5], seeds_per_size=20, base_seed=1)
        assert rows[0].mean_abs_error[0] < 0.05
        assert rows[0].mean_abs_error[1] < 0.05

    def test_empty_grid_is_rejected(self):
        with pytest.raises(ValidationError):
            convergence_study(E1_MODEL, [], seeds_per_size=1, base_seed=0)
