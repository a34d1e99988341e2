import numpy as np
import pytest

from sparse_afe.metrics import (
    DB_FLOOR,
    LearningCurve,
    convergence_iteration,
    ensemble_average,
    from_db,
    msd_instant,
    steady_state_msd,
    to_db,
    total_deviation,
)


def curve_of(values, trials=1, label=""):
    return LearningCurve(msd=np.asarray(values, float), trials=trials, algorithm_label=label)


class TestMsdInstant:
    def test_perfect_estimate_is_zero(self):
        w = np.random.default_rng(0).standard_normal(8)
        assert msd_instant(w, w) == 0.0

    def test_hand_computed(self):
        assert msd_instant(np.array([1.0, 0.0]), np.array([0.0, 0.0])) == 1.0

    def test_unit_energy_channel_starts_at_one(self):
        w = np.random.default_rng(1).standard_normal(16)
        w /= np.linalg.norm(w)
        assert msd_instant(w, np.zeros(16)) == pytest.approx(1.0, abs=1e-12)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            msd_instant(np.ones(3), np.ones(4))

    def test_symmetric_and_permutation_invariant(self):
        rng = np.random.default_rng(2)
        a, b = rng.standard_normal(10), rng.standard_normal(10)
        assert msd_instant(a, b) == msd_instant(b, a)
        assert msd_instant(-a, -b) == pytest.approx(msd_instant(a, b), rel=1e-15)
        perm = rng.permutation(10)
        assert msd_instant(a[perm], b[perm]) == pytest.approx(msd_instant(a, b), rel=1e-12)


class TestEnsembleAverage:
    def test_single_trial_identity(self):
        c = np.random.default_rng(3).uniform(0.1, 1.0, size=50)
        avg = ensemble_average([c], algorithm_label="x")
        assert np.array_equal(avg.msd, c)
        assert avg.trials == 1
        assert avg.algorithm_label == "x"

    def test_two_constant_curves(self):
        avg = ensemble_average([np.full(10, 0.2), np.full(10, 0.4)])
        assert np.allclose(avg.msd, 0.3, atol=1e-15)
        assert avg.trials == 2

    def test_linearity(self):
        rng = np.random.default_rng(4)
        curves = [rng.uniform(0.1, 1.0, 20) for _ in range(5)]
        base = ensemble_average(curves).msd
        scaled = ensemble_average([3.0 * c for c in curves]).msd
        assert np.allclose(scaled, 3.0 * base, rtol=1e-12)

    def test_variance_shrinks_like_one_over_trials(self):
        rng = np.random.default_rng(5)
        trials, n = 200, 2000
        curves = rng.uniform(0.5, 1.5, size=(trials, n))  # iid per iteration
        avg = ensemble_average(list(curves))
        single_var = np.var(curves)
        mean_var = np.var(avg.msd)
        assert 0.5 * single_var / trials <= mean_var <= 2.0 * single_var / trials

    def test_empty_and_ragged_rejected(self):
        with pytest.raises(ValueError):
            ensemble_average([])
        with pytest.raises(ValueError):
            ensemble_average([np.ones(3), np.ones(4)])


class TestDbConversion:
    def test_reference_points(self):
        assert to_db(1.0) == 0.0
        assert to_db(0.001) == pytest.approx(-30.0, abs=1e-12)
        assert to_db(0.5) == pytest.approx(-3.0103, abs=1e-4)

    def test_zero_is_floored(self):
        assert to_db(0.0) == pytest.approx(10 * np.log10(DB_FLOOR))

    def test_round_trip(self):
        linear = np.logspace(-12, 6, 37)
        assert np.max(np.abs(from_db(to_db(linear)) - linear) / linear) <= 1e-12
        db = np.linspace(-120, 60, 37)
        assert np.max(np.abs(to_db(from_db(db)) - db)) <= 1e-12

    def test_array_and_scalar_forms(self):
        out = to_db(np.array([1.0, 0.1]))
        assert out.shape == (2,)
        assert isinstance(to_db(2.0), float)


class TestSteadyState:
    def test_constant_curve(self):
        assert steady_state_msd(curve_of(np.full(100, 0.25))) == pytest.approx(
            10 * np.log10(0.25)
        )

    def test_tail_of_converged_curve(self):
        msd = np.concatenate([np.linspace(1.0, 0.002, 90), np.full(10, 0.001)])
        assert steady_state_msd(curve_of(msd)) == pytest.approx(-30.0, abs=1e-9)

    def test_full_window(self):
        msd = np.array([0.1, 0.2, 0.3, 0.4])
        assert steady_state_msd(curve_of(msd), tail_fraction=1.0) == pytest.approx(
            10 * np.log10(0.25)
        )

    def test_positive_shift_increases_level(self):
        msd = np.random.default_rng(6).uniform(0.01, 0.1, size=50)
        base = steady_state_msd(curve_of(msd))
        shifted = steady_state_msd(curve_of(msd + 0.05))
        assert shifted > base

    def test_invalid_tail_fraction(self):
        with pytest.raises(ValueError):
            steady_state_msd(curve_of([1.0]), tail_fraction=0.0)


class TestConvergenceIteration:
    def test_constant_curve_converges_immediately(self):
        assert convergence_iteration(curve_of(np.full(50, 0.1))) == 0

    def test_step_down_curve(self):
        msd = np.concatenate([np.full(500, 1.0), np.full(500, 0.001)])
        assert convergence_iteration(curve_of(msd)) == 500

    def test_growing_curve_never_converges(self):
        msd = 10 ** (np.arange(100) / 10.0)  # +1 dB per iteration forever
        assert convergence_iteration(curve_of(msd)) == 100

    def test_margin_validation(self):
        with pytest.raises(ValueError):
            convergence_iteration(curve_of([1.0]), margin_db=0.0)


class TestLearningCurveType:
    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            curve_of([0.1, -0.2])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            curve_of([])

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            LearningCurve(msd=np.ones(3), trials=0)

    def test_total_deviation_is_curve_sum(self):
        msd = np.array([0.5, 0.25, 0.125])
        assert total_deviation(curve_of(msd)) == pytest.approx(0.875, rel=1e-15)
