import hashlib

import numpy as np
import pytest

from sparse_afe.algorithms import LMS, LMMN, NLMS, ZALMS, DivergenceError, initial_state, step
from sparse_afe.harness import (
    ExperimentConfig,
    draw_trial_data,
    resolve_workers,
    run_experiment,
    run_trial,
    table_presets,
)
from sparse_afe.metrics import steady_state_msd, to_db


class TestTablePresets:
    def test_sparsity_one_roster(self):
        roster = dict(table_presets(1))
        assert roster["LMS"] == LMS(mu=5e-3)
        assert roster["ZA-LMS"] == ZALMS(mu=6e-3, rho=2e-4)
        assert roster["NLMS"] == NLMS(mu=0.02, eps=1e-4)
        assert roster["LMMN"] == LMMN(
            mu=8e-3, alpha0=0.7, gamma=0.02, beta=0.3, delta=0.7, variable=True
        )

    def test_sparsity_four_roster(self):
        roster = dict(table_presets(4))
        assert roster["LMS"] == LMS(mu=4e-3)
        assert roster["ZA-LMS"] == ZALMS(mu=4e-3, rho=3e-5)
        assert roster["NLMS"] == NLMS(mu=0.015, eps=1e-4)
        assert roster["LMMN"] == LMMN(
            mu=4e-3, alpha0=0.85, gamma=0.03, beta=0.9, delta=0.95, variable=True
        )

    @pytest.mark.parametrize("m", [2, 3, 5, 16])
    def test_other_sparsities_have_no_preset(self, m):
        with pytest.raises(ValueError, match="no preset"):
            table_presets(m)


class TestExperimentConfig:
    def test_stationary_defaults(self):
        cfg = ExperimentConfig(sparsity_m=1)
        assert cfg.channel_length == 16
        assert cfg.snr_db == 30.0
        assert cfg.iterations == 1000
        assert cfg.trials == 200
        assert cfg.scenario == "stationary"
        assert cfg.change_at is None
        assert [label for label, _ in cfg.roster] == ["LMS", "ZA-LMS", "NLMS", "LMMN"]

    def test_tracking_defaults(self):
        cfg = ExperimentConfig(sparsity_m=4, scenario="tracking")
        assert cfg.iterations == 2000
        assert cfg.change_at == 1000

    def test_preset_gap_without_roster(self):
        with pytest.raises(ValueError, match="no preset"):
            ExperimentConfig(sparsity_m=3)

    def test_explicit_roster_for_other_sparsity(self):
        cfg = ExperimentConfig(sparsity_m=3, roster=(("LMS", LMS(mu=1e-3)),))
        assert cfg.roster == (("LMS", LMS(mu=1e-3)),)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(sparsity_m=17),
            dict(sparsity_m=0),
            dict(sparsity_m=1, trials=0),
            dict(sparsity_m=1, iterations=0),
            dict(sparsity_m=1, master_seed=-1),
            dict(sparsity_m=1, scenario="warp"),
            dict(sparsity_m=1, change_at=10),
            dict(sparsity_m=4, scenario="tracking", change_at=0),
            dict(sparsity_m=4, scenario="tracking", change_at=2000),
            dict(sparsity_m=1, roster=(("A", LMS(mu=1e-3)), ("A", LMS(mu=2e-3)))),
            dict(sparsity_m=1, roster=(("A", "not-a-spec"),)),
        ],
    )
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ExperimentConfig(**kwargs)


class TestTrialData:
    def test_streams_are_paired_and_deterministic(self):
        cfg = ExperimentConfig(sparsity_m=4, trials=4, iterations=256, master_seed=9)
        a = draw_trial_data(cfg, 2)
        b = draw_trial_data(cfg, 2)
        for x, y in ((a.input, b.input), (a.noise, b.noise), (a.desired, b.desired)):
            assert hashlib.sha256(x.tobytes()).hexdigest() == hashlib.sha256(y.tobytes()).hexdigest()
        assert np.array_equal(a.schedule.segments[0][1].taps, b.schedule.segments[0][1].taps)

    def test_distinct_trials_get_distinct_streams(self):
        cfg = ExperimentConfig(sparsity_m=4, trials=4, iterations=64, master_seed=9)
        a = draw_trial_data(cfg, 0)
        b = draw_trial_data(cfg, 1)
        assert not np.array_equal(a.input, b.input)
        assert not np.array_equal(a.schedule.segments[0][1].taps, b.schedule.segments[0][1].taps)

    def test_noise_variance_matches_snr(self):
        cfg = ExperimentConfig(sparsity_m=4, iterations=32, master_seed=1)
        data = draw_trial_data(cfg, 0)
        assert data.noise_variance == pytest.approx(1e-3, rel=1e-12)

    def test_tracking_data_switches_channel(self):
        cfg = ExperimentConfig(
            sparsity_m=4, scenario="tracking", iterations=400, change_at=200, master_seed=2
        )
        data = draw_trial_data(cfg, 0)
        assert len(data.schedule.segments) == 2
        spans = [(a, b) for a, b, _ in data.schedule.iter_segments(400)]
        assert spans == [(0, 200), (200, 400)]
        # desired switches channels mid-run: recompute both ways at the boundary
        ch2 = data.schedule.segments[1][1]
        expected = np.convolve(data.input, ch2.taps)[200:205] + data.noise[200:205]
        assert np.allclose(data.desired[200:205], expected, atol=1e-12)


class TestRunTrial:
    def test_determinism(self):
        cfg = ExperimentConfig(sparsity_m=4, iterations=300, master_seed=5)
        spec = dict(cfg.roster)["LMS"]
        assert np.array_equal(run_trial(cfg, spec, 3), run_trial(cfg, spec, 3))

    def test_curve_starts_at_channel_energy(self):
        cfg = ExperimentConfig(sparsity_m=1, iterations=50, master_seed=5)
        for _, spec in cfg.roster:
            msd = run_trial(cfg, spec, 0)
            assert msd[0] == pytest.approx(1.0, abs=1e-12)

    def test_noiseless_lms_converges(self):
        cfg = ExperimentConfig(
            sparsity_m=4,
            snr_db=300.0,
            iterations=2000,
            master_seed=6,
            roster=(("LMS", LMS(mu=5e-3)),),
        )
        msd = run_trial(cfg, LMS(mu=5e-3), 0)
        assert msd[-1] < 1e-6 * msd[0]

    @pytest.mark.filterwarnings("ignore:overflow", "ignore:invalid value")
    def test_divergence_reports_trial_index(self):
        cfg = ExperimentConfig(
            sparsity_m=4, iterations=400, master_seed=7, roster=(("BAD", LMS(mu=50.0)),)
        )
        with pytest.raises(DivergenceError, match="trial 3"):
            run_trial(cfg, LMS(mu=50.0), 3)

    def test_tracking_jump_equals_estimate_to_new_channel_distance(self):
        cfg = ExperimentConfig(
            sparsity_m=4,
            scenario="tracking",
            iterations=600,
            change_at=300,
            trials=1,
            master_seed=8,
            roster=(("LMS", LMS(mu=8e-3)),),
        )
        spec = dict(cfg.roster)["LMS"]
        msd = run_trial(cfg, spec, 0)
        # replay the filter to the change point to extract its state there
        data = draw_trial_data(cfg, 0)
        state = initial_state(spec, cfg.channel_length)
        for k in range(cfg.change_at):
            state, _ = step(state, data.input[k], data.desired[k], spec)
        new_taps = data.schedule.segments[1][1].taps
        expected_jump = float(np.sum((new_taps - state.weights) ** 2))
        assert msd[cfg.change_at] == pytest.approx(expected_jump, rel=1e-12)
        # converged before the change, disturbed after it, then re-decays
        assert msd[cfg.change_at] > 50 * msd[cfg.change_at - 1]
        assert msd[-1] < 0.1 * msd[cfg.change_at]


class TestRunExperiment:
    def test_single_trial_equals_run_trial(self):
        cfg = ExperimentConfig(sparsity_m=4, trials=1, iterations=150, master_seed=3)
        result = run_experiment(cfg)
        for label, spec in cfg.roster:
            assert np.array_equal(
                result.result_for(label).curve.msd, run_trial(cfg, spec, 0)
            )

    def test_every_curve_starts_at_zero_db(self):
        cfg = ExperimentConfig(sparsity_m=4, trials=6, iterations=80, master_seed=4)
        result = run_experiment(cfg)
        for algo in result.results:
            assert abs(to_db(algo.curve.msd[0])) <= 1e-9

    def test_roster_order_does_not_change_numbers(self):
        base = ExperimentConfig(sparsity_m=4, trials=5, iterations=120, master_seed=5)
        flipped = ExperimentConfig(
            sparsity_m=4, trials=5, iterations=120, master_seed=5, roster=base.roster[::-1]
        )
        ra = run_experiment(base)
        rb = run_experiment(flipped)
        assert ra.labels == tuple(rb.labels[::-1])
        for label in ra.labels:
            assert np.array_equal(ra.result_for(label).curve.msd, rb.result_for(label).curve.msd)

    @pytest.mark.filterwarnings("ignore:overflow", "ignore:invalid value")
    def test_divergence_voids_only_affected_algorithm(self):
        cfg = ExperimentConfig(
            sparsity_m=4,
            trials=4,
            iterations=400,
            master_seed=6,
            roster=(("LMS", LMS(mu=4e-3)), ("BAD", LMS(mu=50.0))),
        )
        result = run_experiment(cfg)
        good = result.result_for("LMS")
        bad = result.result_for("BAD")
        assert good.curve is not None and good.diverged_trials == 0
        assert bad.curve is None
        assert bad.diverged_trials == 4
        assert np.isnan(bad.steady_state_db)
        assert "BAD" in bad.diagnostic
        assert result.any_diverged

    def test_summaries_match_metrics(self):
        cfg = ExperimentConfig(sparsity_m=4, trials=4, iterations=200, master_seed=7)
        result = run_experiment(cfg)
        for algo in result.results:
            assert algo.steady_state_db == steady_state_msd(algo.curve)
            assert algo.trials == 4

    def test_worker_count_does_not_change_results(self):
        cfg = ExperimentConfig(sparsity_m=1, trials=10, iterations=120, master_seed=8)
        r1 = run_experiment(cfg, workers=1)
        r2 = run_experiment(cfg, workers=2)
        for a, b in zip(r1.results, r2.results):
            assert np.array_equal(a.curve.msd, b.curve.msd)

    def test_ensemble_stability_when_doubling_trials(self):
        roster = (("LMS", LMS(mu=4e-3)),)
        half = ExperimentConfig(
            sparsity_m=4, trials=60, iterations=400, master_seed=9, roster=roster
        )
        full = ExperimentConfig(
            sparsity_m=4, trials=120, iterations=400, master_seed=9, roster=roster
        )
        a = run_experiment(half).result_for("LMS").steady_state_db
        b = run_experiment(full).result_for("LMS").steady_state_db
        assert abs(a - b) < 0.5


class TestResolveWorkers:
    def test_explicit_argument_wins(self, monkeypatch):
        monkeypatch.setenv("SPARSE_AFE_THREADS", "7")
        assert resolve_workers(3) == 3

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("SPARSE_AFE_THREADS", "2")
        assert resolve_workers() == 2

    def test_zero_means_auto(self, monkeypatch):
        import os

        monkeypatch.setenv("SPARSE_AFE_THREADS", "0")
        assert resolve_workers() == (os.cpu_count() or 1)

    def test_unset_means_auto(self, monkeypatch):
        import os

        monkeypatch.delenv("SPARSE_AFE_THREADS", raising=False)
        assert resolve_workers() == (os.cpu_count() or 1)

    def test_invalid_values_rejected(self, monkeypatch):
        monkeypatch.setenv("SPARSE_AFE_THREADS", "lots")
        with pytest.raises(ValueError):
            resolve_workers()
        with pytest.raises(ValueError):
            resolve_workers(-1)
