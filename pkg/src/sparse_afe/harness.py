"""Seeded Monte Carlo experiments over algorithm rosters and channel scenarios.

Every algorithm in an experiment consumes bit-identical per-trial channels,
inputs, and noise (a paired-comparison design that removes most Monte Carlo
variance from between-algorithm gaps). Trials are independent tasks reduced by
trial index, so results do not depend on scheduling or worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algorithms import LMS, LMMN, NLMS, ZALMS, AlgorithmSpec, DivergenceError, initial_state, step
from .metrics import LearningCurve, convergence_iteration, ensemble_average, msd_instant, steady_state_msd
from .signals import (
    ChannelSchedule,
    generate_input_sequence,
    generate_sparse_channel,
    make_tracking_schedule,
    noise_variance_for_snr,
    synthesize_desired,
    trial_rng,
)

__all__ = [
    "STATIONARY",
    "TRACKING",
    "ExperimentConfig",
    "TrialData",
    "AlgorithmResult",
    "ExperimentResult",
    "table_presets",
    "draw_trial_data",
    "run_trial",
    "run_experiment",
    "resolve_workers",
]

STATIONARY = "stationary"
TRACKING = "tracking"

THREADS_ENV_VAR = "SPARSE_AFE_THREADS"

# Parallel workers only pay off once there is enough per-algorithm work.
_MIN_TRIALS_FOR_POOL = 8


def table_presets(sparsity_m: int) -> tuple:
    """Bundled algorithm rosters tuned for 16-tap channels at 30 dB SNR.

    Rosters exist for sparsity levels 1 and 4; any other level requires
    explicit algorithm specs from the caller.
    """
    if sparsity_m == 1:
        return (
            ("LMS", LMS(mu=5e-3)),
            ("ZA-LMS", ZALMS(mu=6e-3, rho=2e-4)),
            ("NLMS", NLMS(mu=0.02)),
            ("LMMN", LMMN(mu=8e-3, alpha0=0.7, gamma=0.02, beta=0.3, delta=0.7, variable=True)),
        )
    if sparsity_m == 4:
        return (
            ("LMS", LMS(mu=4e-3)),
            ("ZA-LMS", ZALMS(mu=4e-3, rho=3e-5)),
            ("NLMS", NLMS(mu=0.015)),
            ("LMMN", LMMN(mu=4e-3, alpha0=0.85, gamma=0.03, beta=0.9, delta=0.95, variable=True)),
        )
    raise ValueError(
        f"no preset roster for sparsity level {sparsity_m}; supply explicit algorithm specs"
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one ensemble experiment.

    ``iterations`` defaults to 1000 for the stationary scenario and 2000 for
    tracking; a tracking run re-draws the channel at ``change_at`` (midpoint by
    default). With no explicit ``roster`` the preset for ``sparsity_m`` is used.
    """

    sparsity_m: int
    channel_length: int = 16
    snr_db: float = 30.0
    iterations: Optional[int] = None
    trials: int = 200
    master_seed: int = 0
    scenario: str = STATIONARY
    change_at: Optional[int] = None
    roster: Optional[tuple] = None

    def __post_init__(self):
        if self.scenario not in (STATIONARY, TRACKING):
            raise ValueError(f"unknown scenario: {self.scenario!r}")
        iterations = self.iterations
        if iterations is None:
            iterations = 2000 if self.scenario == TRACKING else 1000
        object.__setattr__(self, "iterations", int(iterations))
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if not 1 <= self.sparsity_m <= self.channel_length:
            raise ValueError(
                f"sparsity level must lie in [1, {self.channel_length}], got {self.sparsity_m}"
            )
        if self.scenario == TRACKING:
            change_at = self.change_at
            if change_at is None:
                change_at = self.iterations // 2
            object.__setattr__(self, "change_at", int(change_at))
            if not 0 < self.change_at < self.iterations:
                raise ValueError(
                    f"change_at must lie in (0, {self.iterations}), got {self.change_at}"
                )
        elif self.change_at is not None:
            raise ValueError("change_at only applies to the tracking scenario")
        roster = self.roster
        if roster is None:
            roster = table_presets(self.sparsity_m)
        roster = tuple((str(label), spec) for label, spec in roster)
        object.__setattr__(self, "roster", roster)
        if not roster:
            raise ValueError("roster must contain at least one algorithm")
        labels = [label for label, _ in roster]
        if len(set(labels)) != len(labels):
            raise ValueError("algorithm labels must be unique")
        for label, spec in roster:
            if not isinstance(spec, (LMS, ZALMS, NLMS, LMMN)):
                raise ValueError(f"roster entry {label!r} is not an algorithm spec")


@dataclass(frozen=True, eq=False)
class TrialData:
    """The random draws one trial feeds to every algorithm in the roster."""

    schedule: ChannelSchedule
    input: np.ndarray
    noise: np.ndarray
    desired: np.ndarray
    noise_variance: float


@dataclass(frozen=True, eq=False)
class AlgorithmResult:
    """Ensemble curve and summary statistics for one roster entry.

    ``curve`` is None and the summary fields are NaN when any trial diverged;
    ``diagnostic`` then carries the first failure message.
    """

    label: str
    curve: Optional[LearningCurve]
    steady_state_db: float
    convergence_iteration: int
    trials: int
    diverged_trials: int
    diagnostic: Optional[str] = None


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """Per-algorithm outcomes in roster order plus the resolved configuration."""

    config: ExperimentConfig
    results: tuple

    @property
    def labels(self) -> tuple:
        return tuple(r.label for r in self.results)

    def result_for(self, label: str) -> AlgorithmResult:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(f"no algorithm labelled {label!r} in this experiment")

    @property
    def any_diverged(self) -> bool:
        return any(r.diverged_trials > 0 for r in self.results)


def draw_trial_data(config: ExperimentConfig, trial_index: int) -> TrialData:
    """Draw the channel (or schedule), input, and noise for one trial.

    The draw order is fixed (channels, then input, then noise) and depends only
    on (master_seed, trial_index), so every algorithm sees identical data.
    """
    rng = trial_rng(config.master_seed, trial_index)
    n = config.iterations
    if config.scenario == TRACKING:
        schedule = make_tracking_schedule(
            config.channel_length, config.sparsity_m, n, config.change_at, rng
        )
    else:
        channel = generate_sparse_channel(config.channel_length, config.sparsity_m, rng)
        schedule = ChannelSchedule(segments=((0, channel),))
    x = generate_input_sequence(n, rng)
    sigma_v2 = noise_variance_for_snr(schedule.segments[0][1], config.snr_db, 1.0)
    noise = np.sqrt(sigma_v2) * rng.standard_normal(n)
    desired = np.empty(n)
    for start, stop, channel in schedule.iter_segments(n):
        stream = synthesize_desired(channel, x, noise, noise_variance=sigma_v2)
        desired[start:stop] = stream.desired[start:stop]
    return TrialData(
        schedule=schedule, input=x, noise=noise, desired=desired, noise_variance=sigma_v2
    )


def run_trial(config: ExperimentConfig, spec: AlgorithmSpec, trial_index: int) -> np.ndarray:
    """Run one algorithm over one trial; returns the per-iteration deviation curve.

    The deviation is recorded against the currently active true channel before
    each update, so curves start at exactly the channel energy (0 dB for
    unit-energy channels) with the zero initial state.

    Raises:
        DivergenceError: with the trial index attached, when the filter blows up.
    """
    data = draw_trial_data(config, trial_index)
    state = initial_state(spec, config.channel_length)
    x = data.input
    d = data.desired
    msd = np.empty(config.iterations)
    try:
        for start, stop, channel in data.schedule.iter_segments(config.iterations):
            taps = channel.taps
            for k in range(start, stop):
                msd[k] = msd_instant(taps, state.weights)
                state, _ = step(state, x[k], d[k], spec)
    except DivergenceError as exc:
        raise DivergenceError(f"trial {trial_index}: {exc}") from exc
    return msd


def _trial_outcome(config: ExperimentConfig, spec: AlgorithmSpec, trial_index: int):
    try:
        return trial_index, run_trial(config, spec, trial_index), None
    except DivergenceError as exc:
        return trial_index, None, str(exc)


def _trial_outcome_star(args):
    return _trial_outcome(*args)


def resolve_workers(workers: Optional[int] = None) -> int:
    """Number of parallel workers: explicit argument, else the environment cap.

    ``SPARSE_AFE_THREADS`` caps harness parallelism; 0 or unset means automatic
    (one worker per CPU). Results are identical for any worker count.
    """
    if workers is None:
        raw = os.environ.get(THREADS_ENV_VAR, "0")
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    workers = int(workers)
    if workers < 0:
        raise ValueError("worker count cannot be negative")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentResult:
    """Run all trials for every roster entry and ensemble-average the curves.

    Trials may execute in a process pool; curves are reduced strictly by trial
    index, so the result is a pure function of (config, master_seed). A diverged
    trial voids that algorithm's curve and summaries (NaN) without stopping the
    other algorithms; ``diverged_trials`` counts the failures.
    """
    workers = resolve_workers(workers)
    pool = None
    if workers > 1 and config.trials >= _MIN_TRIALS_FOR_POOL:
        pool = ProcessPoolExecutor(max_workers=min(workers, config.trials))
    try:
        results = []
        for label, spec in config.roster:
            tasks = [(config, spec, t) for t in range(config.trials)]
            if pool is not None:
                chunk = max(1, config.trials // (4 * workers))
                outcomes = list(pool.map(_trial_outcome_star, tasks, chunksize=chunk))
            else:
                outcomes = [_trial_outcome(*task) for task in tasks]
            curves = [None] * config.trials
            failures = []
            for trial_index, curve, message in outcomes:
                if message is None:
                    curves[trial_index] = curve
                else:
                    failures.append(message)
            if failures:
                results.append(
                    AlgorithmResult(
                        label=label,
                        curve=None,
                        steady_state_db=float("nan"),
                        convergence_iteration=config.iterations,
                        trials=config.trials,
                        diverged_trials=len(failures),
                        diagnostic=f"{label}: {failures[0]}",
                    )
                )
                continue
            curve = ensemble_average(curves, algorithm_label=label)
            results.append(
                AlgorithmResult(
                    label=label,
                    curve=curve,
                    steady_state_db=steady_state_msd(curve),
                    convergence_iteration=convergence_iteration(curve),
                    trials=config.trials,
                    diverged_trials=0,
                )
            )
    finally:
        if pool is not None:
            pool.shutdown()
    return ExperimentResult(config=config, results=tuple(results))
