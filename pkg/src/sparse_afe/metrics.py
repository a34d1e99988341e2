"""Deviation metrics and learning-curve summaries.

The primary quantity is the per-iteration squared deviation between the true
and estimated tap vectors, ensemble-averaged over Monte Carlo trials, with a
decibel view matching how learning curves are conventionally plotted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DB_FLOOR",
    "LearningCurve",
    "msd_instant",
    "ensemble_average",
    "to_db",
    "from_db",
    "steady_state_msd",
    "convergence_iteration",
    "total_deviation",
]

# Linear floor applied before log conversion so exact zeros map to a large
# negative dB value instead of -inf.
DB_FLOOR = 1e-15


@dataclass(frozen=True, eq=False)
class LearningCurve:
    """Ensemble-averaged squared-deviation trajectory for one algorithm."""

    msd: np.ndarray
    trials: int
    algorithm_label: str = ""

    def __post_init__(self):
        msd = np.asarray(self.msd, dtype=float)
        object.__setattr__(self, "msd", msd)
        if msd.ndim != 1 or msd.shape[0] < 1:
            raise ValueError("learning curve must be a non-empty 1-D vector")
        if not np.all(msd >= 0):
            raise ValueError("squared deviations cannot be negative")
        if self.trials < 1:
            raise ValueError("a learning curve averages at least one trial")

    def __len__(self) -> int:
        return self.msd.shape[0]


def msd_instant(w_true: np.ndarray, w_hat: np.ndarray) -> float:
    """Squared deviation between true and estimated taps at one iteration."""
    w_true = np.asarray(w_true, dtype=float)
    w_hat = np.asarray(w_hat, dtype=float)
    if w_true.shape != w_hat.shape:
        raise ValueError(
            f"tap vectors must have equal shape, got {w_true.shape} and {w_hat.shape}"
        )
    diff = w_true - w_hat
    return float(diff @ diff)


def ensemble_average(
    per_trial_curves: Sequence[np.ndarray], algorithm_label: str = ""
) -> LearningCurve:
    """Pointwise mean of per-trial deviation curves, in trial-index order."""
    if len(per_trial_curves) == 0:
        raise ValueError("need at least one trial curve to average")
    stacked = np.asarray(per_trial_curves, dtype=float)
    if stacked.ndim != 2:
        raise ValueError("trial curves must be 1-D and all of equal length")
    return LearningCurve(
        msd=stacked.mean(axis=0),
        trials=stacked.shape[0],
        algorithm_label=algorithm_label,
    )


def to_db(linear):
    """10*log10 of a linear power value or array, floored at DB_FLOOR."""
    arr = np.asarray(linear, dtype=float)
    out = 10.0 * np.log10(np.maximum(arr, DB_FLOOR))
    return float(out) if arr.ndim == 0 else out


def from_db(db):
    """Inverse of :func:`to_db` above the floor: linear = 10^(db/10)."""
    arr = np.asarray(db, dtype=float)
    out = np.power(10.0, arr / 10.0)
    return float(out) if arr.ndim == 0 else out


def steady_state_msd(curve: LearningCurve, tail_fraction: float = 0.1) -> float:
    """Steady-state level in dB: mean of the curve's final tail_fraction samples."""
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    n = len(curve)
    tail = curve.msd[n - math.ceil(tail_fraction * n):]
    return to_db(float(tail.mean()))


def convergence_iteration(
    curve: LearningCurve, margin_db: float = 1.0, tail_fraction: float = 0.1
) -> int:
    """First iteration from which the curve stays within margin_db of steady state.

    Returns ``len(curve)`` as a sentinel when the band is never entered for good.
    """
    if not margin_db > 0:
        raise ValueError("margin_db must be positive")
    level = steady_state_msd(curve, tail_fraction)
    with np.errstate(invalid="ignore"):  # inf - inf on overflowed curves
        inside = np.abs(to_db(curve.msd) - level) <= margin_db
    outside = np.flatnonzero(~inside)
    if outside.size == 0:
        return 0
    k = int(outside[-1]) + 1
    return k if k < len(curve) else len(curve)


def total_deviation(curve: LearningCurve) -> float:
    """Sum of the per-iteration deviations over the whole run (a single scalar)."""
    return float(np.sum(curve.msd))
