"""Per-sample weight updates for the four gradient-family adaptive filters.

All four algorithms share one uniform driver, :func:`step`: push the newest
input sample into the regressor window, form the a-priori error
``e(k) = d(k) - w(k).x(k)``, and apply the variant's weight recursion.

States are values: every operation returns a new :class:`FilterState`, so a
trajectory can be replayed exactly from any snapshot and trials can run in
parallel without shared mutable state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

__all__ = [
    "LMS",
    "ZALMS",
    "NLMS",
    "LMMN",
    "AlgorithmSpec",
    "FilterState",
    "DivergenceError",
    "initial_state",
    "push_regressor",
    "predict_and_error",
    "lms_step",
    "zalms_step",
    "nlms_step",
    "lmmn_step",
    "update_mixing_parameter",
    "step",
]


class DivergenceError(RuntimeError):
    """Weights or error stopped being finite; the step size is too large."""


@dataclass(frozen=True)
class LMS:
    """Least mean squares: w <- w + mu * e * x."""

    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("LMS step size mu must be positive")


@dataclass(frozen=True)
class ZALMS:
    """Zero-attracting LMS: LMS plus a sparsity penalty -rho * sign(w).

    ``sign(0)`` is taken as 0, so exactly-zero taps are never perturbed by the
    attractor. Weights with magnitude below ``rho`` may overshoot through zero;
    this is inherent to the fixed-shrinkage update and is not prevented.
    """

    mu: float
    rho: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("ZA-LMS step size mu must be positive")
        if not self.rho >= 0:
            raise ValueError("ZA-LMS attractor strength rho must be non-negative")


@dataclass(frozen=True)
class NLMS:
    """Normalized LMS: w <- w + mu * e * x / (eps + x.x)."""

    mu: float
    eps: float = 1e-4

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("NLMS step size mu must be positive")
        if not self.eps > 0:
            raise ValueError("NLMS regularizer eps must be positive")


@dataclass(frozen=True)
class LMMN:
    """Mixed-norm LMS-LMF: w <- w + mu * (alpha*e + 2*(1-alpha)*e^3) * x.

    ``alpha`` blends the squared-error and fourth-power-error costs: alpha = 1
    is plain LMS, alpha = 0 is pure LMF. With ``variable=True`` the mix adapts
    each step from the smoothed product of successive errors p:

        p     <- beta * p + (1 - beta) * e_new * e_prev
        alpha <- clip(delta * alpha + gamma * p^2, 0, 1)

    ``gamma = 0, delta = 1`` freezes alpha, recovering the fixed-mix filter.
    The update gain absorbs a global factor 2: it equals -(mu/2) times the
    gradient of alpha*e^2 + (1-alpha)*e^4, the same convention that makes
    alpha = 1 coincide with LMS at the same mu.
    """

    mu: float
    alpha0: float
    gamma: float = 0.0
    beta: float = 0.0
    delta: float = 1.0
    variable: bool = False

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("LMMN step size mu must be positive")
        if not 0 <= self.alpha0 <= 1:
            raise ValueError("LMMN initial mix alpha0 must lie in [0, 1]")
        if not self.gamma >= 0:
            raise ValueError("LMMN gain gamma must be non-negative")
        if not 0 <= self.beta <= 1:
            raise ValueError("LMMN smoothing beta must lie in [0, 1]")
        if not 0 <= self.delta <= 1:
            raise ValueError("LMMN decay delta must lie in [0, 1]")


AlgorithmSpec = Union[LMS, ZALMS, NLMS, LMMN]


@dataclass(frozen=True, eq=False)
class FilterState:
    """Snapshot of an adaptive filter between samples.

    Attributes:
        weights: current estimate of the channel taps.
        regressor: sliding input window, newest sample at index 0.
        alpha: current mixing parameter (meaningful for LMMN, inert otherwise).
        p: smoothed product of successive errors driving the mixing update.
        prev_error: last a-priori error, the e(k) paired with the next e(k+1).
        iteration: number of samples consumed.
    """

    weights: np.ndarray
    regressor: np.ndarray
    alpha: float = 1.0
    p: float = 0.0
    prev_error: float = 0.0
    iteration: int = 0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        x = np.asarray(self.regressor, dtype=float)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "regressor", x)
        if w.shape != x.shape or w.ndim != 1:
            raise ValueError("weights and regressor must be 1-D and equal length")
        if not 0 <= self.alpha <= 1:
            raise ValueError("mixing parameter alpha must lie in [0, 1]")


def initial_state(spec: AlgorithmSpec, num_taps: int) -> FilterState:
    """Fresh state: zero weights, zero regressor, alpha at its starting value."""
    num_taps = int(num_taps)
    if num_taps < 1:
        raise ValueError("need at least one filter tap")
    alpha = spec.alpha0 if isinstance(spec, LMMN) else 1.0
    return FilterState(
        weights=np.zeros(num_taps),
        regressor=np.zeros(num_taps),
        alpha=float(alpha),
    )


def push_regressor(state: FilterState, x_new: float) -> FilterState:
    """Shift the regressor window by one sample; newest at index 0."""
    return replace(state, regressor=_shifted(state.regressor, x_new))


def predict_and_error(state: FilterState, d: float) -> float:
    """A-priori error e = d - w.x for the current state; no mutation."""
    return float(d - state.weights @ state.regressor)


def lms_step(state: FilterState, e: float, spec: LMS) -> FilterState:
    """Apply the LMS weight recursion for one error sample."""
    w = _lms_weights(state.weights, state.regressor, e, spec.mu)
    _check_finite(e, w)
    return replace(state, weights=w)


def zalms_step(state: FilterState, e: float, spec: ZALMS) -> FilterState:
    """Apply the zero-attracting LMS recursion for one error sample."""
    w = _zalms_weights(state.weights, state.regressor, e, spec.mu, spec.rho)
    _check_finite(e, w)
    return replace(state, weights=w)


def nlms_step(state: FilterState, e: float, spec: NLMS) -> FilterState:
    """Apply the normalized LMS recursion for one error sample."""
    w = _nlms_weights(state.weights, state.regressor, e, spec.mu, spec.eps)
    _check_finite(e, w)
    return replace(state, weights=w)


def lmmn_step(state: FilterState, e: float, spec: LMMN) -> FilterState:
    """Apply the mixed-norm recursion using the state's current alpha."""
    w = _lmmn_weights(state.weights, state.regressor, e, spec.mu, state.alpha)
    _check_finite(e, w)
    return replace(state, weights=w)


def update_mixing_parameter(
    state: FilterState, e_new: float, e_prev: float, spec: LMMN
) -> FilterState:
    """Advance the error-correlation estimate p, then the mix alpha.

    Both use the freshly updated p; alpha is clamped to [0, 1] afterwards
    because the recursion itself can exceed 1 for large gamma * p^2.
    """
    if not isinstance(spec, LMMN):
        raise TypeError("mixing update only applies to LMMN specs")
    p, alpha = _mixing(state.p, state.alpha, e_new, e_prev, spec)
    return replace(state, p=p, alpha=alpha)


def step(
    state: FilterState, x_new: float, d: float, spec: AlgorithmSpec
) -> tuple[FilterState, float]:
    """One full sample of any variant: push, error, update, bookkeeping.

    Equivalent to push_regressor -> predict_and_error -> the variant's step
    (plus the mixing update for time-varying LMMN), with the iteration counter
    advanced and the a-priori error stored for the next mixing update.

    Returns:
        The advanced state and the a-priori error e(k).

    Raises:
        DivergenceError: when the error or any weight stops being finite.
    """
    reg = _shifted(state.regressor, x_new)
    e = float(d - state.weights @ reg)
    alpha = state.alpha
    p = state.p
    prev_error = state.prev_error
    if isinstance(spec, LMS):
        w = _lms_weights(state.weights, reg, e, spec.mu)
    elif isinstance(spec, ZALMS):
        w = _zalms_weights(state.weights, reg, e, spec.mu, spec.rho)
    elif isinstance(spec, NLMS):
        w = _nlms_weights(state.weights, reg, e, spec.mu, spec.eps)
    elif isinstance(spec, LMMN):
        w = _lmmn_weights(state.weights, reg, e, spec.mu, alpha)
        if spec.variable:
            p, alpha = _mixing(p, alpha, e, prev_error, spec)
        prev_error = e
    else:
        raise TypeError(f"unknown algorithm spec: {spec!r}")
    _check_finite(e, w)
    return (
        FilterState(
            weights=w,
            regressor=reg,
            alpha=alpha,
            p=p,
            prev_error=prev_error,
            iteration=state.iteration + 1,
        ),
        e,
    )


def _shifted(regressor: np.ndarray, x_new: float) -> np.ndarray:
    out = np.empty_like(regressor)
    out[1:] = regressor[:-1]
    out[0] = x_new
    return out


def _lms_weights(w, reg, e, mu):
    return w + (mu * e) * reg


def _zalms_weights(w, reg, e, mu, rho):
    return w + (mu * e) * reg - rho * np.sign(w)


def _nlms_weights(w, reg, e, mu, eps):
    return w + (mu * e / (eps + float(reg @ reg))) * reg


def _lmmn_weights(w, reg, e, mu, alpha):
    gain = mu * (alpha * e + 2.0 * (1.0 - alpha) * e**3)
    return w + gain * reg


def _mixing(p, alpha, e_new, e_prev, spec: LMMN):
    p = spec.beta * p + (1.0 - spec.beta) * e_new * e_prev
    alpha = spec.delta * alpha + spec.gamma * p * p
    return p, min(1.0, max(0.0, alpha))


def _check_finite(e: float, weights: np.ndarray) -> None:
    if not (math.isfinite(e) and np.isfinite(weights).all()):
        raise DivergenceError(
            "non-finite filter state: reduce the step size or rescale the input"
        )
