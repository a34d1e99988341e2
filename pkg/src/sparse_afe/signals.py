"""Sparse FIR channels, excitation and noise streams, and the batch convolution oracle.

All generation is pure given an explicit ``numpy.random.Generator``. Monte Carlo
trials derive independent generators with :func:`trial_rng`, so trial results do
not depend on execution order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

__all__ = [
    "ChannelModel",
    "SampleStream",
    "ChannelSchedule",
    "generate_sparse_channel",
    "generate_input_sequence",
    "noise_variance_for_snr",
    "synthesize_desired",
    "build_convolution_matrix",
    "make_tracking_schedule",
    "trial_rng",
]

TapsLike = Union["ChannelModel", np.ndarray, Sequence[float]]


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """A sparse FIR impulse response: the ground-truth tap vector to estimate.

    Attributes:
        taps: Real tap gains, length equal to the channel length. Taps outside
            ``support`` are exactly zero.
        support: Sorted indices of the nonzero taps.
        sparsity_m: Number of nonzero taps, ``len(support)``.
    """

    taps: np.ndarray
    support: np.ndarray
    sparsity_m: int

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=float)
        support = np.asarray(self.support, dtype=int)
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "support", support)
        if taps.ndim != 1:
            raise ValueError("channel taps must be a 1-D vector")
        m = int(self.sparsity_m)
        if not 1 <= m <= taps.shape[0]:
            raise ValueError(
                f"invalid sparsity: need 1 <= m <= channel length, "
                f"got m={m} for length {taps.shape[0]}"
            )
        if support.shape != (m,) or len(np.unique(support)) != m:
            raise ValueError("support must hold sparsity_m distinct indices")
        if support.min() < 0 or support.max() >= taps.shape[0]:
            raise ValueError("support indices out of range")
        off = np.ones(taps.shape[0], dtype=bool)
        off[support] = False
        if np.any(taps[off] != 0.0):
            raise ValueError("taps outside the support must be exactly zero")

    @property
    def length(self) -> int:
        return self.taps.shape[0]

    @property
    def energy(self) -> float:
        """Total tap energy, sum of squared gains."""
        return float(np.sum(self.taps**2))


@dataclass(frozen=True, eq=False)
class SampleStream:
    """Excitation, additive noise, and the resulting desired signal of one trial."""

    input: np.ndarray
    noise: np.ndarray
    desired: np.ndarray
    noise_variance: float

    def __post_init__(self):
        n = self.input.shape[0]
        if self.noise.shape[0] != n or self.desired.shape[0] != n:
            raise ValueError("input, noise and desired must have equal length")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be non-negative")

    def __len__(self) -> int:
        return self.input.shape[0]


@dataclass(frozen=True, eq=False)
class ChannelSchedule:
    """Piecewise-constant true channel: ordered (start_iteration, channel) segments."""

    segments: tuple

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("schedule needs at least one segment")
        starts = [int(start) for start, _ in segs]
        if starts[0] != 0:
            raise ValueError("first segment must start at iteration 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ValueError("segment start iterations must be strictly increasing")

    def active_channel(self, iteration: int) -> ChannelModel:
        """The channel in effect at a given iteration."""
        current = self.segments[0][1]
        for start, channel in self.segments:
            if iteration < start:
                break
            current = channel
        return current

    def iter_segments(self, total_iterations: int) -> Iterator[tuple]:
        """Yield (start, stop, channel) spans covering [0, total_iterations)."""
        starts = [start for start, _ in self.segments] + [total_iterations]
        for (start, channel), stop in zip(self.segments, starts[1:]):
            if start >= total_iterations:
                return
            yield start, min(stop, total_iterations), channel


def _taps_of(channel: TapsLike) -> np.ndarray:
    if isinstance(channel, ChannelModel):
        return channel.taps
    return np.asarray(channel, dtype=float)


def generate_sparse_channel(
    length: int,
    m: int,
    rng: np.random.Generator,
    unit_energy: bool = True,
) -> ChannelModel:
    """Draw a random sparse channel with exactly ``m`` nonzero taps.

    Support positions are drawn uniformly without replacement; nonzero gains are
    standard Gaussian. With ``unit_energy`` (default) the tap vector is scaled to
    total energy 1 so learning curves start at 0 dB and the SNR is well defined.

    Raises:
        ValueError: if ``m`` is outside ``[1, length]``.
    """
    length = int(length)
    m = int(m)
    if not 1 <= m <= length:
        raise ValueError(
            f"invalid sparsity: need 1 <= m <= channel length, got m={m} for length {length}"
        )
    support = np.sort(rng.choice(length, size=m, replace=False))
    values = rng.standard_normal(m)
    taps = np.zeros(length)
    taps[support] = values
    if unit_energy:
        taps = taps / math.sqrt(float(np.sum(taps**2)))
    return ChannelModel(taps=taps, support=support, sparsity_m=m)


def generate_input_sequence(n: int, rng: np.random.Generator) -> np.ndarray:
    """I.i.d. zero-mean unit-variance Gaussian excitation of length ``n`` (>= 1)."""
    n = int(n)
    if n < 1:
        raise ValueError("empty stream: need at least one input sample")
    return rng.standard_normal(n)


def noise_variance_for_snr(
    channel: TapsLike, snr_db: float, input_variance: float = 1.0
) -> float:
    """Noise variance realizing a target SNR for a given channel and input power.

    The received signal power is ``channel energy * input_variance``, so
    ``sigma_v^2 = energy * input_variance / 10^(snr_db / 10)``.
    """
    if not input_variance > 0:
        raise ValueError("input variance must be positive")
    energy = float(np.sum(_taps_of(channel) ** 2))
    return energy * input_variance / 10.0 ** (snr_db / 10.0)


def synthesize_desired(
    channel: TapsLike,
    input: np.ndarray,
    noise: np.ndarray,
    noise_variance: float | None = None,
) -> SampleStream:
    """Run the input through the channel and add noise: d(k) = w.x(k) + v(k).

    The regressor window is zero-padded before k = 0 (cold start), matching the
    zero initial filter state downstream.

    Args:
        channel: ChannelModel or raw tap vector.
        input: excitation samples.
        noise: additive noise samples, same length as ``input``.
        noise_variance: recorded variance; defaults to the empirical mean square
            of ``noise``.
    """
    taps = _taps_of(channel)
    x = np.asarray(input, dtype=float)
    v = np.asarray(noise, dtype=float)
    if x.shape != v.shape or x.ndim != 1:
        raise ValueError(
            f"input and noise must be 1-D and equal length, got {x.shape} and {v.shape}"
        )
    if x.shape[0] < 1:
        raise ValueError("empty stream: need at least one input sample")
    desired = np.convolve(x, taps)[: x.shape[0]] + v
    if noise_variance is None:
        noise_variance = float(np.mean(v**2))
    return SampleStream(input=x, noise=v, desired=desired, noise_variance=noise_variance)


def build_convolution_matrix(input: np.ndarray, channel_length: int) -> np.ndarray:
    """Toeplitz matrix A with row k = [x(k), x(k-1), ..., x(k-M+1)], zero-padded.

    ``A @ taps + noise`` reproduces :func:`synthesize_desired`; kept as an
    independent batch oracle for the streaming path.
    """
    x = np.asarray(input, dtype=float)
    n = x.shape[0]
    m = int(channel_length)
    if x.ndim != 1 or n < 1:
        raise ValueError("input must be a non-empty 1-D vector")
    if m < 1:
        raise ValueError("channel length must be at least 1")
    matrix = np.zeros((n, m))
    for j in range(min(m, n)):
        matrix[j:, j] = x[: n - j]
    return matrix


def make_tracking_schedule(
    length: int,
    m: int,
    total_iterations: int,
    change_at: int,
    rng: np.random.Generator,
    unit_energy: bool = True,
) -> ChannelSchedule:
    """Two-segment schedule: an abrupt independent channel re-draw at ``change_at``."""
    total_iterations = int(total_iterations)
    change_at = int(change_at)
    if not 0 < change_at < total_iterations:
        raise ValueError(
            f"invalid schedule: change_at must lie in (0, {total_iterations}), got {change_at}"
        )
    first = generate_sparse_channel(length, m, rng, unit_energy=unit_energy)
    second = generate_sparse_channel(length, m, rng, unit_energy=unit_energy)
    return ChannelSchedule(segments=((0, first), (change_at, second)))


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Deterministic per-trial generator, independent of trial execution order.

    Trial ``t`` uses ``SeedSequence(master_seed, spawn_key=(t,))``, a counter-keyed
    split of the master seed: the same (master_seed, trial_index) always yields the
    same stream, and distinct trials get statistically independent streams.
    """
    master_seed = int(master_seed)
    trial_index = int(trial_index)
    if master_seed < 0 or trial_index < 0:
        raise ValueError("master_seed and trial_index must be non-negative")
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(trial_index,))
    )
