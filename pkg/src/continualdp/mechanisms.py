"""Streaming release mechanisms: factorization counter and running mean,
the multi-channel histogram built from independent counters, and the
dyadic-tree baseline.

Every mechanism declares its horizon up front (the horizon-mode sigma and
the reporting bounds need it), consumes one input per step, and returns the
released statistic for that step.  Channel c of a multi-channel mechanism
draws from stream offsets c*(T+1)+1 .. c*(T+1)+T, so channels never share
noise and a single channel is bit-identical to a scalar counter run with the
same seed and channel index.
"""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .factors import averaging_factor, counting_factor
from .privacy import NoisePlan, noise_scale, sample_noise

__all__ = [
    "AverageState",
    "BinaryTreeState",
    "CounterState",
    "HistogramState",
]


class CounterState:
    """Factorization mechanism for prefix sums.

    Keeps the noisy transformed prefix y_i = (Rx)_i + sigma*g_i and releases
    a_t = sum_{i<=t} f(t-i) * y_i, an O(t) dot per step.  In per-step mode y
    holds the noiseless (Rx)_i and a fresh noise vector is drawn each step.
    """

    def __init__(self, plan: NoisePlan, *, channel: int = 0, allow_real: bool = False, allow_signed: bool = False):
        self.plan = plan
        self.t = 0
        self.true_sum = 0.0
        T = plan.horizon
        self._factor = counting_factor(T)
        self._horizon_norm = self._factor.prefix_norm(T)
        self._offset = channel * (T + 1)
        self._allow_real = allow_real
        self._allow_signed = allow_signed
        self._x = np.zeros(T)
        self._y = np.zeros(T)

    def _validate(self, x: float) -> None:
        if self._allow_signed:
            if x not in (-1, 0, 1):
                raise ValueError(f"signed counter input must be -1, 0, or 1, got {x}")
        elif self._allow_real:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"real counter input must lie in [0, 1], got {x}")
        elif x not in (0, 1):
            raise ValueError(f"counter input must be 0 or 1, got {x}; construct with allow_real for [0, 1]")

    def step(self, x: float) -> float:
        """Ingest x_t and release the noisy prefix sum a_t."""
        if self.t >= self.plan.horizon:
            raise ValueError(f"horizon {self.plan.horizon} exhausted")
        self._validate(x)
        self.t = t = self.t + 1
        self.true_sum += x
        self._x[t - 1] = x
        row = self._factor.row(t)
        rx = float(row @ self._x[:t])
        sigma = noise_scale(self.plan, t, self._factor.prefix_norm(t), self._horizon_norm)
        if self.plan.mode == "per-step":
            self._y[t - 1] = rx
            released = float(row @ self._y[:t])
            if sigma > 0.0:
                released += sigma * float(row @ sample_noise(self.plan, t, self._offset + t))
            return released
        noise = sigma * sample_noise(self.plan, 1, self._offset + t)[0] if sigma > 0.0 else 0.0
        self._y[t - 1] = rx + noise
        return float(row @ self._y[:t])

    @property
    def true_value(self) -> float:
        return self.true_sum


class AverageState:
    """Factorization mechanism for running means.

    Same shape as the counter, with the square-root factor of the mean
    workload on both sides and per-step sensitivity 1/t.
    """

    def __init__(self, plan: NoisePlan, *, allow_real: bool = False):
        self.plan = replace(plan, divide_by_t=True)
        self.t = 0
        self.true_sum = 0.0
        T = plan.horizon
        self._factor = averaging_factor(T)
        self._horizon_norm = self._factor.prefix_norms(T)[1]
        self._allow_real = allow_real
        self._x = np.zeros(T)
        self._y = np.zeros(T)

    def step(self, x: float) -> float:
        """Ingest x_t and release the noisy running mean."""
        if self.t >= self.plan.horizon:
            raise ValueError(f"horizon {self.plan.horizon} exhausted")
        if self._allow_real:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"real input must lie in [0, 1], got {x}")
        elif x not in (0, 1):
            raise ValueError(f"input must be 0 or 1, got {x}; construct with allow_real for [0, 1]")
        self.t = t = self.t + 1
        self.true_sum += x
        self._x[t - 1] = x
        row = self._factor.row(t)
        rx = float(row @ self._x[:t])
        sigma = noise_scale(self.plan, t, self._factor.prefix_norms(t)[1], self._horizon_norm)
        if self.plan.mode == "per-step":
            self._y[t - 1] = rx
            released = float(row @ self._y[:t])
            if sigma > 0.0:
                released += sigma * float(row @ sample_noise(self.plan, t, t))
            return released
        noise = sigma * sample_noise(self.plan, 1, t)[0] if sigma > 0.0 else 0.0
        self._y[t - 1] = rx + noise
        return float(row @ self._y[:t])

    @property
    def true_value(self) -> float:
        return self.true_sum / self.t if self.t else 0.0


class HistogramState:
    """Continual histogram: one independent counter channel per universe item.

    Each step updates one coordinate by +1 (insert) or -1 (delete) and
    advances every channel's clock; deletions that would push a true count
    negative are rejected.
    """

    def __init__(self, plan: NoisePlan, universe_size: int):
        if universe_size < 1:
            raise ValueError(f"universe size must be >= 1, got {universe_size}")
        self.plan = plan
        self.universe_size = universe_size
        self.t = 0
        self.true_counts = np.zeros(universe_size)
        self._channels = [CounterState(plan, channel=j, allow_signed=True) for j in range(universe_size)]

    def step(self, coord: int, sign: int = 1) -> np.ndarray:
        """Apply a +-1 update at ``coord`` and release all u noisy counts."""
        if not 0 <= coord < self.universe_size:
            raise ValueError(f"coordinate {coord} outside universe of size {self.universe_size}")
        if sign not in (-1, 1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        if self.true_counts[coord] + sign < 0:
            raise ValueError(f"deletion at coordinate {coord} would make its true count negative")
        self.t += 1
        self.true_counts[coord] += sign
        return np.array([ch.step(sign if j == coord else 0) for j, ch in enumerate(self._channels)])

    @property
    def true_value(self) -> np.ndarray:
        return self.true_counts


_TREE_OFFSET_BASE = 1 << 32


class BinaryTreeState:
    """Dyadic-interval baseline: noisy node per power-of-two block.

    Node noise has sigma = C * sqrt(H) with H = ceil(log2 T) + 1 so the whole
    tree meets the same (epsilon, delta) target as the factorization
    mechanisms; a release sums the popcount(t) nodes covering [1, t], so its
    variance is popcount(t) * sigma^2.  Node noise is materialized lazily at
    offsets disjoint from any factorization channel.
    """

    def __init__(self, plan: NoisePlan, *, allow_real: bool = False):
        self.plan = plan
        self.t = 0
        T = plan.horizon
        self.height = max(1, math.ceil(math.log2(T)) + 1) if T > 1 else 1
        self._sigma = 0.0 if plan.dry_run else plan.constant * plan.sensitivity * math.sqrt(self.height)
        self._allow_real = allow_real
        self._prefix = np.zeros(T + 1)
        self._node_noise: dict[tuple[int, int], float] = {}

    def _noise(self, level: int, idx: int) -> float:
        if self._sigma == 0.0:
            return 0.0
        node = (level, idx)
        if node not in self._node_noise:
            offset = _TREE_OFFSET_BASE + level * (self.plan.horizon + 1) + idx
            self._node_noise[node] = self._sigma * sample_noise(self.plan, 1, offset)[0]
        return self._node_noise[node]

    def step(self, x: float) -> float:
        """Ingest x_t and release the prefix sum from the covering dyadic nodes."""
        if self.t >= self.plan.horizon:
            raise ValueError(f"horizon {self.plan.horizon} exhausted")
        if self._allow_real:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"real input must lie in [0, 1], got {x}")
        elif x not in (0, 1):
            raise ValueError(f"input must be 0 or 1, got {x}")
        self.t = t = self.t + 1
        self._prefix[t] = self._prefix[t - 1] + x
        released = 0.0
        for level in range(t.bit_length()):
            if t >> level & 1:
                end = (t >> level) << level
                released += self._prefix[end] - self._prefix[end - (1 << level)]
                released += self._noise(level, (t >> level) - 1)
        return released

    @property
    def true_value(self) -> float:
        return float(self._prefix[self.t])
