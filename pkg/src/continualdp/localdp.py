"""Non-interactive local estimation of a one-dimensional risk curve.

Each client holds one value in [0, 1].  The value is bucketed on a shared
grid of w = ceil(eps sqrt(n)) equal intervals and sent as two noisy
prefix-sum vectors (a forward one-hot and its reversal), each released by
the horizon-mode factorization counter at budget (eps/2, delta/2), so a
message spends (eps, delta) total.  The server averages the messages into
a step function that estimates, at each breakpoint, the mass below minus
the mass above; its running integral approximates the absolute-loss risk
curve up to an additive constant, and the integral's minimizer
approximates the median.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .factors import FactorCoeffs, counting_factor
from .privacy import NoisePlan, PrivacyBudget, gaussian_constant, noise_scale, sample_noise

__all__ = [
    "AggregateEstimate",
    "ClientMessage",
    "Grid",
    "beta_bound",
    "client_encode",
    "median_risk_bound",
    "risk_curve",
    "server_aggregate",
]


@dataclass(frozen=True)
class Grid:
    """Partition of [0, 1] into w = ceil(eps sqrt(n)) equal intervals."""

    n: int
    epsilon: float
    delta: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"client count must be >= 1, got {self.n}")
        PrivacyBudget(self.epsilon, self.delta)

    @property
    def w(self) -> int:
        return math.ceil(self.epsilon * math.sqrt(self.n))

    @property
    def width(self) -> float:
        return 1.0 / self.w

    def breakpoints(self) -> np.ndarray:
        return np.arange(self.w + 1) / self.w

    def interval_index(self, d: float) -> int:
        """1-indexed interval containing d, right-open except the last."""
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"data value must lie in [0, 1], got {d}")
        return min(int(d * self.w) + 1, self.w)


@dataclass(frozen=True)
class ClientMessage:
    """Noisy prefix sums of the one-hot bucket vector (y) and its reversal (z)."""

    y: np.ndarray
    z: np.ndarray
    half_budget: PrivacyBudget

    @property
    def composed_budget(self) -> PrivacyBudget:
        """Total budget spent across the two vectors."""
        return PrivacyBudget(2.0 * self.half_budget.epsilon, 2.0 * self.half_budget.delta)


def _noisy_prefix(hot: int, coeffs: FactorCoeffs, sigma: float, plan: NoisePlan, channel: int) -> np.ndarray:
    # L (L u + sigma g) for one-hot u: the L^2 part is exactly the step at hot
    w = coeffs.dim
    released = np.zeros(w)
    released[hot - 1 :] = 1.0
    if sigma > 0.0:
        g = sample_noise(plan, w, channel * (w + 1))
        released += sigma * np.convolve(coeffs.coeffs, g)[:w]
    return released


def client_encode(
    d: float,
    grid: Grid,
    budget: PrivacyBudget,
    seed: int,
    *,
    client_index: int = 0,
    dry_run: bool = False,
) -> ClientMessage:
    """Encode one value as a pair of noisy prefix-sum vectors over the grid.

    Distinct ``client_index`` values draw independent noise under a shared
    seed; the same (seed, index) pair always reproduces the same message.
    """
    w = grid.w
    hot = grid.interval_index(d)
    half = PrivacyBudget(budget.epsilon / 2.0, budget.delta / 2.0)
    plan = NoisePlan(half, horizon=w, seed=seed, dry_run=dry_run)
    coeffs = counting_factor(w)
    sigma = noise_scale(plan, w, coeffs.prefix_norm(w), coeffs.prefix_norm(w))
    y = _noisy_prefix(hot, coeffs, sigma, plan, 2 * client_index)
    z = _noisy_prefix(w - hot + 1, coeffs, sigma, plan, 2 * client_index + 1)
    return ClientMessage(y=y, z=z, half_budget=half)


@dataclass(frozen=True)
class AggregateEstimate:
    """Step-function estimate: mass below minus mass above, per breakpoint.

    ``xhat`` has length w; entry t-1 holds the aggregate for the interior
    breakpoint t/w (t = 1..w-1) and the final entry repeats its neighbor.
    """

    grid: Grid
    xhat: np.ndarray

    def breakpoint_values(self) -> np.ndarray:
        """Estimate at every breakpoint j/w, endpoints copied from neighbors."""
        return np.concatenate(([self.xhat[0]], self.xhat))


def server_aggregate(messages: Sequence[ClientMessage], grid: Grid) -> AggregateEstimate:
    """Average client messages into the breakpoint step-function estimate.

    xhat[t] = (1/n) (sum_i y_i[t] - sum_i z_i[w-t]) for t = 1..w-1; the
    endpoints copy the nearest interior entry (identically 0 when w = 1).
    """
    w = grid.w
    if not messages:
        raise ValueError("need at least one client message")
    for msg in messages:
        if len(msg.y) != w or len(msg.z) != w:
            raise ValueError(f"message length {len(msg.y)} does not match grid w = {w}")
    y_sum = np.sum([msg.y for msg in messages], axis=0)
    z_sum = np.sum([msg.z for msg in messages], axis=0)
    xhat = np.zeros(w)
    if w > 1:
        t = np.arange(1, w)
        xhat[:-1] = (y_sum[t - 1] - z_sum[w - t - 1]) / len(messages)
        xhat[-1] = xhat[-2]
    return AggregateEstimate(grid=grid, xhat=xhat)


def risk_curve(estimate: AggregateEstimate, theta: float) -> tuple[float, float]:
    """Snapped step value g and its running integral f at ``theta``.

    g(theta) is the estimate at the breakpoint nearest theta (ties broken
    toward the smaller breakpoint); f(theta) is the exact closed-form
    integral of g from 0, accumulated over the segments between
    consecutive breakpoint midpoints.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    w = estimate.grid.w
    values = estimate.breakpoint_values()
    k = min(max(math.ceil(theta * w - 0.5), 0), w)
    edges = np.concatenate(([0.0], (np.arange(w) + 0.5) / w, [1.0]))
    lengths = np.clip(np.minimum(theta, edges[1:]) - edges[:-1], 0.0, None)
    return float(values[k]), float(values @ lengths)


def beta_bound(n: int, epsilon: float, delta: float) -> float:
    """Uniform deviation scale of f around its noiseless limit."""
    PrivacyBudget(epsilon, delta)
    if n < 1:
        raise ValueError(f"client count must be >= 1, got {n}")
    half = PrivacyBudget(epsilon / 2.0, delta / 2.0)
    m = epsilon * math.sqrt(n) + 1.0
    return gaussian_constant(half) * math.sqrt(math.log(6.0 * m) / (2.0 * n)) * (1.0 + math.log(m) / math.pi)


def median_risk_bound(n: int, epsilon: float, delta: float) -> float:
    """Guarantee radius 2 beta + 2 / (eps sqrt(n)) for the estimated curve."""
    return 2.0 * beta_bound(n, epsilon, delta) + 2.0 / (epsilon * math.sqrt(n))
