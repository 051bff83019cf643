"""Privacy budgets, Gaussian noise calibration, and per-step error bounds.

A ``NoisePlan`` ties a budget to a noise schedule.  Two schedules exist:

* ``"horizon"`` (default): one shared noise vector for the whole run, drawn
  one coordinate per step with sigma calibrated to the horizon-T factor norm.
  Every release is then post-processing of a single Gaussian mechanism, so
  the full output stream satisfies the (epsilon, delta) target outright.
* ``"per-step"``: a fresh noise vector per step with sigma calibrated to the
  step-t factor norm.  This matches the per-release analysis the error
  bounds are stated for, but its accounting covers each release in
  isolation; joint accounting over all T releases is not established, so
  ``"horizon"`` is the recommended mode.

Noise is drawn from a counter-based generator keyed by (seed, stream
offset): identical (seed, offset, count) triples reproduce identical bits,
and disjoint offsets never share draws, which is what makes traces
reproducible and channels independent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .factors import LowerTriFactor, averaging_factor, counting_factor

__all__ = [
    "MODES",
    "NoisePlan",
    "PrivacyBudget",
    "averaging_bound_curve",
    "counting_bound_curve",
    "error_bound_average",
    "error_bound_counting",
    "gaussian_constant",
    "noise_scale",
    "sample_noise",
]

MODES = ("horizon", "per-step")


@dataclass(frozen=True)
class PrivacyBudget:
    """An (epsilon, delta) pair, both strictly inside (0, 1)."""

    epsilon: float
    delta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            if self.epsilon >= 1.0:
                raise ValueError(
                    f"epsilon={self.epsilon} is outside the supported regime; the calibration "
                    "constant is only valid for epsilon < 1 (the analytic Gaussian mechanism "
                    "that would cover epsilon >= 1 is out of scope)"
                )
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")


def gaussian_constant(budget: PrivacyBudget) -> float:
    """Calibration constant (1/eps) * sqrt(8/9 + 2 ln((1/delta) sqrt(2/pi)))."""
    return math.sqrt(8.0 / 9.0 + 2.0 * math.log(math.sqrt(2.0 / math.pi) / budget.delta)) / budget.epsilon


@dataclass(frozen=True)
class NoisePlan:
    """Budget, schedule mode, horizon, seed, and sensitivity for one mechanism.

    ``sensitivity`` is the constant part of the per-step l2 sensitivity;
    mechanisms whose statistic is a mean set ``divide_by_t`` so the effective
    sensitivity becomes ``sensitivity / t`` in per-step mode and
    ``sensitivity / horizon`` in horizon mode (where one shared noise vector
    serves the whole run).  ``dry_run`` forces sigma = 0 everywhere, turning
    any mechanism into its exact statistic.
    """

    budget: PrivacyBudget
    horizon: int
    seed: int = 0
    mode: str = "horizon"
    sensitivity: float = 1.0
    divide_by_t: bool = False
    dry_run: bool = False

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.sensitivity <= 0.0:
            raise ValueError(f"sensitivity must be positive, got {self.sensitivity}")

    @property
    def constant(self) -> float:
        return gaussian_constant(self.budget)


def noise_scale(plan: NoisePlan, t: int, r_norm_t: float, r_norm_T: float) -> float:
    """Noise sigma at step t given the exact step and horizon factor norms.

    Per-step mode rescales at every step (sigma_t = C * Delta_t * ||R_t||);
    horizon mode draws one shared noise vector for the whole run, so sigma is
    calibrated once at the horizon and stays constant over t.
    """
    if plan.dry_run:
        return 0.0
    if plan.mode == "per-step":
        delta_f = plan.sensitivity / t if plan.divide_by_t else plan.sensitivity
        return plan.constant * delta_f * r_norm_t
    delta_f = plan.sensitivity / plan.horizon if plan.divide_by_t else plan.sensitivity
    return plan.constant * delta_f * r_norm_T


def sample_noise(plan: NoisePlan, count: int, stream_offset: int) -> np.ndarray:
    """``count`` unit Gaussians from the (seed, offset)-keyed counter stream."""
    key = np.array(
        [plan.seed & 0xFFFFFFFFFFFFFFFF, stream_offset & 0xFFFFFFFFFFFFFFFF],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key)).standard_normal(count)


def counting_bound_curve(T: int, budget: PrivacyBudget) -> tuple[np.ndarray, np.ndarray]:
    """Per-step counting error bounds for t = 1..T as (exact, analytic) arrays.

    Exact uses the computed norm product of the t x t factor prefix; analytic
    substitutes the closed form 1 + ln(t)/pi.
    """
    root = math.sqrt(math.log(6.0 * T))
    c = gaussian_constant(budget)
    norm_product = counting_factor(T).sq_prefix
    t = np.arange(1, T + 1, dtype=np.float64)
    return c * norm_product * root, c * (1.0 + np.log(t) / math.pi) * root


def averaging_bound_curve(
    T: int, budget: PrivacyBudget, factor: LowerTriFactor | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Per-step running-mean error bounds for t = 1..T as (exact, analytic).

    Exact is C * maxcol(R_t) * ||row_t(R)|| / t * sqrt(ln 6T); analytic is
    C * 2 pi^2 (t+1) / (3 (2t+1)^2) * sqrt(ln 6T).
    """
    if factor is None:
        factor = averaging_factor(T)
    root = math.sqrt(math.log(6.0 * T))
    c = gaussian_constant(budget)
    t = np.arange(1, T + 1, dtype=np.float64)
    exact = c * factor.max_col_norms()[:T] * factor.row_norms()[:T] / t * root
    analytic = c * (2.0 * math.pi**2 * (t + 1.0) / (3.0 * (2.0 * t + 1.0) ** 2)) * root
    return exact, analytic


def _check_step(t: int, T: int) -> None:
    if not 1 <= t <= T:
        raise ValueError(f"step {t} outside 1..{T}")


def error_bound_counting(t: int, T: int, budget: PrivacyBudget, variant: str = "exact") -> float:
    """Counting error bound at step t of a T-step run.

    The default uses the exact norm product of the step-t factor prefix; the
    reporting variant ``"analytic"`` uses 1 + ln(t)/pi in its place.
    """
    _check_step(t, T)
    root = math.sqrt(math.log(6.0 * T))
    c = gaussian_constant(budget)
    if variant == "analytic":
        return c * (1.0 + math.log(t) / math.pi) * root
    if variant != "exact":
        raise ValueError(f"unknown variant {variant!r}")
    return c * float(counting_factor(T).sq_prefix[t - 1]) * root


def error_bound_average(
    t: int,
    T: int,
    budget: PrivacyBudget,
    variant: str = "exact",
    factor: LowerTriFactor | None = None,
) -> float:
    """Running-mean error bound at step t of a T-step run.

    The default uses the exact prefix norms of the averaging factor; the
    ``"analytic"`` variant is the closed form 2 pi^2 (t+1) / (3 (2t+1)^2).
    """
    _check_step(t, T)
    root = math.sqrt(math.log(6.0 * T))
    c = gaussian_constant(budget)
    if variant == "analytic":
        return c * (2.0 * math.pi**2 * (t + 1.0) / (3.0 * (2.0 * t + 1.0) ** 2)) * root
    if variant != "exact":
        raise ValueError(f"unknown variant {variant!r}")
    if factor is None:
        factor = averaging_factor(T)
    _, max_col = factor.prefix_norms(t)
    return c * max_col * factor.row_norm(t) / t * root
