"""Lower-triangular factorizations of the streaming count and mean workloads.

The prefix-sum workload (lower-triangular all-ones matrix) factors as L @ R
where both factors are the Toeplitz matrix with entries f(i - j), built from
a single coefficient sequence

    f(0) = 1,   f(k) = f(k-1) * (2k - 1) / (2k),   f(k) = 0 for k < 0.

The running-mean workload factors as R @ R where R is the unique lower
triangular square root with positive diagonal, computed here by a blocked
triangular solve.  Alongside the factor constructors this module provides the
closed-form norm bounds used to calibrate and report noise: the max-row /
max-column norms of factor prefixes, the logarithmic upper bound on the
counting norm product, the cosecant-average sandwich that brackets the best
achievable norm product for counting, and the partial-zeta sandwich used for
averaging.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import get_lapack_funcs

__all__ = [
    "BoundReport",
    "FactorCoeffs",
    "LowerTriFactor",
    "averaging_factor",
    "averaging_norm_bound",
    "counting_factor",
    "counting_norm_bound",
    "factor_coeff",
    "mathias_bounds",
    "partial_zeta_bounds",
    "prefix_sum_workload",
    "reconstruct_product",
    "row_col_norms",
    "running_mean_workload",
]

DENSE_LIMIT = 1 << 10
_CLAMP_TOL = 1e-10

_coeff_memo = [1.0]


def factor_coeff(k: int) -> float:
    """Coefficient f(k) of the counting factor; 0 for negative k.

    Extending the memo costs O(k) on first use and O(1) afterwards.
    """
    if k < 0:
        return 0.0
    while len(_coeff_memo) <= k:
        i = len(_coeff_memo)
        _coeff_memo.append(_coeff_memo[-1] * (2 * i - 1) / (2 * i))
    return _coeff_memo[k]


def _coefficients(T: int) -> np.ndarray:
    """f(0..T-1) as an array, by the same left-to-right products as factor_coeff."""
    k = np.arange(1, T, dtype=np.float64)
    out = np.empty(T)
    out[0] = 1.0
    np.cumprod((2.0 * k - 1.0) / (2.0 * k), out=out[1:])
    return out


class FactorCoeffs:
    """The counting factor: one coefficient vector standing for both L and R.

    Both factors are lower-triangular Toeplitz, entry (i, j) = f(i - j), so
    the matrix is never materialized; ``row(t)`` gives row t as a reversed
    view and prefix norms come from a cached running sum of squares.
    """

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = coeffs
        self.dim = len(coeffs)
        self.sq_prefix = np.cumsum(coeffs * coeffs)

    def row(self, t: int) -> np.ndarray:
        """Row t (1-based) of the factor: [f(t-1), ..., f(1), f(0)]."""
        return self.coeffs[t - 1 :: -1] if t > 0 else self.coeffs[:0]

    def prefix_norm(self, t: int) -> float:
        """Max row norm of the t x t prefix, equal to its max column norm."""
        return math.sqrt(self.sq_prefix[t - 1])


@lru_cache(maxsize=8)
def _counting_factor_cached(T: int) -> FactorCoeffs:
    return FactorCoeffs(_coefficients(T))


def counting_factor(T: int) -> FactorCoeffs:
    """Factor of the T-step prefix-sum workload, f(0..T-1)."""
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    return _counting_factor_cached(int(T))


def reconstruct_product(factor: FactorCoeffs, T: int | None = None, *, allow_large: bool = False) -> np.ndarray:
    """Dense L @ R for the counting factor; equals the prefix-sum workload.

    Intended as an oracle at small sizes: O(T^2) memory, guarded at
    ``DENSE_LIMIT`` unless ``allow_large`` is set.
    """
    if T is None:
        T = factor.dim
    if T > factor.dim:
        raise ValueError(f"prefix {T} exceeds factor horizon {factor.dim}")
    if T > DENSE_LIMIT and not allow_large:
        raise ValueError(f"dense reconstruction of T={T} exceeds the {DENSE_LIMIT} guard; pass allow_large=True")
    idx = np.arange(T)[:, None] - np.arange(T)[None, :]
    L = np.where(idx >= 0, factor.coeffs[np.abs(idx)], 0.0)
    return L @ L


class LowerTriFactor:
    """Dense lower-triangular square root of the running-mean workload.

    ``entries`` is T x T with zeros above the diagonal; diagonal entry i is
    1/sqrt(i).  ``clamped`` counts entries in (-1e-10, 0) that were rounded
    up to zero during construction.
    """

    def __init__(self, entries: np.ndarray, clamped: int = 0):
        self.entries = entries
        self.dim = entries.shape[0]
        self.clamped = clamped
        self._row_norms: np.ndarray | None = None
        self._row_norm_runmax: np.ndarray | None = None
        self._col_max_per_t: np.ndarray | None = None

    def row(self, t: int) -> np.ndarray:
        """Row t (1-based), the first t entries."""
        return self.entries[t - 1, :t]

    def row_norm(self, t: int) -> float:
        return float(np.linalg.norm(self.row(t)))

    def _fill_norm_caches(self) -> None:
        sq = self.entries * self.entries
        row_sq = sq.sum(axis=1)
        self._row_norms = np.sqrt(row_sq)
        self._row_norm_runmax = np.sqrt(np.maximum.accumulate(row_sq))
        # cumulative column sums of squares; the t-th row's max covers the
        # t x t prefix because entries above the diagonal are zero
        self._col_max_per_t = np.sqrt(np.cumsum(sq, axis=0).max(axis=1))

    def prefix_norms(self, t: int) -> tuple[float, float]:
        """(max row norm, max column norm) of the t x t prefix."""
        if self._row_norm_runmax is None:
            self._fill_norm_caches()
        return float(self._row_norm_runmax[t - 1]), float(self._col_max_per_t[t - 1])

    def max_col_norms(self) -> np.ndarray:
        """Max column norm of every prefix, indexed by t-1."""
        if self._col_max_per_t is None:
            self._fill_norm_caches()
        return self._col_max_per_t

    def row_norms(self) -> np.ndarray:
        """Norm of every row, indexed by t-1."""
        if self._row_norms is None:
            self._fill_norm_caches()
        return self._row_norms

    def extended(self, extra_rows: int) -> "LowerTriFactor":
        """New factor with ``extra_rows`` more rows solved incrementally.

        Each new row i is solved right to left from the one linear equation
        per column: (R R)[i, j] = 1/i with unknowns only in row i.
        """
        n = self.dim + extra_rows
        R = np.zeros((n, n))
        R[: self.dim, : self.dim] = self.entries
        clamped = self.clamped
        for i0 in range(self.dim, n):
            i = i0 + 1
            _solve_row(R, i0, 1.0 / i)
            clamped += _clamp_row(R, i0)
        return LowerTriFactor(R, clamped)


def _solve_row(R: np.ndarray, i0: int, target: float) -> None:
    """Fill row i0 (0-based) of R given rows above, so (R R)[i0, j] = target."""
    R[i0, i0] = math.sqrt(target)
    for j0 in range(i0 - 1, -1, -1):
        s = target - R[i0, j0 + 1 : i0] @ R[j0 + 1 : i0, j0]
        R[i0, j0] = s / (R[j0, j0] + R[i0, i0])


def _clamp_row(R: np.ndarray, i0: int) -> int:
    row = R[i0, : i0 + 1]
    low = row.min()
    if low < -_CLAMP_TOL:
        raise ArithmeticError(f"averaging factor entry {low:.3e} in row {i0 + 1} is negative beyond round-off")
    neg = row < 0.0
    count = int(neg.sum())
    if count:
        row[neg] = 0.0
    return count


_trsyl = get_lapack_funcs(("trsyl",), (np.empty(0, np.float64),))[0]
_SCALAR_BASE = 64


def _sqrt_lower(M: np.ndarray) -> np.ndarray:
    """Lower-triangular square root with positive diagonal of lower-tri M."""
    n = M.shape[0]
    if n <= _SCALAR_BASE:
        R = np.zeros_like(M)
        for i0 in range(n):
            R[i0, i0] = math.sqrt(M[i0, i0])
            for j0 in range(i0 - 1, -1, -1):
                s = M[i0, j0] - R[i0, j0 + 1 : i0] @ R[j0 + 1 : i0, j0]
                R[i0, j0] = s / (R[j0, j0] + R[i0, i0])
        return R
    h = n // 2
    RA = _sqrt_lower(M[:h, :h])
    RD = _sqrt_lower(M[h:, h:])
    # off-diagonal block solves RD @ X + X @ RA = B; transpose to the upper
    # triangular Sylvester form LAPACK accepts
    Y, scale, info = _trsyl(np.asfortranarray(RA.T), np.asfortranarray(RD.T), np.asfortranarray(M[h:, :h].T))
    if info != 0:
        raise ArithmeticError(f"triangular Sylvester solve failed (info={info})")
    R = np.zeros_like(M)
    R[:h, :h] = RA
    R[h:, h:] = RD
    R[h:, :h] = Y.T / scale
    return R


@lru_cache(maxsize=3)
def _averaging_factor_cached(T: int) -> LowerTriFactor:
    R = _sqrt_lower(running_mean_workload(T))
    low = R.min()
    if low < -_CLAMP_TOL:
        raise ArithmeticError(f"averaging factor entry {low:.3e} is negative beyond round-off")
    neg = R < 0.0
    clamped = int(neg.sum())
    if clamped:
        R[neg] = 0.0
    return LowerTriFactor(R, clamped)


def averaging_factor(T: int) -> LowerTriFactor:
    """Square-root factor of the T-step running-mean workload."""
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    return _averaging_factor_cached(int(T))


def row_col_norms(factor: FactorCoeffs | LowerTriFactor, t: int) -> tuple[float, float]:
    """Exact (max row norm, max column norm) of the t x t factor prefix.

    For the counting factor both norms equal sqrt(1 + sum_{i<t} f(i)^2) and
    come from a cached running sum; for the averaging factor they come from
    cached cumulative row and column squares.
    """
    if t < 1 or t > factor.dim:
        raise ValueError(f"prefix {t} outside factor horizon {factor.dim}")
    if isinstance(factor, FactorCoeffs):
        v = factor.prefix_norm(t)
        return v, v
    return factor.prefix_norms(t)


def counting_norm_bound(T: int) -> float:
    """Closed-form upper bound 1 + ln(T-1)/pi on the counting norm product."""
    if T < 2:
        raise ValueError(f"counting norm bound needs T >= 2, got {T}")
    return 1.0 + math.log(T - 1) / math.pi


def averaging_norm_bound(T: int) -> float:
    """Norm-product bound 2T(T+1)pi^2 / (3(2T+1)^2); approaches pi^2/6 from below."""
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    return 2.0 * T * (T + 1) * math.pi**2 / (3.0 * (2 * T + 1) ** 2)


@dataclass(frozen=True)
class BoundReport:
    """Counting norm product bracketed between the cosecant-average bounds."""

    T: int
    ours_upper: float
    gamma_hat: float
    mathias_lower: float
    mathias_upper: float
    exact_norm_product: float


_CHUNK = 1 << 20


def _cosecant_average(T: int) -> float:
    """(1/T) * sum_{j=1..T} |1 / sin((2j-1) pi / (2T))|, chunked for large T."""
    total = 0.0
    for start in range(1, T + 1, _CHUNK):
        j = np.arange(start, min(start + _CHUNK, T + 1), dtype=np.float64)
        total += float(np.sum(1.0 / np.abs(np.sin((2.0 * j - 1.0) * math.pi / (2.0 * T)))))
    return total / T


def _counting_sq_norm(T: int) -> float:
    """1 + sum_{k=1..T-1} f(k)^2 without storing the coefficient array."""
    total = 1.0
    carry = 1.0
    for start in range(1, T, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, T), dtype=np.float64)
        f = carry * np.cumprod((2.0 * k - 1.0) / (2.0 * k))
        total += float(np.sum(f * f))
        carry = float(f[-1])
    return total


def mathias_bounds(T: int) -> BoundReport:
    """Cosecant-average sandwich around the best counting norm product.

    The upper bound on the counting norm product (NaN below T = 2, where the
    logarithmic form is undefined) is reported next to the sandwich so gap
    columns can be derived downstream.
    """
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    gamma = _cosecant_average(T)
    return BoundReport(
        T=T,
        ours_upper=counting_norm_bound(T) if T >= 2 else math.nan,
        gamma_hat=gamma,
        mathias_lower=(0.5 + 0.5 / T) * gamma,
        mathias_upper=0.5 * gamma + 0.5,
        exact_norm_product=_counting_sq_norm(T),
    )


def partial_zeta_bounds(T: int) -> tuple[float, float, float]:
    """(lower, exact, upper) sandwich around sqrt(sum_{i<=T} 1/i^2)."""
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    i = np.arange(1, T + 1, dtype=np.float64)
    exact = math.sqrt(float(np.sum(1.0 / (i * i))))
    lower = math.pi * math.sqrt(T * (2.0 * T - 1.0) / (3.0 * (2 * T + 1) ** 2))
    upper = 2.0 * math.pi * math.sqrt(T * (T + 1.0) / (6.0 * (2 * T + 1) ** 2))
    return lower, exact, upper


def prefix_sum_workload(T: int) -> np.ndarray:
    """Dense T x T prefix-sum workload: 1 on and below the diagonal."""
    return np.tril(np.ones((T, T)))


def running_mean_workload(T: int) -> np.ndarray:
    """Dense T x T running-mean workload: row i holds 1/i up to the diagonal."""
    return np.tril(np.ones((T, T))) / np.arange(1, T + 1)[:, None]
