"""Private graph release under continual edge-weight updates.

A weighted graph on n vertices is a vector over the C(n, 2) edge slots in
lexicographic order (vertices are 0-based).  Each update step adds weights
in [0, 1] to some edges; every edge slot is an independent counter channel,
so the synthetic graph released at step t is the channel-wise noisy prefix
sum of all updates so far.  Cut weights on the release can be read either by
summing crossing edges directly or through the Laplacian quadratic form.

``GraphFunctionEstimator`` covers arbitrary real graph functions: the
per-step differences f_t - f_{t-1} feed one counter whose sensitivity the
difference provider declares.
"""
from __future__ import annotations

import math
from dataclasses import replace
from itertools import combinations

import numpy as np

from .mechanisms import CounterState
from .privacy import NoisePlan, gaussian_constant

__all__ = [
    "DegreeProvider",
    "EdgeCountProvider",
    "GraphFunctionEstimator",
    "GraphStream",
    "SyntheticGraph",
    "cut_error_bound",
    "edge_slots",
]


def edge_slots(n: int) -> list[tuple[int, int]]:
    """Lexicographic (i, j) pairs with i < j; the fixed edge-vector layout."""
    return list(combinations(range(n), 2))


class SyntheticGraph:
    """A released edge-weight vector; noisy weights may be negative."""

    def __init__(self, n: int, weights: np.ndarray):
        self.n = n
        self.weights = weights
        self._slots = edge_slots(n)
        self._index = {edge: k for k, edge in enumerate(self._slots)}

    def weight(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        return float(self.weights[self._index[(min(u, v), max(u, v))]])

    def clamped(self) -> "SyntheticGraph":
        """Copy with negative weights rounded up to zero, for presentation."""
        return SyntheticGraph(self.n, np.maximum(self.weights, 0.0))

    def laplacian(self) -> np.ndarray:
        K = np.zeros((self.n, self.n))
        for (u, v), w in zip(self._slots, self.weights):
            K[u, u] += w
            K[v, v] += w
            K[u, v] -= w
            K[v, u] -= w
        return K

    def cut_value(self, S: set[int], P: set[int]) -> float:
        """Total weight of edges between disjoint nonempty vertex sets S and P.

        When P is the complement of S the value is also computed as the
        Laplacian quadratic form on the indicator of S and the two paths are
        checked against each other.
        """
        S, P = set(S), set(P)
        if not S or not P:
            raise ValueError("both vertex sets must be nonempty")
        if S & P:
            raise ValueError(f"vertex sets overlap: {sorted(S & P)}")
        if not (S | P) <= set(range(self.n)):
            raise ValueError("vertex sets contain unknown vertices")
        direct = sum(self.weight(u, v) for u in S for v in P)
        if S | P == set(range(self.n)):
            chi = np.zeros(self.n)
            chi[list(S)] = 1.0
            quad = float(chi @ self.laplacian() @ chi)
            if not math.isclose(direct, quad, rel_tol=1e-9, abs_tol=1e-9):
                raise ArithmeticError(f"cut computations disagree: direct {direct!r} vs quadratic form {quad!r}")
        return direct


class GraphStream:
    """Continual synthetic-graph release over C(n, 2) counter channels."""

    def __init__(self, plan: NoisePlan, n: int):
        if n < 2:
            raise ValueError(f"need at least 2 vertices, got {n}")
        self.plan = plan
        self.n = n
        self.t = 0
        self._slots = edge_slots(n)
        self._index = {edge: k for k, edge in enumerate(self._slots)}
        self.true_weights = np.zeros(len(self._slots))
        self._channels = [CounterState(plan, channel=k, allow_real=True) for k in range(len(self._slots))]

    def step(self, updates: dict[tuple[int, int], float]) -> SyntheticGraph:
        """Apply weight additions in [0, 1] and release the synthetic graph."""
        row = np.zeros(len(self._slots))
        for (u, v), w in updates.items():
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) not allowed")
            key = (min(u, v), max(u, v))
            if key not in self._index:
                raise ValueError(f"edge {key} outside a {self.n}-vertex graph")
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"edge weight must lie in [0, 1], got {w}")
            row[self._index[key]] = w
        self.t += 1
        self.true_weights += row
        released = np.array([ch.step(row[k]) for k, ch in enumerate(self._channels)])
        return SyntheticGraph(self.n, released)

    @property
    def true_graph(self) -> SyntheticGraph:
        return SyntheticGraph(self.n, self.true_weights.copy())


def cut_error_bound(plan: NoisePlan, t: int, s_size: int, p_size: int) -> float:
    """Closed-form cut-error bound at step t for |S| and |P| of a release."""
    m = s_size + p_size
    return (
        3.0
        * gaussian_constant(plan.budget)
        * s_size
        * (1.0 + math.log(t) / math.pi)
        * math.sqrt(m * math.log(m) * math.log(6.0 * plan.horizon))
    )


class EdgeCountProvider:
    """Total edge weight; one edge update per step keeps differences in [0, 1]."""

    sensitivity = 1.0

    def __init__(self) -> None:
        self.value = 0.0

    def update(self, u: int, v: int, weight: float) -> float:
        self.value += weight
        return self.value


class DegreeProvider:
    """Weighted degree of one fixed vertex."""

    sensitivity = 1.0

    def __init__(self, vertex: int):
        self.vertex = vertex
        self.value = 0.0

    def update(self, u: int, v: int, weight: float) -> float:
        if self.vertex in (u, v):
            self.value += weight
        return self.value


class GraphFunctionEstimator:
    """Continual estimate of a graph function from its difference sequence.

    The provider applies each update and returns the new function value; the
    consecutive differences (which must lie in [0, 1]) feed a counter whose
    noise is calibrated to the provider's declared l2 sensitivity.
    """

    def __init__(self, plan: NoisePlan, provider):
        sensitivity = getattr(provider, "sensitivity", None)
        if sensitivity is None:
            raise ValueError("difference provider must declare an l2 sensitivity")
        self.plan = replace(plan, sensitivity=float(sensitivity))
        self.provider = provider
        self.t = 0
        self._last = 0.0
        self._counter = CounterState(self.plan, allow_real=True)

    def step(self, u: int, v: int, weight: float = 1.0) -> float:
        """Apply one edge update and release the estimated function value."""
        value = self.provider.update(u, v, weight)
        diff = value - self._last
        self._last = value
        self.t += 1
        return self._counter.step(diff)

    def error_bound(self) -> float:
        """Additive error bound C (1 + ln(T)/pi) Gamma sqrt(ln T) at the horizon."""
        T = self.plan.horizon
        return gaussian_constant(self.plan.budget) * (1.0 + math.log(T) / math.pi) * self.plan.sensitivity * math.sqrt(math.log(T))

    @property
    def true_value(self) -> float:
        return self._last
