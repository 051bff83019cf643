"""Synthetic-graph release: cut queries and continual graph functions.

Streams random edge-weight additions into a GraphStream, then answers cut
queries on the released synthetic graph and compares them to the true
values and to the closed-form cut bound.  A second section tracks two
scalar graph functions (total edge weight and one vertex degree) with the
counter-backed estimator and prints the released trajectory against the
truth.
"""
from __future__ import annotations

import numpy as np

from continualdp import (
    DegreeProvider,
    EdgeCountProvider,
    GraphFunctionEstimator,
    GraphStream,
    NoisePlan,
    PrivacyBudget,
    cut_error_bound,
    edge_slots,
)

N = 10
T = 2000
BUDGET = PrivacyBudget(epsilon=0.8, delta=1e-10)


def random_updates(rng: np.random.Generator) -> dict[tuple[int, int], float]:
    slots = edge_slots(N)
    picks = rng.choice(len(slots), size=rng.integers(1, 4), replace=False)
    return {slots[k]: float(rng.random()) for k in picks}


def main() -> None:
    rng = np.random.default_rng(42)
    plan = NoisePlan(BUDGET, horizon=T, seed=7)
    stream = GraphStream(plan, N)
    for _ in range(T):
        released = stream.step(random_updates(rng))
    truth = stream.true_graph

    print(f"{N}-vertex graph after {T} steps of random weight additions")
    cuts = [
        ({0}, set(range(1, N))),
        ({0, 1, 2}, {3, 4, 5}),
        (set(range(N // 2)), set(range(N // 2, N))),
    ]
    print(f"\n{'cut':>22} {'released':>10} {'true':>10} {'abs error':>10} {'bound':>10}")
    for S, P in cuts:
        est = released.cut_value(S, P)
        true = truth.cut_value(S, P)
        bound = cut_error_bound(plan, T, len(S), len(P))
        label = f"|S| = {len(S)}, |P| = {len(P)}"
        print(f"{label:>22} {est:>10.2f} {true:>10.2f} {abs(est - true):>10.2f} {bound:>10.2f}")

    print("\ncontinual graph functions on a fresh stream of unit edges:")
    rng = np.random.default_rng(43)
    edges = GraphFunctionEstimator(NoisePlan(BUDGET, horizon=T, seed=11), EdgeCountProvider())
    degree = GraphFunctionEstimator(NoisePlan(BUDGET, horizon=T, seed=12), DegreeProvider(vertex=0))
    slots = edge_slots(N)
    last_edges = last_degree = 0.0
    for _ in range(T):
        u, v = slots[rng.integers(len(slots))]
        last_edges = edges.step(u, v)
        last_degree = degree.step(u, v)
    for name, est, released in (
        ("total edge weight", edges, last_edges),
        ("degree of vertex 0", degree, last_degree),
    ):
        print(f"  {name}: released {released:.2f}, true {est.true_value:.2f}, "
              f"bound {est.error_bound():.2f}")


if __name__ == "__main__":
    main()
