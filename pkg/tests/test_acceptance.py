"""Acceptance checklist for the whole package.

Each check records a single ``[criterion NN] PASS/FAIL`` line before
asserting; the conftest terminal-summary hook replays every recorded line at
the end of the run, so the full checklist verdict is visible in any pytest
invocation regardless of capture mode.  Checks with a stated runtime budget
measure wall time and include it in the assertion; the Monte Carlo coverage
checks charge the shared fixture build time from ``conftest.FIXTURE_SECONDS``
as well.

Two checks document known calibration limitations and currently fail:

* criterion 05: the closed-form counting bound calibrates per-step tails
  only, so simultaneous whole-trace coverage at T = 2^14 falls far short of
  2/3 (see README, known limitations);
* criterion 10: the declared per-neighbor substring sensitivity ``l``
  undercounts the worst concatenated indicator distance, which reaches
  sqrt(l*(l+1)) (see README, known limitations).

Both are asserted exactly as stated rather than weakened.
"""
import itertools
import math
import time

import numpy as np
import pytest
from scipy import stats

from continualdp import (
    AverageState,
    CounterState,
    EpisodeCounterState,
    ExperimentConfig,
    GraphStream,
    Grid,
    HistogramState,
    NoisePlan,
    PrivacyBudget,
    SubstringCounterState,
    averaging_bound_curve,
    averaging_factor,
    averaging_norm_bound,
    beta_bound,
    counting_bound_curve,
    counting_factor,
    cut_error_bound,
    edge_slots,
    error_bound_average,
    error_bound_counting,
    mathias_bounds,
    median_risk_bound,
    partial_zeta_bounds,
    reconstruct_product,
    run_experiment,
    running_mean_workload,
)

BUDGET = PrivacyBudget(0.8, 1e-10)

# roundoff envelope for dry-run comparisons: the release path evaluates the
# factor dots in floating point, so a noiseless run reconstructs the exact
# answer only to ~1e-14 at these sizes; any plumbing defect is >= 1e-3
DRY_ATOL = 1e-10


VERDICTS: list[str] = []


def _verdict(num, label, ok, detail=""):
    line = f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {label}"
    if detail:
        line += f"  ({detail})"
    VERDICTS.append(line)
    print(line, flush=True)


@pytest.fixture(scope="module")
def sandwich_reports():
    """Cosecant-average sandwich reports at T = 2^8, 2^10, ..., 2^24."""
    start = time.perf_counter()
    reports = [mathias_bounds(1 << k) for k in range(8, 25, 2)]
    return reports, time.perf_counter() - start


def test_01_factorization_identity():
    start = time.perf_counter()
    worst = 0.0
    for T in range(1, 513):
        product = reconstruct_product(counting_factor(T))
        worst = max(worst, float(np.max(np.abs(product - np.tri(T)))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    _verdict(1, "factorization identity, T in 1..512", ok,
             f"max entry error {worst:.2e}, {elapsed:.1f}s")
    assert ok, f"worst entry error {worst}, elapsed {elapsed}"


def test_02_averaging_square_root():
    start = time.perf_counter()
    worst_product = 0.0
    worst_negative = 0.0
    worst_diag = 0.0
    for T in range(1, 257):
        R = averaging_factor(T).entries
        worst_product = max(worst_product, float(np.max(np.abs(R @ R - running_mean_workload(T)))))
        worst_negative = max(worst_negative, float(-np.min(R)))
        diag = np.diagonal(R) - 1.0 / np.sqrt(np.arange(1, T + 1))
        worst_diag = max(worst_diag, float(np.max(np.abs(diag))))
    elapsed = time.perf_counter() - start
    ok = worst_product <= 1e-8 and worst_negative <= 0.0 and worst_diag <= 1e-12 and elapsed < 10.0
    _verdict(2, "averaging square root, T in 1..256", ok,
             f"max product error {worst_product:.2e}, {elapsed:.1f}s")
    assert ok, (worst_product, worst_negative, worst_diag, elapsed)


def test_03_bound_gap_reproduction(sandwich_reports):
    reports, elapsed = sandwich_reports
    gap_upper = max(abs(r.ours_upper - r.mathias_upper) for r in reports)
    gap_lower = max(r.ours_upper - r.mathias_lower for r in reports)
    ok = gap_upper <= 0.02 and gap_lower <= 0.52 and elapsed < 120.0
    _verdict(3, "bound gaps at T = 2^8..2^24", ok,
             f"upper gap {gap_upper:.4f} <= 0.02, lower gap {gap_lower:.4f} <= 0.52, {elapsed:.1f}s")
    assert ok, (gap_upper, gap_lower, elapsed)


def test_04_sandwich_consistency(sandwich_reports):
    reports, _ = sandwich_reports
    margin = min(r.exact_norm_product - r.mathias_lower for r in reports)
    ok = margin >= 0.0
    _verdict(4, "cosecant lower bound below achieved norm product", ok,
             f"min margin {margin:.4f}")
    assert ok, margin


def test_05_counting_coverage(counting_errors_16k, fig_budget, fixture_seconds):
    start = time.perf_counter()
    T = 1 << 14
    bound_exact, _ = counting_bound_curve(T, fig_budget)
    for t in (2, 17, T):  # the curve matches the scalar op it tabulates
        assert bound_exact[t - 1] == error_bound_counting(t, T, fig_budget)
    covered = np.all(counting_errors_16k <= bound_exact[None, :], axis=1)
    fraction = float(covered.mean())
    elapsed = time.perf_counter() - start + fixture_seconds["counting_errors_16k"]
    ok = fraction >= 2.0 / 3.0 and elapsed < 300.0
    _verdict(5, "counting whole-trace coverage, T = 2^14, 200 seeds", ok,
             f"fraction {fraction:.4f}, need >= 0.6667, {elapsed:.0f}s")
    assert ok, f"within-bound fraction {fraction}, elapsed {elapsed}"


def test_06_averaging_coverage(averaging_errors_4k, fig_budget, fixture_seconds):
    start = time.perf_counter()
    T = 1 << 12
    bound_exact, bound_analytic = averaging_bound_curve(T, fig_budget)
    for t in (2, 33, T):  # the curve and the scalar op sum norms in different orders
        assert math.isclose(bound_exact[t - 1], error_bound_average(t, T, fig_budget), rel_tol=1e-12)
        assert bound_analytic[t - 1] == error_bound_average(t, T, fig_budget, variant="analytic")
    covered = np.all(averaging_errors_4k <= bound_analytic[None, :], axis=1)
    fraction = float(covered.mean())

    # the closed-form comparison uses the default (exact-norm) variants
    count_exact, _ = counting_bound_curve(T, fig_budget)
    t = np.arange(2, T + 1)
    below = bool(np.all(bound_exact[1:] < count_exact[1:] / t))

    elapsed = time.perf_counter() - start + fixture_seconds["averaging_errors_4k"]
    ok = fraction >= 2.0 / 3.0 and below and elapsed < 300.0
    _verdict(6, "averaging whole-trace coverage and bound comparison, T = 2^12", ok,
             f"fraction {fraction:.4f}, strictly below counting bound / t: {below}, {elapsed:.0f}s")
    assert ok, (fraction, below, elapsed)


def test_07_baseline_contrast(counting_errors_16k, tree_errors_16k, fixture_seconds):
    start = time.perf_counter()
    T = 1 << 14
    tree_mean = tree_errors_16k.mean(axis=0)
    fact_mean = counting_errors_16k.mean(axis=0)
    exceed = float(np.mean(tree_mean > fact_mean))
    popcounts = np.array([t.bit_count() for t in range(1, T + 1)])
    rho = float(stats.spearmanr(tree_mean, popcounts).statistic)
    elapsed = (time.perf_counter() - start
               + fixture_seconds["counting_errors_16k"]
               + fixture_seconds["tree_errors_16k"])
    ok = exceed >= 0.90 and rho > 0.5 and elapsed < 300.0
    _verdict(7, "binary tree loses per step and tracks popcount", ok,
             f"tree worse on {exceed:.3f} of steps, rank corr {rho:.3f}, {elapsed:.0f}s")
    assert ok, (exceed, rho, elapsed)


def test_08_partial_zeta_sandwich():
    start = time.perf_counter()
    T = 10**5
    horizons = np.arange(1, T + 1, dtype=np.float64)
    exact = np.sqrt(np.cumsum(1.0 / (horizons * horizons)))
    lower = np.pi * np.sqrt(horizons * (2.0 * horizons - 1.0) / (3.0 * (2.0 * horizons + 1.0) ** 2))
    upper = 2.0 * np.pi * np.sqrt(horizons * (horizons + 1.0) / (6.0 * (2.0 * horizons + 1.0) ** 2))
    sandwich = bool(np.all(lower <= exact) and np.all(exact <= upper))

    rng = np.random.default_rng(8)
    sampled = {1, 2, T} | {int(v) for v in rng.integers(1, T + 1, 50)}
    for h in sampled:  # the vectorized arrays match the op they tabulate
        lo, ex, up = partial_zeta_bounds(h)
        assert math.isclose(lo, lower[h - 1], rel_tol=1e-12)
        assert math.isclose(ex, exact[h - 1], rel_tol=1e-9)
        assert math.isclose(up, upper[h - 1], rel_tol=1e-12)

    avg = 2.0 * horizons * (horizons + 1.0) * np.pi**2 / (3.0 * (2.0 * horizons + 1.0) ** 2)
    monotone_below = bool(np.all(avg < np.pi**2 / 6.0) and np.all(np.diff(avg) > 0.0))
    for h in sampled:
        assert averaging_norm_bound(h) == avg[h - 1]

    elapsed = time.perf_counter() - start
    ok = sandwich and monotone_below and elapsed < 5.0
    _verdict(8, "partial-zeta sandwich and averaging norm bound, T in 1..1e5", ok,
             f"sandwich {sandwich}, monotone below pi^2/6 {monotone_below}, {elapsed:.1f}s")
    assert ok, (sandwich, monotone_below, elapsed)


def _subsequence_in(window, pattern):
    it = iter(window)
    return all(ch in it for ch in pattern)


def _minimal_window_ends(stream, pattern):
    """1-based end positions of minimal windows containing the pattern."""
    ends = []
    for i in range(len(stream)):
        if stream[i] != pattern[0]:
            continue
        for j in range(i, len(stream)):
            if stream[j] != pattern[-1]:
                continue
            window = stream[i : j + 1]
            if not _subsequence_in(window, pattern):
                continue
            if _subsequence_in(window[1:], pattern) or _subsequence_in(window[:-1], pattern):
                continue
            ends.append(j + 1)
    return ends


def _window_count(stream, pattern):
    k = len(pattern)
    return sum(1 for i in range(len(stream) - k + 1) if stream[i : i + k] == pattern)


def _dry_plan(T, seed):
    return NoisePlan(BUDGET, horizon=T, seed=seed, dry_run=True)


def _check_counter(rng, seed):
    T = int(rng.integers(1, 129))
    bits = rng.integers(0, 2, T)
    state = CounterState(_dry_plan(T, seed))
    running = 0
    worst = 0.0
    for t in range(T):
        running += int(bits[t])
        worst = max(worst, abs(state.step(int(bits[t])) - running))
    return worst


def _check_average(rng, seed):
    T = int(rng.integers(1, 129))
    values = rng.random(T)
    state = AverageState(_dry_plan(T, seed), allow_real=True)
    total = 0.0
    worst = 0.0
    for t in range(T):
        total += float(values[t])
        worst = max(worst, abs(state.step(float(values[t])) - total / (t + 1)))
    return worst


def _check_histogram(rng, seed):
    T = int(rng.integers(1, 97))
    u = int(rng.integers(1, 4))
    state = HistogramState(_dry_plan(T, seed), u)
    counts = np.zeros(u, dtype=int)
    worst = 0.0
    for _ in range(T):
        positive = np.flatnonzero(counts)
        if positive.size and rng.random() < 0.3:
            coord = int(rng.choice(positive))
            sign = -1
        else:
            coord = int(rng.integers(0, u))
            sign = 1
        counts[coord] += sign
        released = state.step(coord, sign)
        worst = max(worst, float(np.max(np.abs(released - counts))))
        assert np.array_equal(state.true_counts, counts)
    return worst


def _check_graph(rng, seed):
    T = int(rng.integers(1, 33))
    n = int(rng.integers(2, 9))
    slots = edge_slots(n)
    state = GraphStream(_dry_plan(T, seed), n)
    totals = np.zeros(len(slots))
    worst = 0.0
    released = None
    for _ in range(T):
        picks = rng.choice(len(slots), size=int(rng.integers(1, min(3, len(slots)) + 1)), replace=False)
        updates = {slots[int(p)]: float(rng.random()) for p in picks}
        for k, slot in enumerate(slots):
            totals[k] += updates.get(slot, 0.0)
        released = state.step(updates)
        got = np.array([released.weight(u, v) for u, v in slots])
        worst = max(worst, float(np.max(np.abs(got - totals))))
    if n >= 3:  # one cut per case against a direct pair sum
        vertices = list(rng.permutation(n))
        S, P = set(vertices[:1]), set(vertices[1:])
        direct = sum(totals[k] for k, (u, v) in enumerate(slots) if (u in S) != (v in S))
        worst = max(worst, abs(released.cut_value(S, P) - direct))
    return worst


def _check_substring(rng, seed):
    T = int(rng.integers(1, 49))
    u = int(rng.integers(1, 4))
    ell = int(rng.integers(1, 4))
    alphabet = "abc"[:u]
    stream = "".join(rng.choice(list(alphabet), T))
    state = SubstringCounterState(_dry_plan(T, seed), alphabet, ell)
    queries = state.queries
    counts = np.zeros(len(queries), dtype=int)
    worst = 0.0
    for t in range(1, T + 1):
        prefix = stream[:t]
        for k, q in enumerate(queries):
            if len(q) <= t and prefix[t - len(q) :] == q:
                counts[k] += 1
        released = state.step(stream[t - 1])
        worst = max(worst, float(np.max(np.abs(released - counts))))
    full = np.array([_window_count(stream, q) for q in queries])
    assert np.array_equal(counts, full)
    assert np.array_equal(state.true_counts, full)
    return worst


def _check_episode(rng, seed):
    T = int(rng.integers(1, 13))
    u = int(rng.integers(1, 4))
    ell = int(rng.integers(1, 4))
    alphabet = "abc"[:u]
    stream = "".join(rng.choice(list(alphabet), T))
    state = EpisodeCounterState(_dry_plan(T, seed), alphabet, ell)
    queries = state.queries
    ends = {q: _minimal_window_ends(stream, q) for q in queries}
    worst = 0.0
    for t in range(1, T + 1):
        released = state.step(stream[t - 1])
        counts = np.array([sum(1 for e in ends[q] if e <= t) for q in queries])
        worst = max(worst, float(np.max(np.abs(released - counts))))
        assert np.array_equal(state.true_counts, counts)
    return worst


def test_09_dry_run_oracles():
    start = time.perf_counter()
    checks = [_check_counter, _check_average, _check_histogram,
              _check_graph, _check_substring, _check_episode]
    rng = np.random.default_rng(9)
    worst = 0.0
    for case in range(1000):
        worst = max(worst, checks[case % len(checks)](rng, case))
    elapsed = time.perf_counter() - start
    ok = worst <= DRY_ATOL and elapsed < 60.0
    _verdict(9, "dry-run outputs equal brute force, 1000 cases", ok,
             f"max deviation {worst:.2e} (roundoff envelope {DRY_ATOL:.0e}), {elapsed:.1f}s")
    assert ok, (worst, elapsed)


def _indicator_concat(cls, stream, ell):
    """Per-step query-count increments of a dry run, stacked into one vector."""
    state = cls(_dry_plan(len(stream), 0), "ab", ell)
    previous = np.zeros(len(state.queries))
    rows = []
    for letter in stream:
        state.step(letter)
        current = state.true_counts.astype(float)
        rows.append(current - previous)
        previous = current
    return np.concatenate(rows)


def _worst_neighbor_distance(cls, ell):
    cache = {}

    def vec(stream):
        if stream not in cache:
            cache[stream] = _indicator_concat(cls, stream, ell)
        return cache[stream]

    worst = 0.0
    for length in range(1, 7):
        for letters in itertools.product("ab", repeat=length):
            stream = "".join(letters)
            for pos in range(length):
                other = "b" if stream[pos] == "a" else "a"
                neighbor = stream[:pos] + other + stream[pos + 1 :]
                worst = max(worst, float(np.linalg.norm(vec(stream) - vec(neighbor))))
    return worst


def test_10_sensitivity_oracles():
    start = time.perf_counter()
    lines = []
    substring_ok = True
    episode_ok = True
    for ell in (1, 2, 3):
        sub = _worst_neighbor_distance(SubstringCounterState, ell)
        epi = _worst_neighbor_distance(EpisodeCounterState, ell)
        epi_allowed = 2.0 * math.sqrt(2 ** (ell - 1) * ell)
        substring_ok &= sub <= ell + 1e-12
        episode_ok &= epi <= epi_allowed + 1e-12
        lines.append(f"l={ell}: substring {sub:.4f} vs {ell}, episode {epi:.4f} vs {epi_allowed:.4f}")
    elapsed = time.perf_counter() - start
    ok = substring_ok and episode_ok and elapsed < 120.0
    _verdict(10, "neighbor sensitivity, exhaustive streams up to length 6", ok,
             "; ".join(lines) + f", {elapsed:.1f}s")
    assert ok, (substring_ok, episode_ok, lines, elapsed)


def test_11_graph_cut_coverage():
    start = time.perf_counter()
    T, n, runs = 64, 8, 100
    slots = edge_slots(n)
    incidence = np.zeros((n, len(slots)))
    for k, (u, v) in enumerate(slots):
        incidence[u, k] = incidence[v, k] = 1.0
    within = 0
    for run in range(runs):
        plan = NoisePlan(BUDGET, horizon=T, seed=run)
        stream = GraphStream(plan, n)
        data = np.random.default_rng(1_100 + run)
        run_ok = True
        released = None
        for t in range(1, T + 1):
            picks = data.choice(len(slots), size=int(data.integers(1, 4)), replace=False)
            released = stream.step({slots[int(p)]: float(data.random()) for p in picks})
            cut_errors = np.abs(incidence @ (released.weights - stream.true_weights))
            if np.max(cut_errors) > cut_error_bound(plan, t, 1, n - 1):
                run_ok = False
                break
        if run_ok:
            # the vectorized cut errors match the op they shortcut
            v = int(data.integers(0, n))
            direct = released.cut_value({v}, set(range(n)) - {v}) - stream.true_graph.cut_value(
                {v}, set(range(n)) - {v}
            )
            assert math.isclose(abs(direct), float(np.abs(incidence @ (released.weights - stream.true_weights))[v]), rel_tol=1e-9, abs_tol=1e-9)
            within += 1
    fraction = within / runs
    elapsed = time.perf_counter() - start
    ok = fraction >= 2.0 / 3.0 and elapsed < 120.0
    _verdict(11, "singleton cut coverage, n = 8, T = 64, 100 seeds", ok,
             f"fraction {fraction:.2f}, need >= 0.6667, {elapsed:.1f}s")
    assert ok, (fraction, elapsed)


def test_12_local_median_end_to_end(tmp_path):
    start = time.perf_counter()
    n, epsilon, delta = 10_000, 0.5, 1e-6
    assert math.isclose(
        median_risk_bound(n, epsilon, delta),
        2.0 * beta_bound(n, epsilon, delta) + 2.0 / (epsilon * math.sqrt(n)),
        rel_tol=1e-15,
    )
    config = ExperimentConfig(
        task="ldp-median",
        out=str(tmp_path),
        T=1,
        epsilon=epsilon,
        delta=delta,
        seed=0,
        trials=100,
        clients=n,
        theta_points=101,
    )
    result = run_experiment(config)
    fraction = result.fraction_within_bound
    elapsed = time.perf_counter() - start
    ok = fraction >= 2.0 / 3.0 and elapsed < 300.0
    _verdict(12, "local median risk within bound, n = 1e4, 100 trials", ok,
             f"fraction {fraction:.2f}, bound {median_risk_bound(n, epsilon, delta):.3f}, {elapsed:.0f}s")
    assert ok, (fraction, elapsed)


def _snapshot(directory):
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir()) if p.is_file()}


def test_13_byte_identical_reruns(tmp_path):
    cases = [
        dict(task="count", T=64, trials=2, seed=3),
        dict(task="count", T=32, trials=2, mechanism="binary-tree"),
        dict(task="average", T=64, trials=2),
        dict(task="histogram", T=48, trials=2, universe=3),
        dict(task="graph-cut", T=32, trials=2, vertices=5),
        dict(task="graph-fn", T=32, trials=2, vertices=5),
        dict(task="substring", T=32, trials=2, ell=2, alphabet="ab"),
        dict(task="episode", T=24, trials=2, ell=2, alphabet="ab"),
        dict(task="ldp-median", T=1, trials=2, clients=60, theta_points=11, epsilon=0.5, delta=1e-6),
        dict(task="bounds", T_list=(2, 16, 64)),
    ]
    identical = True
    for index, case in enumerate(cases):
        out = tmp_path / f"{index:02d}_{case['task'].replace('-', '_')}"
        config = ExperimentConfig(out=str(out), **case)
        run_experiment(config)
        first = _snapshot(out)
        run_experiment(config)
        if _snapshot(out) != first:
            identical = False
            break
    _verdict(13, "byte-identical reruns across every experiment kind", identical,
             f"{len(cases)} configs")
    assert identical
