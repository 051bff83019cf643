"""Experiment harness: seeded Monte Carlo runs, bound tables, CSV emission.

Every run is a pure function of its configuration: trial k uses seed
``seed + k``, inputs are fixed deterministic streams (worst-case all ones
for counting and averaging, cyclic patterns elsewhere), and floats are
printed with 17 significant digits so emitted files are byte-identical
across runs and round-trip bit-exactly.

Vector-valued tasks (histogram, graph releases, pattern counting) trace
the coordinate with the largest absolute error at each step.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .factors import counting_factor, mathias_bounds
from .graphs import EdgeCountProvider, GraphFunctionEstimator, GraphStream, cut_error_bound, edge_slots
from .localdp import Grid, client_encode, median_risk_bound, risk_curve, server_aggregate
from .mechanisms import AverageState, BinaryTreeState, CounterState, HistogramState
from .patterns import EpisodeCounterState, SubstringCounterState, pattern_queries
from .privacy import (
    MODES,
    NoisePlan,
    PrivacyBudget,
    averaging_bound_curve,
    counting_bound_curve,
    gaussian_constant,
)

__all__ = [
    "ErrorTrace",
    "ExperimentConfig",
    "ExperimentResult",
    "MECHANISMS",
    "TASKS",
    "TRACE_HEADER",
    "bounds_table",
    "emit_csv",
    "read_graph_updates",
    "run_experiment",
    "uniform_absolute_risk",
]

TASKS = (
    "count",
    "average",
    "histogram",
    "graph-cut",
    "graph-fn",
    "substring",
    "episode",
    "ldp-median",
    "bounds",
)
MECHANISMS = ("factorization", "binary-tree")

TRACE_HEADER = "t,true,released,abs_error,bound_exact,bound_analytic"
SUMMARY_HEADER = "t,mean_abs_error,max_abs_error,bound_exact,bound_analytic"
LDP_HEADER = "theta,g,f,bound"
LDP_SUMMARY_HEADER = "theta,mean_abs_error,max_abs_error,bound"
BOUNDS_HEADER = "T,ours_upper,gamma_hat,mathias_lower,mathias_upper,gap_upper,gap_lower"

# data-generation stream offset, disjoint from every mechanism channel
_DATA_OFFSET = 1 << 48


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment; echoed into output headers."""

    task: str
    out: str
    T: int = 1 << 14
    epsilon: float = 0.8
    delta: float = 1e-10
    seed: int = 0
    trials: int = 1
    mechanism: str = "factorization"
    mode: str = "horizon"
    sigma_zero: bool = False
    universe: int = 4
    vertices: int = 8
    clients: int = 1000
    ell: int = 2
    alphabet: str = "ab"
    input_path: str | None = None
    T_list: tuple[int, ...] = ()
    theta_points: int = 101

    def __post_init__(self) -> None:
        if self.task not in TASKS:
            raise ValueError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"mechanism must be one of {MECHANISMS}, got {self.mechanism!r}")
        if self.mechanism == "binary-tree" and self.task not in ("count", "average"):
            raise ValueError(f"binary-tree baseline supports count and average only, not {self.task!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        PrivacyBudget(self.epsilon, self.delta)
        if self.T < 1:
            raise ValueError(f"T must be >= 1, got {self.T}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.task == "bounds":
            if not self.T_list:
                raise ValueError("bounds task needs a T list (pass --T as comma-separated values)")
            for T in self.T_list:
                if T < 2:
                    raise ValueError(f"bound-table horizons must be >= 2, got {T}")
        if self.task == "histogram" and self.universe < 1:
            raise ValueError(f"universe size must be >= 1, got {self.universe}")
        if self.task in ("graph-cut", "graph-fn") and self.vertices < 2:
            raise ValueError(f"need at least 2 vertices, got {self.vertices}")
        if self.task == "ldp-median":
            if self.clients < 1:
                raise ValueError(f"client count must be >= 1, got {self.clients}")
            if self.theta_points < 2:
                raise ValueError(f"theta grid needs >= 2 points, got {self.theta_points}")
        if self.task in ("substring", "episode"):
            pattern_queries(self.alphabet, self.ell)

    def comment_lines(self) -> list[str]:
        return [f"{f.name}={getattr(self, f.name)!r}" for f in fields(self)]


@dataclass
class ErrorTrace:
    """Per-step record of one run: true value, release, error, and bounds."""

    t: np.ndarray
    true: np.ndarray
    released: np.ndarray
    bound_exact: np.ndarray
    bound_analytic: np.ndarray
    config: ExperimentConfig | None = None

    @property
    def abs_error(self) -> np.ndarray:
        return np.abs(self.released - self.true)

    def rows(self) -> Iterator[tuple]:
        err = self.abs_error
        for i in range(len(self.t)):
            yield (
                int(self.t[i]),
                self.true[i],
                self.released[i],
                err[i],
                self.bound_exact[i],
                self.bound_analytic[i],
            )


@dataclass
class ExperimentResult:
    """Paths and aggregates produced by one run_experiment call."""

    config: ExperimentConfig
    trace_paths: list[Path]
    summary_path: Path | None = None
    grid: np.ndarray | None = None
    mean_abs_error: np.ndarray | None = None
    max_abs_error: np.ndarray | None = None
    fraction_within_bound: float | None = None


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: Path, header: str, rows, comments: Sequence[str]) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def emit_csv(trace: ErrorTrace, path: str | Path) -> Path:
    """Write one trace as CSV: config comments, pinned header, 17-digit floats."""
    path = Path(path)
    comments = trace.config.comment_lines() if trace.config is not None else []
    _write_csv(path, TRACE_HEADER, trace.rows(), comments)
    return path


def _budget(config: ExperimentConfig) -> PrivacyBudget:
    return PrivacyBudget(config.epsilon, config.delta)


def _plan(config: ExperimentConfig, trial_seed: int) -> NoisePlan:
    return NoisePlan(
        _budget(config),
        horizon=config.T,
        seed=trial_seed,
        mode=config.mode,
        dry_run=config.sigma_zero,
    )


def _scaled_counting_bounds(config: ExperimentConfig, sensitivity: float, union: int = 1) -> tuple[np.ndarray, np.ndarray]:
    # per-coordinate counter bounds at tail level 1/(6 T union)
    T = config.T
    scale = math.sqrt(math.log(6.0 * T * union))
    c = gaussian_constant(_budget(config)) * sensitivity
    t = np.arange(1, T + 1, dtype=np.float64)
    exact = c * counting_factor(T).sq_prefix * scale
    analytic = c * (1.0 + np.log(t) / math.pi) * scale
    return exact, analytic


def read_graph_updates(path: str | Path) -> list[dict[tuple[int, int], float]]:
    """Parse a `t,u,v,weight` CSV into per-step update maps (1-based t)."""
    by_step: dict[int, dict[tuple[int, int], float]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        required = {"t", "u", "v", "weight"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"graph updates file must have columns t,u,v,weight, got {reader.fieldnames}")
        for row in reader:
            t = int(row["t"])
            if t < 1:
                raise ValueError(f"update steps are 1-based, got t={t}")
            by_step.setdefault(t, {})[(int(row["u"]), int(row["v"]))] = float(row["weight"])
    if not by_step:
        return []
    return [by_step.get(t, {}) for t in range(1, max(by_step) + 1)]


def _cyclic_updates(config: ExperimentConfig) -> list[dict[tuple[int, int], float]]:
    slots = edge_slots(config.vertices)
    return [
        {slots[(t - 1) % len(slots)]: ((7 * t + 3) % 11) / 10.0}
        for t in range(1, config.T + 1)
    ]


def _trace_for_trial(config: ExperimentConfig, trial_seed: int) -> ErrorTrace:
    T = config.T
    plan = _plan(config, trial_seed)
    steps = np.arange(1, T + 1)
    true = np.zeros(T)
    released = np.zeros(T)

    if config.task == "count":
        state = BinaryTreeState(plan) if config.mechanism == "binary-tree" else CounterState(plan)
        for t in range(1, T + 1):
            released[t - 1] = state.step(1)
            true[t - 1] = t
        exact, analytic = counting_bound_curve(T, plan.budget)

    elif config.task == "average":
        if config.mechanism == "binary-tree":
            tree = BinaryTreeState(plan)
            for t in range(1, T + 1):
                released[t - 1] = tree.step(1) / t
                true[t - 1] = 1.0
        else:
            state = AverageState(plan)
            for t in range(1, T + 1):
                released[t - 1] = state.step(1)
                true[t - 1] = 1.0
        exact, analytic = averaging_bound_curve(T, plan.budget)

    elif config.task == "histogram":
        hist = HistogramState(plan, config.universe)
        for t in range(1, T + 1):
            out = hist.step((t - 1) % config.universe)
            worst = int(np.argmax(np.abs(out - hist.true_counts)))
            true[t - 1] = hist.true_counts[worst]
            released[t - 1] = out[worst]
        exact, analytic = _scaled_counting_bounds(config, 1.0)

    elif config.task == "graph-cut":
        updates = read_graph_updates(config.input_path) if config.input_path else _cyclic_updates(config)
        if config.input_path:
            if len(updates) > T:
                raise ValueError(f"updates file spans {len(updates)} steps but T={T}")
            T = len(updates)
            steps, true, released = steps[:T], true[:T], released[:T]
        stream = GraphStream(plan, config.vertices)
        S = {0}
        P = set(range(1, config.vertices))
        for t in range(1, T + 1):
            graph = stream.step(updates[t - 1])
            released[t - 1] = graph.cut_value(S, P)
            true[t - 1] = stream.true_graph.cut_value(S, P)
        bound = np.array([cut_error_bound(plan, t, len(S), len(P)) for t in range(1, T + 1)])
        exact = analytic = bound

    elif config.task == "graph-fn":
        estimator = GraphFunctionEstimator(plan, EdgeCountProvider())
        slots = edge_slots(config.vertices)
        for t in range(1, T + 1):
            u, v = slots[(t - 1) % len(slots)]
            released[t - 1] = estimator.step(u, v, ((7 * t + 3) % 11) / 10.0)
            true[t - 1] = estimator.true_value
        exact, analytic = _scaled_counting_bounds(config, 1.0)

    elif config.task in ("substring", "episode"):
        size = len(config.alphabet)
        if config.task == "substring":
            state = SubstringCounterState(plan, config.alphabet, config.ell)
            sensitivity = float(config.ell)
        else:
            state = EpisodeCounterState(plan, config.alphabet, config.ell)
            sensitivity = 2.0 * math.sqrt(size ** (config.ell - 1) * config.ell)
        for t in range(1, T + 1):
            out = state.step(config.alphabet[(t - 1) % size])
            worst = int(np.argmax(np.abs(out - state.true_counts)))
            true[t - 1] = state.true_counts[worst]
            released[t - 1] = out[worst]
        exact, analytic = _scaled_counting_bounds(config, sensitivity, union=size**config.ell)

    else:
        raise ValueError(f"task {config.task!r} does not produce an error trace")

    return ErrorTrace(
        t=steps,
        true=true,
        released=released,
        bound_exact=np.asarray(exact)[:T],
        bound_analytic=np.asarray(analytic)[:T],
        config=config,
    )


def bounds_table(T_list: Sequence[int]) -> list[tuple]:
    """Rows (T, ours_upper, gamma_hat, lower, upper, ours-upper, ours-lower)."""
    rows = []
    for T in T_list:
        report = mathias_bounds(int(T))
        rows.append(
            (
                report.T,
                report.ours_upper,
                report.gamma_hat,
                report.mathias_lower,
                report.mathias_upper,
                report.ours_upper - report.mathias_upper,
                report.ours_upper - report.mathias_lower,
            )
        )
    return rows


def uniform_absolute_risk(theta: float) -> float:
    """E|X - theta| for X ~ Uniform[0,1]: the curve the learner approximates."""
    return theta * theta - theta + 0.5


def _run_ldp_trial(config: ExperimentConfig, trial_seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    grid = Grid(config.clients, config.epsilon, config.delta)
    budget = _budget(config)
    data_rng = np.random.Generator(
        np.random.Philox(key=np.array([trial_seed, _DATA_OFFSET], dtype=np.uint64))
    )
    data = data_rng.random(config.clients)
    messages = [
        client_encode(d, grid, budget, trial_seed, client_index=i, dry_run=config.sigma_zero)
        for i, d in enumerate(data)
    ]
    estimate = server_aggregate(messages, grid)
    thetas = np.linspace(0.0, 1.0, config.theta_points)
    curve = np.array([risk_curve(estimate, theta) for theta in thetas])
    return thetas, curve[:, 0], curve[:, 1]


def _run_ldp(config: ExperimentConfig, out_dir: Path) -> ExperimentResult:
    bound = median_risk_bound(config.clients, config.epsilon, config.delta)
    comments = config.comment_lines()
    paths = []
    f_curves = []
    thetas = np.linspace(0.0, 1.0, config.theta_points)
    for k in range(config.trials):
        thetas, g_vals, f_vals = _run_ldp_trial(config, config.seed + k)
        f_curves.append(f_vals)
        path = out_dir / f"curve_{k:03d}.csv"
        _write_csv(path, LDP_HEADER, zip(thetas, g_vals, f_vals, [bound] * len(thetas)), comments)
        paths.append(path)
    errors = np.abs(np.array(f_curves) - np.array([uniform_absolute_risk(th) for th in thetas]))
    within = np.mean(errors.max(axis=1) <= bound)
    summary_path = out_dir / "summary.csv"
    _write_csv(
        summary_path,
        LDP_SUMMARY_HEADER,
        zip(thetas, errors.mean(axis=0), errors.max(axis=0), [bound] * len(thetas)),
        comments + [f"fraction_within_bound={within:.17g}"],
    )
    return ExperimentResult(
        config=config,
        trace_paths=paths,
        summary_path=summary_path,
        grid=thetas,
        mean_abs_error=errors.mean(axis=0),
        max_abs_error=errors.max(axis=0),
        fraction_within_bound=float(within),
    )


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run `trials` seeded runs, write per-trial files plus a summary.

    Trial k uses seed ``seed + k``.  A trial lies within bound when its
    absolute error is at most bound_exact at every step simultaneously.
    """
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    if config.task == "bounds":
        path = out_dir / "bounds.csv"
        _write_csv(path, BOUNDS_HEADER, bounds_table(config.T_list), config.comment_lines())
        return ExperimentResult(config=config, trace_paths=[path])

    if config.task == "ldp-median":
        return _run_ldp(config, out_dir)

    traces = []
    paths = []
    for k in range(config.trials):
        trace = _trace_for_trial(config, config.seed + k)
        paths.append(emit_csv(trace, out_dir / f"trace_{k:03d}.csv"))
        traces.append(trace)
    errors = np.stack([trace.abs_error for trace in traces])
    mean_err = errors.mean(axis=0)
    max_err = errors.max(axis=0)
    within = np.mean([np.all(trace.abs_error <= trace.bound_exact) for trace in traces])
    summary_path = out_dir / "summary.csv"
    first = traces[0]
    _write_csv(
        summary_path,
        SUMMARY_HEADER,
        zip(first.t, mean_err, max_err, first.bound_exact, first.bound_analytic),
        config.comment_lines() + [f"fraction_within_bound={within:.17g}"],
    )
    return ExperimentResult(
        config=config,
        trace_paths=paths,
        summary_path=summary_path,
        grid=first.t.astype(np.float64),
        mean_abs_error=mean_err,
        max_abs_error=max_err,
        fraction_within_bound=float(within),
    )
