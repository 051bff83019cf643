import sys
import time

import numpy as np
import pytest

from continualdp import AverageState, BinaryTreeState, CounterState, NoisePlan, PrivacyBudget

# budget used throughout the benchmark-style suites
FIG_EPSILON = 0.8
FIG_DELTA = 1e-10

# wall-clock cost of building each shared Monte Carlo fixture, so the
# acceptance checks can charge simulation time against their runtime budgets
FIXTURE_SECONDS: dict[str, float] = {}


@pytest.fixture(scope="session")
def fig_budget():
    return PrivacyBudget(FIG_EPSILON, FIG_DELTA)


@pytest.fixture(scope="session")
def fixture_seconds():
    return FIXTURE_SECONDS


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # replay the acceptance verdict lines after the run so they stay visible
    # under fd-level capture
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", [])
    if verdicts:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in verdicts:
            terminalreporter.write_line(line)


def _error_matrix(name, state_factory, runs, T):
    start = time.perf_counter()
    errs = np.empty((runs, T))
    for s in range(runs):
        state = state_factory(s)
        for t in range(1, T + 1):
            errs[s, t - 1] = abs(state.step(1) - state.true_value)
    FIXTURE_SECONDS[name] = time.perf_counter() - start
    return errs


@pytest.fixture(scope="session")
def counting_errors_16k(fig_budget):
    """|released - true| for 200 seeded all-ones counter runs at T = 2^14."""
    T = 1 << 14
    return _error_matrix(
        "counting_errors_16k",
        lambda s: CounterState(NoisePlan(fig_budget, horizon=T, seed=s)),
        200,
        T,
    )


@pytest.fixture(scope="session")
def tree_errors_16k(fig_budget):
    """|released - true| for 50 seeded all-ones binary-tree runs at T = 2^14."""
    T = 1 << 14
    return _error_matrix(
        "tree_errors_16k",
        lambda s: BinaryTreeState(NoisePlan(fig_budget, horizon=T, seed=s)),
        50,
        T,
    )


@pytest.fixture(scope="session")
def averaging_errors_4k(fig_budget):
    """|released - true| for 200 seeded all-ones running-mean runs at T = 2^12."""
    T = 1 << 12
    return _error_matrix(
        "averaging_errors_4k",
        lambda s: AverageState(NoisePlan(fig_budget, horizon=T, seed=s)),
        200,
        T,
    )
