import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from flexsky import FDomContext, WeightConstraintSet, example_dataset

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# lines collected by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def toy():
    r, labels = example_dataset()
    return r, labels


@pytest.fixture
def w1_ge_w2():
    return WeightConstraintSet.ordering(2, 0, 1)


@pytest.fixture
def toy_ctx(w1_ge_w2):
    return FDomContext.from_constraints(w1_ge_w2)


def names(ids, labels):
    inv = {v: k for k, v in labels.items()}
    return {inv[i] for i in ids}


def random_constraints(rng, d, max_rows=3):
    """Random feasible constraint set, or None when the draw is infeasible."""
    from flexsky import InfeasibleConstraints

    k = int(rng.integers(0, max_rows + 1))
    rows = tuple(tuple(rng.normal(size=d)) for _ in range(k))
    try:
        return WeightConstraintSet(d, rows)
    except InfeasibleConstraints:
        return None
