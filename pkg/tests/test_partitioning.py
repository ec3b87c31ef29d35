import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from flexsky import ConfigError, Dataset, FDomContext, make_plan, nd_sve1f
from flexsky.partitioning import (STRATEGIES, GridCellBounds, angular_assign, grid_assign, grid_filter,
                                  grid_filter_mask, int_root, random_assign, sliced_assign)

from conftest import random_constraints


def test_grid_assign_examples():
    assert grid_assign((0.30, 0.80), 2) == 2
    assert grid_assign((1.0, 1.0), 2) == 3
    for m in (1, 2, 5):
        assert grid_assign((0.0, 0.0), m) == 0


def test_grid_filter_examples():
    occ = np.zeros(4, bool)
    occ[0] = True
    assert 3 not in grid_filter(GridCellBounds.build(2, 2, occ))
    occ = np.zeros(9, bool)
    occ[0] = True
    pruned = grid_filter(GridCellBounds.build(3, 2, occ))
    assert 8 in pruned  # cell (2, 2)
    assert 4 not in pruned  # cell (1, 1) touches (0, 0) at one corner only
    assert grid_filter(GridCellBounds.build(3, 2)) == set()


def test_angular_assign_examples():
    assert angular_assign((1.0, 0.5), 2) == 0
    assert angular_assign((0.5, 1.0), 2) == 1
    assert angular_assign((0.7, 0.0), 2) == 0
    assert angular_assign((0.0, 0.0, 0.0), 3) == 0
    # on the second axis the angle is pi/2 and the index is clamped
    assert angular_assign((0.0, 0.4), 2) == 1


def test_sliced_examples():
    r = Dataset(np.column_stack([np.linspace(0.1, 0.9, 9), np.zeros(9)]))
    plan = sliced_assign(r, 3)
    assert plan.assignment.tolist() == [0, 0, 0, 1, 1, 1, 2, 2, 2]
    assert set(sliced_assign(r, 1).assignment.tolist()) == {0}
    two = Dataset([[0.9, 0.1], [0.2, 0.3]])
    assert sliced_assign(two, 2).assignment.tolist() == [1, 0]


def test_sliced_dimension_and_ties():
    r = Dataset([[0.5, 0.9], [0.5, 0.1], [0.1, 0.5]], ids=[4, 2, 9])
    assert sliced_assign(r, 3, dim=0).assignment.tolist() == [2, 1, 0]
    assert sliced_assign(r, 3, dim=1).assignment.tolist() == [2, 0, 1]
    with pytest.raises(ConfigError):
        sliced_assign(r, 2, dim=2)


def test_random_plan():
    r = Dataset(np.random.default_rng(0).random((10_000, 2)))
    assert set(random_assign(r, 1, seed=3).assignment.tolist()) == {0}
    a, b = random_assign(r, 10, seed=5), random_assign(r, 10, seed=5)
    assert np.array_equal(a.assignment, b.assignment)
    sigma = np.sqrt(10_000 * 0.1 * 0.9)
    assert np.all(np.abs(a.sizes() - 1000) <= 5 * sigma)


def test_int_root_and_plan_sizes():
    assert int_root(100, 4) == 3
    assert int_root(16, 4) == 2
    assert int_root(1, 3) == 1
    assert int_root(27, 3) == 3
    r = Dataset(np.random.default_rng(1).random((50, 3)))
    assert make_plan(r, "grid", 30).p == 27
    assert make_plan(r, "angular", 30).p == 25
    assert make_plan(r, "sliced", 30).p == 30
    with pytest.raises(ConfigError):
        make_plan(r, "diagonal", 4)
    with pytest.raises(ConfigError):
        make_plan(r, "grid", 0)


unit = st.floats(0.0, 1.0, allow_nan=False)


@given(arrays(float, st.tuples(st.integers(2, 80), st.integers(2, 4)), elements=unit),
       st.sampled_from(STRATEGIES), st.integers(1, 20))
def test_plans_cover_disjointly(X, strategy, p):
    r = Dataset(X)
    plan = make_plan(r, strategy, p, seed=1)
    members = plan.members()
    rows = np.concatenate(members)
    assert sorted(rows.tolist()) == list(range(len(r)))
    assert plan.sizes().sum() == len(r)
    assert plan.assignment_map == {int(i): int(k) for i, k in zip(r.ids, plan.assignment)}
    if strategy == "sliced":
        assert np.ptp(plan.sizes()) <= 1


def test_sliced_balance_exhaustive():
    from flexsky.partitioning import sliced_ranks_to_partition
    for N in range(2, 120):
        for p in range(1, 40):
            assert np.ptp(np.bincount(sliced_ranks_to_partition(N, p), minlength=p)) <= 1


@given(st.integers(0, 10_000), st.integers(1, 40))
def test_grid_filter_sound(seed, p):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    C = random_constraints(rng, d)
    if C is None:
        return
    ctx = FDomContext.from_constraints(C)
    if not np.all(ctx.V.max(axis=0) > 0):
        return
    r = Dataset(rng.random((int(rng.integers(2, 200)), d)) ** 2)
    plan = make_plan(r, "grid", p)
    keep = grid_filter_mask(r, plan)
    nd = nd_sve1f(r, ctx)
    assert nd == nd_sve1f(r.subset(np.flatnonzero(keep)), ctx)
    assert nd <= set(r.ids[keep].tolist())
