"""Horizontal partitioning strategies: grid, angular, sliced and random."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset

STRATEGIES = ("grid", "angular", "sliced", "random")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionPlan:
    strategy: str
    p: int
    assignment: np.ndarray  # partition index per dataset row, dataset order
    ids: np.ndarray
    m: int | None = None

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.size and (a.min() < 0 or a.max() >= self.p):
            raise ValueError("partition index out of range")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    @property
    def assignment_map(self) -> dict[int, int]:
        return {int(i): int(k) for i, k in zip(self.ids, self.assignment)}

    def members(self) -> list[np.ndarray]:
        """Row positions for each partition, in dataset order."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.searchsorted(self.assignment[order], np.arange(self.p + 1))
        return [order[bounds[k]:bounds[k + 1]] for k in range(self.p)]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.p)


def int_root(p: int, k: int) -> int:
    """Largest m >= 1 with m**k <= p."""
    if k <= 0:
        return 1
    m = max(1, int(round(p ** (1.0 / k))))
    while m > 1 and m ** k > p:
        m -= 1
    while (m + 1) ** k <= p:
        m += 1
    return m


# ------------------------------------------------------------------------ grid

def grid_indices(values: np.ndarray, m: int) -> np.ndarray:
    cells = np.minimum(np.floor(values * m).astype(np.int64), m - 1)
    weights = m ** np.arange(values.shape[1], dtype=np.int64)
    return cells @ weights


def grid_assign(t, m: int) -> int:
    vals = np.asarray(getattr(t, "values", t), dtype=float)
    return int(grid_indices(vals[None, :], m)[0])


@dataclass(frozen=True)
class GridCellBounds:
    m: int
    d: int
    mins: np.ndarray
    maxs: np.ndarray
    occupied: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, m: int, d: int, occupied=None) -> "GridCellBounds":
        ncell = m ** d
        coords = np.stack(np.unravel_index(np.arange(ncell), (m,) * d, order="F"), axis=1)
        mins = coords / m
        maxs = (coords + 1) / m
        occ = np.zeros(ncell, dtype=bool) if occupied is None else np.asarray(occupied, dtype=bool)
        return cls(m, d, mins, maxs, occ)

    @classmethod
    def from_dataset(cls, r: Dataset, m: int) -> "GridCellBounds":
        occ = np.zeros(m ** r.d, dtype=bool)
        occ[grid_indices(r.values, m)] = True
        return cls.build(m, r.d, occ)


def grid_filter(cells: GridCellBounds) -> set[int]:
    """Cells whose min corner is dominated by the max corner of an occupied cell."""
    occ = np.flatnonzero(cells.occupied)
    if occ.size == 0:
        return set()
    hi = cells.maxs[occ]
    pruned = set()
    for j in range(cells.mins.shape[0]):
        lo = cells.mins[j]
        dom = np.all(hi <= lo, axis=1) & np.any(hi < lo, axis=1)
        if dom.any():
            pruned.add(j)
    return pruned


# --------------------------------------------------------------------- angular

def angular_indices(values: np.ndarray, m: int) -> np.ndarray:
    n, d = values.shape
    sq = values ** 2
    # tail[:, i] = sqrt(sum_{j > i} t_j^2)
    tail = np.sqrt(np.cumsum(sq[:, ::-1], axis=1)[:, ::-1][:, 1:])
    phi = np.arctan2(tail, values[:, :-1])
    cells = np.minimum(np.floor(2.0 * phi / np.pi * m).astype(np.int64), m - 1)
    weights = m ** np.arange(d - 1, dtype=np.int64)
    idx = cells @ weights
    idx[~np.any(values > 0, axis=1)] = 0
    return idx


def angular_assign(t, m: int) -> int:
    vals = np.asarray(getattr(t, "values", t), dtype=float)
    return int(angular_indices(vals[None, :], m)[0])


# ---------------------------------------------------------------------- sliced

def sliced_ranks_to_partition(N: int, p: int) -> np.ndarray:
    """Partition for 1-based ranks 1..N."""
    if N <= 1:
        return np.zeros(N, dtype=np.int64)
    i = np.arange(N, dtype=np.int64)
    return np.minimum((i * p) // (N - 1), p - 1)


def sliced_assign(r: Dataset, p: int, dim: int = 0) -> PartitionPlan:
    if p < 1:
        raise ConfigError("p must be >= 1")
    if not 0 <= dim < r.d:
        raise ConfigError(f"slice dimension {dim} out of range for d={r.d}")
    order = np.lexsort((r.ids, r.values[:, dim]))
    assignment = np.empty(len(r), dtype=np.int64)
    assignment[order] = sliced_ranks_to_partition(len(r), p)
    return PartitionPlan("sliced", p, assignment, r.ids)


# ---------------------------------------------------------------------- random

def random_assign(r: Dataset, p: int, seed=0) -> PartitionPlan:
    if p < 1:
        raise ConfigError("p must be >= 1")
    rng = np.random.default_rng(seed)
    return PartitionPlan("random", p, rng.integers(0, p, size=len(r)), r.ids)


# ----------------------------------------------------------------------- plans

def make_plan(r: Dataset, strategy: str, p: int, seed=0, slice_dim: int = 0) -> PartitionPlan:
    """Build a plan. Grid and angular round ``p`` down to a power of the slice count."""
    if p < 1:
        raise ConfigError("p must be >= 1")
    if strategy == "grid":
        m = int_root(p, r.d)
        return PartitionPlan("grid", m ** r.d, grid_indices(r.values, m), r.ids, m=m)
    if strategy == "angular":
        m = int_root(p, r.d - 1)
        return PartitionPlan("angular", m ** (r.d - 1), angular_indices(r.values, m), r.ids, m=m)
    if strategy == "sliced":
        return sliced_assign(r, p, slice_dim)
    if strategy == "random":
        return random_assign(r, p, seed)
    raise ConfigError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")


def grid_filter_mask(r: Dataset, plan: PartitionPlan) -> np.ndarray:
    """Rows that survive grid filtering."""
    if plan.strategy != "grid":
        raise ConfigError("grid filtering needs a grid plan")
    occ = np.zeros(plan.p, dtype=bool)
    occ[plan.assignment] = True
    pruned = grid_filter(GridCellBounds.build(plan.m, r.d, occ))
    if not pruned:
        return np.ones(len(r), dtype=bool)
    return ~np.isin(plan.assignment, np.fromiter(pruned, dtype=np.int64))


__all__ = [
    "PartitionPlan", "GridCellBounds", "ConfigError", "STRATEGIES",
    "grid_assign", "grid_filter", "angular_assign", "sliced_assign", "random_assign",
    "make_plan", "grid_filter_mask", "int_root",
]
