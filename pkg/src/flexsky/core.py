"""Tuples, datasets, weight constraints, classical dominance and linear scoring.

Attributes are normalized to [0, 1] and smaller values are preferred.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .lp import OPTIMAL, linprog_max

WEIGHT_TOL = 1e-9


class DimensionMismatch(ValueError):
    pass


class InfeasibleConstraints(ValueError):
    def __init__(self, msg="infeasible constraints"):
        super().__init__(msg)


@dataclass(frozen=True)
class Tuple:
    id: int
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if self.id < 0:
            raise ValueError(f"tuple id must be non-negative, got {self.id}")
        for v in vals:
            if not (np.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"tuple {self.id}: value {v} outside [0, 1]")
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class Dataset:
    """An ordered relation of d-dimensional tuples backed by numpy arrays.

    ``values`` has shape (n, d) and ``ids`` shape (n,). Both are read-only
    views so a dataset can be shared with worker processes as-is.
    """

    def __init__(self, values, ids=None, d: int | None = None):
        arr = np.array(values, dtype=float)
        if arr.size == 0:
            if d is None:
                d = arr.shape[1] if arr.ndim == 2 else 2
            arr = arr.reshape(0, d)
        if arr.ndim != 2:
            raise ValueError("values must be a 2-d array")
        if d is not None and arr.shape[1] != d:
            raise DimensionMismatch(f"expected {d} columns, got {arr.shape[1]}")
        if arr.shape[1] < 2:
            raise ValueError("datasets need at least 2 dimensions")
        if not np.all(np.isfinite(arr)) or arr.min(initial=0.0) < 0.0 or arr.max(initial=0.0) > 1.0:
            raise ValueError("all values must be finite and in [0, 1]")
        if ids is None:
            ids = np.arange(arr.shape[0], dtype=np.int64)
        ids = np.array(ids, dtype=np.int64).reshape(-1)
        if ids.shape[0] != arr.shape[0]:
            raise ValueError("ids and values differ in length")
        if ids.size and ids.min() < 0:
            raise ValueError("ids must be non-negative")
        if np.unique(ids).size != ids.size:
            raise ValueError("ids must be unique")
        arr.setflags(write=False)
        ids.setflags(write=False)
        self.values = arr
        self.ids = ids

    @classmethod
    def from_tuples(cls, tuples: Iterable[Tuple], d: int | None = None) -> "Dataset":
        tuples = list(tuples)
        if tuples:
            dims = {t.d for t in tuples}
            if len(dims) != 1:
                raise DimensionMismatch("tuples have differing dimensionality")
            d = dims.pop() if d is None else d
        return cls([t.values for t in tuples], [t.id for t in tuples], d=d)

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.values.shape[0]

    def __iter__(self) -> Iterator[Tuple]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> Tuple:
        return Tuple(int(self.ids[i]), tuple(self.values[i]))

    def subset(self, index) -> "Dataset":
        index = np.asarray(index)
        return Dataset(self.values[index], self.ids[index], d=self.d)

    def by_ids(self, ids: Iterable[int]) -> "Dataset":
        pos = {int(t): i for i, t in enumerate(self.ids)}
        return self.subset(np.array([pos[int(t)] for t in ids], dtype=np.int64))

    def __repr__(self):
        return f"Dataset(n={len(self)}, d={self.d})"


@dataclass(frozen=True)
class WeightVector:
    w: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.w)
        if any(x < -WEIGHT_TOL for x in w) or abs(sum(w) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"{w} is not on the weight simplex")
        object.__setattr__(self, "w", w)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=float)

    def __len__(self):
        return len(self.w)


@dataclass(frozen=True)
class WeightConstraintSet:
    """Homogeneous constraints ``a @ w >= 0`` on top of the weight simplex.

    Construction fails with :class:`InfeasibleConstraints` when the
    resulting polytope is empty.
    """

    d: int
    rows: tuple[tuple[float, ...], ...] = field(default=())

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        rows = tuple(tuple(float(x) for x in r) for r in self.rows)
        for r in rows:
            if len(r) != self.d:
                raise DimensionMismatch(f"constraint row {r} has length {len(r)} != {self.d}")
        object.__setattr__(self, "rows", rows)
        if rows:
            A = self.matrix()
            norms = np.linalg.norm(A, axis=1)
            A = A / np.where(norms > 0, norms, 1.0)[:, None]
            res = linprog_max(np.zeros(self.d), A_ub=-A, b_ub=np.zeros(len(rows)),
                              A_eq=np.ones((1, self.d)), b_eq=[1.0])
            if res.status != OPTIMAL:
                raise InfeasibleConstraints()

    @classmethod
    def ordering(cls, d: int, *chain: int) -> "WeightConstraintSet":
        """Constraints ``w[chain[0]] >= w[chain[1]] >= ...`` (0-based indices)."""
        rows = []
        for hi, lo in zip(chain, chain[1:]):
            a = [0.0] * d
            a[hi] += 1.0
            a[lo] -= 1.0
            rows.append(a)
        return cls(d, tuple(rows))

    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(len(self.rows), self.d)

    def satisfied_by(self, w, tol: float = WEIGHT_TOL) -> bool:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.d,) or np.any(w < -tol) or abs(w.sum() - 1.0) > tol:
            return False
        return bool(np.all(self.matrix() @ w >= -tol))


def _vals(t) -> np.ndarray:
    if isinstance(t, Tuple):
        return t.as_array()
    if isinstance(t, WeightVector):
        return t.as_array()
    return np.asarray(t, dtype=float)


def dominates(t, s) -> bool:
    """Classical Pareto dominance, smaller is better."""
    a, b = _vals(t), _vals(s)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot compare {a.size}-d and {b.size}-d tuples")
    return bool(np.all(a <= b) and np.any(a < b))


def score(w, t) -> float:
    a, b = _vals(w), _vals(t)
    if a.shape != b.shape:
        raise DimensionMismatch(f"weight length {a.size} != tuple length {b.size}")
    return float(a @ b)


def skyline_bruteforce(r: Dataset) -> set[int]:
    """All-pairs skyline; quadratic, for reference use."""
    V = r.values
    out = set()
    for i in range(len(r)):
        dominated = np.all(V <= V[i], axis=1) & np.any(V < V[i], axis=1)
        if not dominated.any():
            out.add(int(r.ids[i]))
    return out


def example_dataset() -> tuple[Dataset, dict[str, int]]:
    """The nine-location toy relation (train station, chemist distances).

    Returns the dataset plus a mapping from letter labels to ids.
    """
    rows = {
        "a": (0.30, 0.80), "b": (0.55, 0.45), "c": (0.70, 0.30),
        "d": (0.40, 0.90), "e": (0.60, 0.20), "f": (0.60, 0.90),
        "g": (0.90, 0.15), "h": (0.50, 0.70), "i": (0.80, 0.10),
    }
    labels = {k: i for i, k in enumerate(rows)}
    return Dataset(list(rows.values())), labels


__all__: Sequence[str] = [
    "Tuple", "Dataset", "WeightVector", "WeightConstraintSet",
    "DimensionMismatch", "InfeasibleConstraints",
    "dominates", "score", "skyline_bruteforce", "example_dataset",
]
