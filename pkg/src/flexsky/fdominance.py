"""F-dominance over a family of linear scoring functions.

For linear scores, checking every vertex of the weight polytope is the same
as checking every function in the family, so all tests below work on the
(n, n_vertices) matrix of vertex scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import dominated_any
from .core import Dataset, DimensionMismatch, Tuple, WeightConstraintSet, WeightVector, _vals
from .polytope import PolytopeVertices, enumerate_vertices, sorting_weight

STRICT_TOL = 1e-12


@dataclass(frozen=True)
class FDomContext:
    vertices: PolytopeVertices
    sort_w: WeightVector

    @classmethod
    def from_constraints(cls, C: WeightConstraintSet) -> "FDomContext":
        V = enumerate_vertices(C)
        return cls(V, sorting_weight(V))

    @property
    def d(self) -> int:
        return len(self.sort_w)

    @property
    def V(self) -> np.ndarray:
        return self.vertices.as_array()

    def scores(self, values) -> np.ndarray:
        """Vertex scores of one point (1-d) or of a batch of rows (2-d)."""
        values = np.asarray(values, dtype=float)
        if values.shape[-1] != self.d:
            raise DimensionMismatch(f"expected {self.d}-d data, got {values.shape[-1]}-d")
        return values @ self.V.T


def f_dominates(t, s, ctx: FDomContext) -> bool:
    st, ss = ctx.scores(_vals(t)), ctx.scores(_vals(s))
    return bool(np.all(st <= ss) and np.any(ss - st > STRICT_TOL))


def in_dominance_region(t, q, ctx: FDomContext) -> bool:
    """Whether point ``q`` lies in the F-dominance region of ``t``."""
    return f_dominates(t, q, ctx)


def sort_key(t: Tuple, ctx: FDomContext) -> tuple[float, tuple[float, ...], int]:
    """Presort key: centroid score, then values, then id.

    The centroid score is computed as the mean of the vertex scores, so an
    F-dominating tuple never gets a larger primary key even after rounding.
    """
    return (float(ctx.scores(t.values).mean()), tuple(t.values), t.id)


def presort_order(values: np.ndarray, ids: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """Indices sorting rows by (mean vertex score, values..., id)."""
    primary = scores.mean(axis=1)
    keys = [ids] + [values[:, j] for j in range(values.shape[1] - 1, -1, -1)] + [primary]
    return np.lexsort(keys)


def dominated_mask(cand: np.ndarray, dom: np.ndarray) -> np.ndarray:
    """For each row of ``cand`` (vertex scores), whether any row of ``dom`` F-dominates it."""
    cand = np.ascontiguousarray(cand, dtype=float)
    dom = np.ascontiguousarray(dom, dtype=float)
    if cand.shape[0] == 0 or dom.shape[0] == 0:
        return np.zeros(cand.shape[0], dtype=bool)
    return dominated_any(cand, dom)


def nd_bruteforce(r: Dataset, ctx: FDomContext) -> set[int]:
    """All-pairs F-dominance filter; quadratic reference."""
    S = ctx.scores(r.values)
    mask = dominated_mask(S, S)
    return {int(i) for i in r.ids[~mask]}
