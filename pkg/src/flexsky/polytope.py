"""Vertex enumeration for the weight polytope.

The polytope is ``{w : w >= 0, sum(w) = 1, a @ w >= 0 for each row a}``.
With d <= 7 and a handful of rows, trying every active set is cheap and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import InfeasibleConstraints, WeightConstraintSet, WeightVector

VERTEX_TOL = 1e-9


@dataclass(frozen=True)
class PolytopeVertices:
    vertices: tuple[WeightVector, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a polytope needs at least one vertex")

    def as_array(self) -> np.ndarray:
        """Vertices as an (n_vertices, d) array."""
        return np.array([v.w for v in self.vertices], dtype=float)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def _inequalities(C: WeightConstraintSet) -> np.ndarray:
    A = C.matrix()
    if A.size:
        norms = np.linalg.norm(A, axis=1)
        A = A[norms > 0] / norms[norms > 0, None]
    return np.vstack([A, np.eye(C.d)])


def enumerate_vertices(C: WeightConstraintSet) -> PolytopeVertices:
    d = C.d
    G = _inequalities(C)
    ones = np.ones((1, d))
    rhs = np.zeros(d)
    rhs[0] = 1.0
    found: list[np.ndarray] = []
    for active in combinations(range(G.shape[0]), d - 1):
        M = np.vstack([ones, G[list(active)]])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        try:
            w = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.any(G @ w < -VERTEX_TOL):
            continue
        w[np.abs(w) < VERTEX_TOL] = 0.0
        if any(np.all(np.abs(w - v) <= VERTEX_TOL) for v in found):
            continue
        found.append(w)
    if not found:
        raise InfeasibleConstraints()
    found.sort(key=lambda v: tuple(v))
    return PolytopeVertices(tuple(WeightVector(tuple(v / v.sum())) for v in found))


def sorting_weight(V: PolytopeVertices) -> WeightVector:
    """Centroid of the vertices; always a member of the polytope."""
    w = V.as_array().mean(axis=0)
    return WeightVector(tuple(w / w.sum()))
