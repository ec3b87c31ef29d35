"""Sequential flexible-skyline operators.

``nd_sve1f`` is a one-phase, presorted window scan for ND. ``po_popi2`` filters
an ND set down to PO by solving margin LPs over a doubling prefix of the
competitors. The array-level helpers are what the parallel engine calls.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import window_scan
from .core import Dataset, Tuple, WeightConstraintSet, WeightVector
from .fdominance import FDomContext, presort_order
from .lp import OPTIMAL, linprog_max

PO_TOL = 1e-9


# --------------------------------------------------------------------------- ND

def sve1f_indices(S: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Positions of the non-F-dominated rows of the vertex-score matrix ``S``.

    ``order`` must be a presort order (see :func:`presort_order`), so that no
    row is F-dominated by a row coming later; a row is then kept iff nothing
    already in the window dominates it.
    """
    if S.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return window_scan(np.ascontiguousarray(S, dtype=float), np.asarray(order, dtype=np.int64))


def nd_sve1f(r: Dataset, ctx: FDomContext) -> set[int]:
    S = ctx.scores(r.values)
    order = presort_order(r.values, r.ids, S)
    return {int(r.ids[i]) for i in sve1f_indices(S, order)}


# --------------------------------------------------------------------------- LP

@dataclass(frozen=True)
class LpProblem:
    """Best worst-case margin of a candidate against its competitors.

    maximize eps over w in the weight polytope subject to
    ``(s - t) @ w >= eps`` for every competitor s. The weight is written as a
    convex combination of the polytope vertices, so the constraint rows are
    the vertex-score differences ``margins[k, v] = score(v, s_k) - score(v, t)``.
    """

    margins: np.ndarray
    vertices: np.ndarray

    @classmethod
    def build(cls, t, competitors: Iterable, ctx: FDomContext) -> "LpProblem":
        tv = t.as_array() if isinstance(t, Tuple) else np.asarray(t, dtype=float)
        comp = [c.as_array() if isinstance(c, Tuple) else np.asarray(c, dtype=float)
                for c in competitors]
        comp_arr = np.array(comp, dtype=float).reshape(len(comp), ctx.d)
        return cls(ctx.scores(comp_arr) - ctx.scores(tv), ctx.V)


@dataclass(frozen=True)
class LpSolution:
    status: str
    w: WeightVector | None
    eps: float


def _game_value(M: np.ndarray):
    """Value of max over mixtures x of min over rows of ``M @ x``, plus the mixture."""
    shift = 1.0 - float(M.min())
    Mp = M + shift
    k, nv = Mp.shape
    # dual of the game LP: max 1'z s.t. Mp' z <= 1, z >= 0
    res = linprog_max(np.ones(k), A_ub=Mp.T, b_ub=np.ones(nv))
    if res.status != OPTIMAL:
        return res.status, None, np.nan
    value = res.objective
    y = np.clip(res.duals, 0.0, None)
    mix = y / y.sum() if y.sum() > 0 else np.full(nv, 1.0 / nv)
    return OPTIMAL, mix, 1.0 / value - shift


def lp_solve(p: LpProblem) -> LpSolution:
    M = np.asarray(p.margins, dtype=float)
    V = np.asarray(p.vertices, dtype=float)
    if M.shape[0] == 0:
        w = V.mean(axis=0)
        return LpSolution(OPTIMAL, WeightVector(tuple(w / w.sum())), float("inf"))
    status, mix, eps = _game_value(M)
    if status != OPTIMAL:
        return LpSolution(status, None, float("nan"))
    w = mix @ V
    return LpSolution(OPTIMAL, WeightVector(tuple(w / w.sum())), float(eps))


def _margin(M: np.ndarray, accept_above: float = np.inf, reject_below: float = -np.inf) -> float:
    """Game value of ``M``; returns a bound instead when it already decides the test.

    The value lies between the best pure-vertex row minimum and the smallest
    row maximum. If the lower bound exceeds ``accept_above`` or the upper bound
    falls below ``reject_below`` that bound is returned without solving.
    """
    if M.shape[0] == 0:
        return float("inf")
    lower = float(M.min(axis=0).max())
    if lower > accept_above:
        return lower
    upper = float(M.max(axis=1).min())
    if upper < reject_below or upper == lower:
        return upper
    status, _, eps = _game_value(M)
    if status != OPTIMAL:
        raise RuntimeError(f"margin LP ended with status {status}")
    return eps


def is_potentially_optimal(t, competitors: Sequence, C: WeightConstraintSet,
                           ctx: FDomContext | None = None) -> bool:
    """Whether some function of the family makes ``t`` strictly better than every competitor."""
    ctx = ctx or FDomContext.from_constraints(C)
    return lp_solve(LpProblem.build(t, competitors, ctx)).eps > PO_TOL


# --------------------------------------------------------------------------- PO

def popi2_mask(S: np.ndarray, order: np.ndarray, candidates: np.ndarray,
               strict: bool = True) -> np.ndarray:
    """Which candidate rows are potentially optimal against all other rows of ``S``.

    Competitors are taken in presort order; the LP is solved on the first 2,
    4, 8, ... of them and a candidate is dropped as soon as one round fails.
    With ``strict=False`` ties count as optimal (margin >= -tol), which is
    what the local phase of a partitioned run needs.
    """
    keep = np.zeros(len(candidates), dtype=bool)
    # accept iff eps > hi (strict) or eps >= lo (ties allowed); bounds may stand in for eps
    hi, lo = (PO_TOL, np.nextafter(PO_TOL, np.inf)) if strict else (-PO_TOL, -PO_TOL)
    for j, i in enumerate(candidates):
        comp = order[order != i]
        k = 2
        while True:
            eps = _margin(S[comp[:k]] - S[i], accept_above=hi, reject_below=lo)
            ok = eps > PO_TOL if strict else eps >= -PO_TOL
            if not ok:
                break
            if k >= comp.size:
                keep[j] = True
                break
            k *= 2
    return keep


def popi2_indices(S: np.ndarray, order: np.ndarray, strict: bool = True) -> np.ndarray:
    cand = np.arange(S.shape[0])
    return cand[popi2_mask(S, order, cand, strict)]


def po_popi2(nd, C: WeightConstraintSet | None, ctx: FDomContext) -> set[int]:
    """PO of an ND set. The input is trusted to be ND already."""
    r = nd if isinstance(nd, Dataset) else Dataset.from_tuples(nd, d=ctx.d)
    if C is not None and C.d != ctx.d:
        raise ValueError("constraint set and context disagree on dimensionality")
    S = ctx.scores(r.values)
    order = presort_order(r.values, r.ids, S)
    return {int(r.ids[i]) for i in popi2_indices(S, order)}
