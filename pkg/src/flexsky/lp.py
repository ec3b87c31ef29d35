"""Small dense two-phase simplex solver.

Problems handled here have at most a few thousand columns and a handful of
rows, so a full tableau in numpy is both simple and fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

PIVOT_TOL = 1e-11
FEAS_TOL = 1e-9


class CyclingError(RuntimeError):
    """Raised when the simplex exceeds its iteration cap."""


@dataclass
class LinprogResult:
    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    # duals of the <= rows, sign convention: y >= 0 for a binding <= row
    duals: np.ndarray | None = None
    iterations: int = 0


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])
    basis[row] = col


def _run_simplex(T, basis, allowed, max_iter, degenerate_switch=50):
    """Maximize with the objective row stored last as reduced costs.

    Entering column: most negative reduced cost (Dantzig) until the
    objective stalls for `degenerate_switch` pivots, then Bland's rule.
    """
    m = T.shape[0] - 1
    it = 0
    stall = 0
    bland = False
    last_obj = T[-1, -1]
    while True:
        red = T[-1, :-1]
        cand = np.flatnonzero((red < -PIVOT_TOL) & allowed)
        if cand.size == 0:
            return OPTIMAL, it
        if bland:
            col = int(cand[0])
        else:
            col = int(cand[np.argmin(red[cand])])
        colv = T[:m, col]
        pos = colv > PIVOT_TOL
        if not pos.any():
            return UNBOUNDED, it
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colv[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, abs(best)))
        row = int(ties[np.argmin(basis[ties])])
        _pivot(T, basis, row, col)
        it += 1
        if it > max_iter:
            raise CyclingError(f"simplex exceeded {max_iter} iterations")
        obj = T[-1, -1]
        if obj <= last_obj + 1e-14:
            stall += 1
            if stall >= degenerate_switch:
                bland = True
        else:
            stall = 0
            last_obj = obj


def linprog_max(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter=None):
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Returns a :class:`LinprogResult`. Phase one is skipped when every row
    is a ``<=`` row with a non-negative right-hand side.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float).ravel()
    if A_ub.shape != (b_ub.size, n) or A_eq.shape != (b_eq.size, n):
        raise ValueError("constraint shapes do not match the objective")
    m_ub, m_eq = b_ub.size, b_eq.size
    m = m_ub + m_eq
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000

    flip_ub = b_ub < 0
    A = np.vstack([A_ub, A_eq])
    b = np.concatenate([b_ub, b_eq])
    sign = np.ones(m)
    sign[:m_ub][flip_ub] = -1.0
    sign[m_ub:][b_eq < 0] = -1.0
    A = A * sign[:, None]
    b = b * sign

    # columns: x | slack (one per ub row) | artificial (flipped ub rows and eq rows)
    needs_art = np.concatenate([flip_ub, np.ones(m_eq, dtype=bool)])
    art_rows = np.flatnonzero(needs_art)
    n_art = art_rows.size
    ncol = n + m_ub + n_art
    T = np.zeros((m + 1, ncol + 1))
    T[:m, :n] = A
    T[np.arange(m_ub), n + np.arange(m_ub)] = sign[:m_ub]
    T[art_rows, n + m_ub + np.arange(n_art)] = 1.0
    T[:m, -1] = b
    basis = np.empty(m, dtype=np.int64)
    slack_basic = ~needs_art[:m_ub]
    basis[:m_ub][slack_basic] = n + np.flatnonzero(slack_basic)
    basis[art_rows] = n + m_ub + np.arange(n_art)

    iters = 0
    real_cols = np.zeros(ncol, dtype=bool)
    real_cols[: n + m_ub] = True
    if n_art:
        # phase one: maximize -sum(artificials)
        T[-1, n + m_ub:ncol] = 1.0
        for r in art_rows:
            T[-1] -= T[r]
        status, it = _run_simplex(T, basis, np.ones(ncol, dtype=bool), max_iter)
        iters += it
        if T[-1, -1] < -FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
            return LinprogResult(INFEASIBLE, iterations=iters)
        # drive artificials out of the basis; drop redundant rows
        keep = np.ones(m + 1, dtype=bool)
        for r in range(m):
            if basis[r] >= n + m_ub:
                nz = np.flatnonzero(np.abs(T[r, : n + m_ub]) > PIVOT_TOL)
                if nz.size:
                    _pivot(T, basis, r, int(nz[0]))
                else:
                    keep[r] = False
        T = T[keep]
        basis = basis[keep[:m]]
        m = basis.size

    T[-1] = 0.0
    T[-1, :n] = -c
    for r in range(m):
        if basis[r] < n and c[basis[r]] != 0.0:
            T[-1] += c[basis[r]] * T[r]
    status, it = _run_simplex(T, basis, real_cols, max_iter)
    iters += it
    if status == UNBOUNDED:
        return LinprogResult(UNBOUNDED, iterations=iters)
    x_full = np.zeros(ncol)
    x_full[basis] = T[:m, -1]
    duals = T[-1, n:n + m_ub]
    return LinprogResult(OPTIMAL, x=x_full[:n].copy(), objective=float(T[-1, -1]),
                         duals=duals.copy(), iterations=iters)
