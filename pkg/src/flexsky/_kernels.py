"""Compiled inner loops over vertex-score matrices."""

from __future__ import annotations

import numpy as np
from numba import njit

STRICT_TOL = 1e-12


@njit(cache=True, inline="always")
def _fdom(S, i, T, j):
    """Row i of S F-dominates row j of T."""
    strict = False
    for v in range(S.shape[1]):
        a = S[i, v]
        b = T[j, v]
        if a > b:
            return False
        if b - a > STRICT_TOL:
            strict = True
    return strict


@njit(cache=True)
def window_scan(S, order):
    """Presorted window scan; returns surviving row positions in scan order.

    The window is checked from the most recently added member backwards.
    """
    n = order.shape[0]
    win = np.empty(n, dtype=np.int64)
    w = 0
    for k in range(n):
        i = order[k]
        dominated = False
        for q in range(w - 1, -1, -1):
            if _fdom(S, win[q], S, i):
                dominated = True
                break
        if not dominated:
            win[w] = i
            w += 1
    return win[:w]


@njit(cache=True)
def dominated_before(S, order, rank, cand):
    """For each candidate row, whether a row earlier in ``order`` F-dominates it.

    ``rank[i]`` is the position of row i in ``order``. Only earlier rows can
    dominate under a presort order, so the scan stops at the candidate's rank.
    """
    out = np.zeros(cand.shape[0], dtype=np.bool_)
    for c in range(cand.shape[0]):
        i = cand[c]
        for k in range(rank[i]):
            if _fdom(S, order[k], S, i):
                out[c] = True
                break
    return out


@njit(cache=True)
def dominated_any(cand, dom):
    out = np.zeros(cand.shape[0], dtype=np.bool_)
    for i in range(cand.shape[0]):
        for j in range(dom.shape[0]):
            if _fdom(dom, j, cand, i):
                out[i] = True
                break
    return out
