"""Reference implementations used only by the tests.

They share no code path with the library: F-dominance by all-pairs numpy
broadcasting (or scipy LPs over the weight polytope), PO by scipy's HiGHS.
"""

import numpy as np
from scipy.optimize import linprog


def sky_oracle(values, ids):
    V = np.asarray(values)
    le = np.all(V[:, None, :] <= V[None, :, :], axis=2)
    lt = np.any(V[:, None, :] < V[None, :, :], axis=2)
    dominated = (le & lt).any(axis=0)
    return {int(i) for i in np.asarray(ids)[~dominated]}


def nd_oracle(values, ids, vertices, tol=1e-12):
    S = np.asarray(values) @ np.asarray(vertices).T
    le = np.all(S[:, None, :] <= S[None, :, :], axis=2)
    lt = np.any(S[None, :, :] - S[:, None, :] > tol, axis=2)
    dominated = (le & lt).any(axis=0)
    return {int(i) for i in np.asarray(ids)[~dominated]}


def _polytope_lp(c, C, d):
    A = C.matrix()
    res = linprog(c, A_ub=-A if A.size else None, b_ub=np.zeros(len(A)) if A.size else None,
                  A_eq=np.ones((1, d)), b_eq=[1.0], bounds=[(0, None)] * d, method="highs")
    assert res.status == 0
    return res.fun


def fdom_lp(t, s, C):
    """F-dominance decided by minimizing / maximizing (s - t) . w over the polytope."""
    diff = np.asarray(s, float) - np.asarray(t, float)
    lo = _polytope_lp(diff, C, C.d)
    hi = -_polytope_lp(-diff, C, C.d)
    return lo >= -1e-10 and hi > 1e-9


def margin_lp(t, competitors, C):
    """max eps s.t. (s - t) . w >= eps for all s, w in the polytope."""
    d = C.d
    comp = np.asarray(competitors, float).reshape(-1, d)
    if comp.shape[0] == 0:
        return np.inf
    G = comp - np.asarray(t, float)
    A = C.matrix()
    # variables [w, eps]; minimize -eps
    A_ub = np.hstack([-G, np.ones((G.shape[0], 1))])
    b_ub = np.zeros(G.shape[0])
    if A.size:
        A_ub = np.vstack([A_ub, np.hstack([-A, np.zeros((A.shape[0], 1))])])
        b_ub = np.concatenate([b_ub, np.zeros(A.shape[0])])
    res = linprog(np.r_[np.zeros(d), -1.0], A_ub=A_ub, b_ub=b_ub,
                  A_eq=np.r_[np.ones(d), 0.0][None, :], b_eq=[1.0],
                  bounds=[(0, None)] * d + [(None, None)], method="highs")
    assert res.status == 0, res.message
    return -res.fun


def po_oracle(values, ids, C, tol=1e-9):
    V = np.asarray(values, float)
    out = set()
    for i in range(V.shape[0]):
        if margin_lp(V[i], np.delete(V, i, axis=0), C) > tol:
            out.add(int(ids[i]))
    return out
