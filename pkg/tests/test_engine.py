import numpy as np
import pytest

from flexsky import (ConfigError, Dataset, FDomContext, WeightConstraintSet, flexible_skyline, make_plan,
                     noseq_finalize, run_parallel, select_representatives)
from flexsky.engine import shutdown_pools
from flexsky.fdominance import nd_bruteforce

from conftest import names
from oracles import nd_oracle, po_oracle

STRATS = ("grid", "angular", "sliced", "random")


@pytest.mark.parametrize("strategy", STRATS)
def test_toy_nd_p2(toy, w1_ge_w2, strategy):
    r, labels = toy
    ids, rep = run_parallel(r, "nd", w1_ge_w2, strategy=strategy, p=2)
    assert names(ids, labels) == {"a", "b", "e"}
    assert rep.result_size == 3
    assert rep.input_size == 9
    assert 0.0 <= rep.removed_pct <= 1.0
    assert rep.t_total >= rep.t_parallel >= 0


def test_flexible_skyline_po(toy, w1_ge_w2):
    r, labels = toy
    ids, rep = flexible_skyline(r, w1_ge_w2, "po", strategy="angular", p=3)
    assert names(ids, labels) == {"a", "e"}
    assert rep.op == "po"


def test_p1_equals_sequential(toy_ctx):
    rng = np.random.default_rng(4)
    r = Dataset(rng.random((300, 2)))
    ref = nd_bruteforce(r, toy_ctx)
    for s in STRATS:
        assert set(run_parallel(r, "nd", ctx=toy_ctx, strategy=s, p=1)[0]) == ref


def test_config_errors(toy, w1_ge_w2):
    r, _ = toy
    bad = [dict(strategy="zigzag"), dict(p=0), dict(cores=0), dict(representatives=-1),
           dict(strategy="sliced", grid_filter=True)]
    for kw in bad:
        with pytest.raises(ConfigError):
            run_parallel(r, "nd", w1_ge_w2, **kw)
    with pytest.raises(ConfigError):
        run_parallel(r, "skyline", w1_ge_w2)
    with pytest.raises(ConfigError):
        run_parallel(r, "nd", WeightConstraintSet(3))


def test_representatives(toy, toy_ctx):
    r, labels = toy
    plan = make_plan(r, "sliced", 2)
    assert select_representatives(r, plan, 0, toy_ctx) == []
    reps = select_representatives(r, plan, 1, toy_ctx)
    assert "a" in names([t.id for t in reps], labels)
    sat = select_representatives(r, plan, 100, toy_ctx)
    got = {t.id for t in sat}
    assert got == nd_bruteforce(r, toy_ctx)


def test_noseq_finalize_examples(toy, toy_ctx, w1_ge_w2):
    r, labels = toy
    U = r.by_ids([labels[k] for k in "abehi"])
    assert names(noseq_finalize(U, "nd", 2, 1, toy_ctx), labels) == {"a", "b", "e"}
    ND = r.by_ids([labels[k] for k in "abe"])
    assert names(noseq_finalize(ND, "nd", 3, 1, toy_ctx), labels) == {"a", "b", "e"}
    assert names(noseq_finalize(ND, "po", 2, 1, toy_ctx, w1_ge_w2), labels) == {"a", "e"}
    assert noseq_finalize(Dataset([], d=2), "nd", 2, 1, toy_ctx) == set()


def _instance(seed, n=500, d=3):
    rng = np.random.default_rng(seed)
    u = rng.random((n, d))
    X = np.clip(u - u.mean(axis=1, keepdims=True) + 0.5 + rng.normal(0, 0.05, (n, 1)), 0, 1)
    return Dataset(X)


def test_500_tuple_3d_all_strategies():
    C = WeightConstraintSet.ordering(3, 0, 1)
    ctx = FDomContext.from_constraints(C)
    r = _instance(11)
    nd_ref = nd_oracle(r.values, r.ids, ctx.V)
    nd = r.by_ids(sorted(nd_ref))
    po_ref = po_oracle(nd.values, nd.ids, C)
    for s in STRATS:
        assert set(run_parallel(r, "nd", C, strategy=s, p=6)[0]) == nd_ref
        assert set(run_parallel(nd, "po", C, strategy=s, p=6)[0]) == po_ref


@pytest.mark.parametrize("seed", range(6))
def test_result_independent_of_options(seed):
    C = WeightConstraintSet.ordering(3, 0, 1, 2) if seed % 2 else WeightConstraintSet(3)
    ctx = FDomContext.from_constraints(C)
    r = _instance(seed, n=400)
    nd_ref = nd_bruteforce(r, ctx)
    nd = r.by_ids(sorted(nd_ref))
    po_ref = None
    base_union = {}
    for s in STRATS:
        for k in (0, 3):
            for noseq in (False, True):
                for p in (2, 7):
                    ids, rep = run_parallel(r, "nd", ctx=ctx, strategy=s, p=p, representatives=k,
                                            noseq=noseq)
                    assert set(ids) == nd_ref
                    if k == 0:
                        base_union[(s, p)] = rep.union_size
                    else:
                        assert rep.union_size <= base_union[(s, p)]
                    po_ids, _ = run_parallel(nd, "po", ctx=ctx, strategy=s, p=p, representatives=k,
                                             noseq=noseq)
                    po_ref = set(po_ids) if po_ref is None else po_ref
                    assert set(po_ids) == po_ref
        if s == "grid":
            assert set(run_parallel(r, "nd", ctx=ctx, strategy=s, p=8, grid_filter=True)[0]) == nd_ref


def test_multicore_is_deterministic():
    ctx = FDomContext.from_constraints(WeightConstraintSet.ordering(3, 0, 1))
    r = _instance(3, n=2000)
    try:
        single, _ = run_parallel(r, "nd", ctx=ctx, strategy="sliced", p=8, cores=1, representatives=3)
        for _ in range(2):
            for noseq in (False, True):
                multi, rep = run_parallel(r, "nd", ctx=ctx, strategy="sliced", p=8, cores=2,
                                          representatives=3, noseq=noseq)
                assert multi == single
                assert rep.cores == 2
        nd = r.by_ids(single)
        po1, _ = run_parallel(nd, "po", ctx=ctx, p=4, cores=1)
        po2, _ = run_parallel(nd, "po", ctx=ctx, p=4, cores=2, noseq=True)
        assert po1 == po2
    finally:
        shutdown_pools()


def test_skip_final_gives_superset():
    ctx = FDomContext.from_constraints(WeightConstraintSet(3))
    r = _instance(5, n=300)
    ids, rep = run_parallel(r, "nd", ctx=ctx, p=4, skip_final=True)
    assert set(ids) >= nd_bruteforce(r, ctx)
    assert len(ids) == rep.union_size
