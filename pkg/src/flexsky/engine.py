"""Partition / local-compute / merge / final-pass execution of ND and PO.

Local results are computed by a process pool capped at ``cores`` workers
(or inline when ``cores == 1``). Workers receive immutable numpy slices and
return row positions, so the result never depends on scheduling.
"""

from __future__ import annotations

import atexit
import logging
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import dominated_before
from .core import Dataset, Tuple, WeightConstraintSet
from .fdominance import FDomContext, dominated_mask, presort_order
from .partitioning import STRATEGIES, ConfigError, PartitionPlan, grid_filter_mask, make_plan, sliced_assign
from .sequential import popi2_indices, popi2_mask, sve1f_indices

log = logging.getLogger(__name__)

OPS = ("nd", "po")
DEFAULT_REPRESENTATIVES = 5


@dataclass(frozen=True)
class MetaInfo:
    representatives: Dataset | None = None
    global_union: Dataset | None = None


@dataclass
class ExecutionReport:
    op: str
    strategy: str
    p: int
    cores: int
    input_size: int
    union_size: int
    result_ids: tuple[int, ...]
    t_partition: float
    t_parallel: float
    t_sequential: float
    t_total: float
    partition_sizes: list[int] = field(default_factory=list)
    partition_times: list[float] = field(default_factory=list)
    representatives: int = 0
    noseq: bool = False
    grid_filter: bool = False

    @property
    def removed_pct(self) -> float:
        if self.input_size == 0:
            return 0.0
        return 1.0 - self.union_size / self.input_size

    @property
    def result_size(self) -> int:
        return len(self.result_ids)


# ------------------------------------------------------------------ worker side

def _local_task(values, ids, V, op, rep_scores):
    t0 = time.perf_counter()
    S = values @ V.T
    pos = np.arange(values.shape[0])
    if rep_scores is not None and rep_scores.shape[0]:
        alive = ~dominated_mask(S, rep_scores)
        pos, S, values, ids = pos[alive], S[alive], values[alive], ids[alive]
    order = presort_order(values, ids, S)
    if op == "nd":
        keep = sve1f_indices(S, order)
    else:
        # ties are kept locally; the final pass applies the strict test
        keep = popi2_indices(S, order, strict=False)
    return np.sort(pos[keep]), time.perf_counter() - t0


def _noseq_task(S_U, order_U, cand, op):
    t0 = time.perf_counter()
    if op == "nd":
        rank = np.empty_like(order_U)
        rank[order_U] = np.arange(order_U.size)
        keep = cand[~dominated_before(S_U, order_U, rank, cand)]
    else:
        keep = cand[popi2_mask(S_U, order_U, cand, strict=True)]
    return keep, time.perf_counter() - t0


def _run_batch(fn, argsets):
    return [fn(*a) for a in argsets]


_POOLS: dict[int, ProcessPoolExecutor] = {}


def _pool(cores: int) -> ProcessPoolExecutor:
    pool = _POOLS.get(cores)
    if pool is None or getattr(pool, "_broken", False):
        pool = ProcessPoolExecutor(max_workers=cores, mp_context=mp.get_context("fork"))
        _POOLS[cores] = pool
    return pool


def shutdown_pools() -> None:
    """Stop the worker pools kept alive between runs."""
    while _POOLS:
        _, pool = _POOLS.popitem()
        pool.shutdown(cancel_futures=True)


atexit.register(shutdown_pools)


class _Runner:
    """Inline execution for one core, a long-lived forked process pool otherwise.

    Pools are reused across runs, like the executors of a cluster, so their
    start-up cost is paid once per core count rather than inside every timing.
    """

    def __init__(self, cores: int):
        self.cores = cores
        self.pool = _pool(cores) if cores > 1 else None

    def map(self, fn, argsets, weights=None):
        """Apply ``fn`` to every argument tuple; results come back in input order.

        Tasks are packed into one batch per worker, largest first onto the
        least-loaded batch, so shared arguments are pickled once per batch.
        """
        argsets = list(argsets)
        if self.pool is None or len(argsets) <= 1:
            return [fn(*a) for a in argsets]
        weights = [1.0] * len(argsets) if weights is None else list(weights)
        nb = min(self.cores, len(argsets))
        batches = [[] for _ in range(nb)]
        load = [0.0] * nb
        for i in sorted(range(len(argsets)), key=lambda i: -weights[i]):
            b = load.index(min(load))
            batches[b].append(i)
            load[b] += weights[i]
        futures = [self.pool.submit(_run_batch, fn, [argsets[i] for i in b]) for b in batches]
        out = [None] * len(argsets)
        for b, fut in zip(batches, futures):
            for i, res in zip(b, fut.result()):
                out[i] = res
        return out

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return None


# ------------------------------------------------------------------ public API

def select_representatives(r: Dataset, plan: PartitionPlan, k: int, ctx: FDomContext) -> list[Tuple]:
    """First ``k`` presorted tuples of every partition, minus those F-dominated within the pool."""
    return [r[i] for i in _representative_rows(r, plan, k, ctx)]


def _representative_rows(r, plan, k, ctx, S=None):
    if k < 0:
        raise ConfigError("representatives must be >= 0")
    if k == 0 or len(r) == 0:
        return np.zeros(0, dtype=np.int64)
    S = ctx.scores(r.values) if S is None else S
    heads = []
    for rows in plan.members():
        if rows.size:
            order = presort_order(r.values[rows], r.ids[rows], S[rows])
            heads.append(rows[order[:k]])
    pool = np.concatenate(heads)
    keep = ~dominated_mask(S[pool], S[pool])
    return np.sort(pool[keep])


def _validate(op, strategy, p, cores, representatives, grid_filter):
    if op not in OPS:
        raise ConfigError(f"unknown op {op!r}; choose from nd, po")
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    if int(p) < 1:
        raise ConfigError("number of partitions must be >= 1")
    if int(cores) < 1:
        raise ConfigError("cores must be >= 1")
    if int(representatives) < 0:
        raise ConfigError("representatives must be >= 0")
    if grid_filter and strategy != "grid":
        raise ConfigError("grid filtering is only available with the grid strategy")


def _context(ctx, C, d):
    if ctx is not None:
        return ctx
    C = C if C is not None else WeightConstraintSet(d)
    if C.d != d:
        raise ConfigError(f"constraints are {C.d}-d but data is {d}-d")
    return FDomContext.from_constraints(C)


def run_parallel(data: Dataset, op: str = "nd", C: WeightConstraintSet | None = None, *,
                 strategy: str = "sliced", p: int = 4, cores: int = 1,
                 representatives: int = 0, noseq: bool = False, grid_filter: bool = False,
                 seed=0, slice_dim: int = 0, ctx: FDomContext | None = None,
                 skip_final: bool = False):
    """Compute ND or PO of ``data`` with the partition/merge pattern.

    For ``op="po"`` the input must already be an ND set. Returns the sorted
    result ids and an :class:`ExecutionReport`. ``skip_final`` omits the last
    pass and returns the raw union; it exists to test the harness and gives
    wrong answers by design.
    """
    _validate(op, strategy, p, cores, representatives, grid_filter)
    if not isinstance(data, Dataset):
        data = Dataset.from_tuples(data)
    ctx = _context(ctx, C, data.d)
    t_start = time.perf_counter()
    n = len(data)

    with _Runner(int(cores)) as runner:
        # partition + meta-information
        plan = make_plan(data, strategy, int(p), seed=seed, slice_dim=slice_dim)
        alive = grid_filter_mask(data, plan) if grid_filter else np.ones(n, dtype=bool)
        S = ctx.scores(data.values)
        rep_rows = _representative_rows(data, plan, int(representatives), ctx, S)
        rep_scores = S[rep_rows] if rep_rows.size else None
        parts = [rows[alive[rows]] for rows in plan.members()]
        t_part_done = time.perf_counter()

        # parallel local sets
        work = [(k, rows) for k, rows in enumerate(parts) if rows.size]
        outputs = runner.map(_local_task, [
            (data.values[rows], data.ids[rows], ctx.V, op, rep_scores) for _, rows in work],
            weights=[rows.size for _, rows in work])
        part_times = [0.0] * plan.p
        local = []
        for (k, rows), (keep, dt) in zip(work, outputs):
            part_times[k] = dt
            local.append(rows[keep])
        union = np.sort(np.concatenate(local)) if local else np.zeros(0, dtype=np.int64)
        t_par_done = time.perf_counter()

        # final pass
        if skip_final:
            result_rows = union
        elif noseq:
            result_rows = _noseq(data.subset(union), op, int(p), runner, ctx)
            result_rows = union[result_rows]
        else:
            U = data.subset(union)
            SU = S[union]
            order = presort_order(U.values, U.ids, SU)
            fin = sve1f_indices(SU, order) if op == "nd" else popi2_indices(SU, order, strict=True)
            result_rows = union[np.sort(fin)]
        t_end = time.perf_counter()

    ids = tuple(sorted(int(i) for i in data.ids[result_rows]))
    report = ExecutionReport(
        op=op, strategy=strategy, p=plan.p, cores=int(cores), input_size=n,
        union_size=int(union.size), result_ids=ids,
        t_partition=t_part_done - t_start, t_parallel=t_par_done - t_part_done,
        t_sequential=t_end - t_par_done, t_total=t_end - t_start,
        partition_sizes=[int(x) for x in plan.sizes()], partition_times=part_times,
        representatives=int(rep_rows.size), noseq=noseq, grid_filter=grid_filter,
    )
    log.debug("run %s/%s p=%d: union %d -> %d", op, strategy, plan.p, union.size, len(ids))
    return ids, report


def _noseq(U: Dataset, op, p, runner, ctx):
    if len(U) == 0:
        return np.zeros(0, dtype=np.int64)
    S_U = ctx.scores(U.values)
    order_U = presort_order(U.values, U.ids, S_U)
    plan = sliced_assign(U, p)
    members = [rows for rows in plan.members() if rows.size]
    args = [(S_U, order_U, rows, op) for rows in members]
    kept = [keep for keep, _ in runner.map(_noseq_task, args, weights=[m.size for m in members])]
    return np.sort(np.concatenate(kept)) if kept else np.zeros(0, dtype=np.int64)


def noseq_finalize(U, op: str, p: int, cores: int, ctx: FDomContext,
                   C: WeightConstraintSet | None = None) -> set[int]:
    """Second parallel pass over the union ``U`` replacing the sequential final round."""
    if op not in OPS:
        raise ConfigError(f"unknown op {op!r}")
    if not isinstance(U, Dataset):
        U = Dataset.from_tuples(U, d=ctx.d)
    with _Runner(int(cores)) as runner:
        rows = _noseq(U, op, int(p), runner, ctx)
    return {int(i) for i in U.ids[rows]}


def warmup(cores: int = 1) -> None:
    """Compile the kernels and start the pool for ``cores`` so timed runs exclude that cost."""
    rng = np.random.default_rng(0)
    data = Dataset(rng.random((64, 3)))
    ctx = FDomContext.from_constraints(WeightConstraintSet(3))
    for noseq in (False, True):
        ids, _ = run_parallel(data, "nd", ctx=ctx, p=4, cores=cores, representatives=2, noseq=noseq)
        run_parallel(data.by_ids(ids), "po", ctx=ctx, p=4, cores=cores, noseq=noseq)


def flexible_skyline(r: Dataset, C: WeightConstraintSet | None = None, op: str = "nd", **options):
    """ND or PO of a raw dataset; PO runs the ND pipeline first."""
    ctx = _context(options.pop("ctx", None), C, r.d)
    nd_ids, nd_report = run_parallel(r, "nd", ctx=ctx, **options)
    if op == "nd":
        return nd_ids, nd_report
    return run_parallel(r.by_ids(nd_ids), "po", ctx=ctx, **options)
