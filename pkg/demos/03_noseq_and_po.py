"""
Removing the sequential round, and computing PO
===============================================

NoSeq re-splits the merged union and lets every worker check its slice
against the whole union, so no single process has to scan it all. For PO
the input is the ND set, and each candidate needs a small LP.
"""

from flexsky import FDomContext, GenSpec, WeightConstraintSet, generate, run_parallel, warmup
from flexsky.engine import shutdown_pools

r = generate(GenSpec("anticorrelated", N=50_000, d=4, seed=3))
ctx = FDomContext.from_constraints(WeightConstraintSet.ordering(4, 0, 1))
warmup(2)

for noseq in (False, True):
    ids, rep = run_parallel(r, "nd", ctx=ctx, strategy="sliced", p=16, cores=2,
                            representatives=5, noseq=noseq)
    print(f"noseq={noseq!s:5s} |ND|={len(ids)} partition {rep.t_partition:.3f}s "
          f"parallel {rep.t_parallel:.3f}s final {rep.t_sequential:.3f}s")

nd = r.by_ids(ids)
for strategy in ("angular", "sliced"):
    po, rep = run_parallel(nd, "po", ctx=ctx, strategy=strategy, p=16)
    print(f"PO with {strategy}: |PO|={len(po)} removed locally {rep.removed_pct:.1%} in {rep.t_total:.2f}s")

shutdown_pools()
