"""
Flexible skylines on a nine-hotel toy dataset
=============================================

Two attributes, both "smaller is better". With no preference information
the classic skyline keeps five hotels. Saying that the first attribute
matters at least as much as the second (w1 >= w2) shrinks the answer to the
non-dominated set ND, and further to the potentially optimal set PO.
"""

import numpy as np

from flexsky import (FDomContext, WeightConstraintSet, example_dataset, flexible_skyline,
                     nd_sve1f, po_popi2, skyline_bruteforce)

r, labels = example_dataset()
name = {v: k for k, v in labels.items()}
for t in r:
    print(name[t.id], t.values)

# classic skyline: Pareto dominance only
print("Sky:", sorted(name[i] for i in skyline_bruteforce(r)))

# the family F of linear scores with w1 >= w2
C = WeightConstraintSet.ordering(2, 0, 1)
ctx = FDomContext.from_constraints(C)
print("polytope vertices:", ctx.V.tolist())
print("presort weight:", ctx.sort_w.as_array())

nd = nd_sve1f(r, ctx)
print("ND:", sorted(name[i] for i in nd))
po = po_popi2(r.by_ids(sorted(nd)), C, ctx)
print("PO:", sorted(name[i] for i in po))

# same thing through the partitioned engine, two angular partitions
ids, report = flexible_skyline(r, C, "po", strategy="angular", p=2)
print("engine PO:", sorted(name[i] for i in ids), "union after local phase:", report.union_size)

# b is never the top-1 choice: at w=(1,0) a is better, at w=(0.5,0.5) e is better
W = np.array([[1.0, 0.0], [0.75, 0.25], [0.5, 0.5]])
print("scores of a, b, e under three weights:\n", r.by_ids([0, 1, 4]).values @ W.T)
