"""Flexible skylines (ND and PO) computed with horizontal partitioning."""

from .core import (Dataset, DimensionMismatch, InfeasibleConstraints, Tuple, WeightConstraintSet,
                   WeightVector, dominates, example_dataset, score, skyline_bruteforce)
from .datagen import GenSpec, generate
from .engine import (ExecutionReport, MetaInfo, flexible_skyline, noseq_finalize, run_parallel,
                     select_representatives, shutdown_pools, warmup)
from .fdominance import FDomContext, f_dominates, in_dominance_region, sort_key
from .partitioning import ConfigError, PartitionPlan, make_plan
from .polytope import PolytopeVertices, enumerate_vertices, sorting_weight
from .sequential import LpProblem, LpSolution, is_potentially_optimal, lp_solve, nd_sve1f, po_popi2

__version__ = "0.1.0"
