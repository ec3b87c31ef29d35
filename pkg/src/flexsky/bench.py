"""Experiment grids, metrics CSV, oracle verification and plot-data export."""

from __future__ import annotations

import csv
import itertools
import logging
import math
import re
import statistics
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Iterator

import numpy as np

from .core import Dataset, InfeasibleConstraints, WeightConstraintSet
from .datagen import GenSpec, generate
from .engine import DEFAULT_REPRESENTATIVES, run_parallel, warmup
from .fdominance import FDomContext, nd_bruteforce
from .io import parse_constraints, read_dataset_csv
from .partitioning import STRATEGIES, ConfigError
from .sequential import is_potentially_optimal, nd_sve1f

log = logging.getLogger(__name__)

IMPROVEMENTS = ("none", "rep", "noseq", "rep+noseq", "gridfilter")

PROFILES = {
    # large-scale defaults
    "paper-defaults": dict(N=[1_000_000], d=[4], p=[100], cores=[30]),
    "paper": dict(N=[200_000, 500_000, 1_000_000, 2_000_000, 5_000_000, 10_000_000],
                  d=[2, 4, 6, 7], p=[10, 50, 100, 150, 200, 300], cores=[5, 10, 20, 30]),
    "desk": dict(N=[10_000, 50_000, 100_000], d=[2, 3, 4], p=[4, 16, 32], cores=[1, 2, 4, 8]),
}


@dataclass
class ExperimentGrid:
    N: list[int] = field(default_factory=lambda: [1_000_000])
    d: list[int] = field(default_factory=lambda: [4])
    p: list[int] = field(default_factory=lambda: [100])
    cores: list[int] = field(default_factory=lambda: [30])
    strategies: list[str] = field(default_factory=lambda: ["sliced"])
    ops: list[str] = field(default_factory=lambda: ["nd"])
    improvements: list[str] = field(default_factory=lambda: ["none"])
    seeds: list[int] = field(default_factory=lambda: [0])
    kind: str = "anticorrelated"
    constraints: str = "w1 >= w2"
    representatives: int = DEFAULT_REPRESENTATIVES
    slice_dim: int = 0
    dataset: str | None = None
    max_points: int = 1000

    @classmethod
    def from_profile(cls, name: str, **overrides) -> "ExperimentGrid":
        if name not in PROFILES:
            raise ConfigError(f"unknown profile {name!r}; choose from {', '.join(PROFILES)}")
        return cls(**{**PROFILES[name], **overrides})

    def validate(self) -> None:
        for name in ("N", "d", "p", "cores", "strategies", "ops", "improvements", "seeds"):
            if not getattr(self, name):
                raise ConfigError(f"grid axis {name!r} is empty")
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ConfigError(f"unknown strategy {s!r}")
        for o in self.ops:
            if o not in ("nd", "po"):
                raise ConfigError(f"unknown op {o!r}")
        for imp in self.improvements:
            if imp not in IMPROVEMENTS:
                raise ConfigError(f"unknown improvement set {imp!r}; choose from {', '.join(IMPROVEMENTS)}")
        if self.size() > self.max_points:
            raise ConfigError(f"grid has {self.size()} points, above the cap of {self.max_points}")

    def size(self) -> int:
        data_axes = 1 if self.dataset else len(self.N) * len(self.d)
        return (data_axes * len(self.seeds) * len(self.p) * len(self.cores)
                * len(self.strategies) * len(self.ops) * len(self.improvements))


@dataclass
class MetricsRow:
    strategy: str
    improvements: str
    op: str
    N: int
    d: int
    p: int
    cores: int
    seed: int
    t_partition: float = 0.0
    t_parallel: float = 0.0
    t_sequential: float = 0.0
    t_total: float = 0.0
    union_size: int = 0
    removed_pct: float = 0.0
    result_size: int = 0
    input_size: int = 0
    error: str = ""


METRIC_FIELDS = [f.name for f in fields(MetricsRow)]
_INT_FIELDS = {"N", "d", "p", "cores", "seed", "union_size", "result_size", "input_size"}
_FLOAT_FIELDS = {"t_partition", "t_parallel", "t_sequential", "t_total", "removed_pct"}


def improvement_flags(imp: str) -> dict:
    parts = set(imp.split("+")) - {"none"}
    return dict(rep="rep" in parts, noseq="noseq" in parts, grid_filter="gridfilter" in parts)


def _constraints(text: str, d: int) -> WeightConstraintSet:
    rows = [r for r in text.replace(";", "\n").splitlines() if r.strip()]
    # drop rows naming weights beyond d so one grid can span several d
    usable = []
    for r in rows:
        idx = [int(x) for x in re.findall(r"w(\d+)", r)]
        if all(i <= d for i in idx):
            usable.append(r)
    return parse_constraints("\n".join(usable), d)


def _datasets(grid: ExperimentGrid) -> Iterator[tuple[int, int, int, Dataset]]:
    if grid.dataset:
        r = read_dataset_csv(grid.dataset)
        for seed in grid.seeds:
            yield len(r), r.d, seed, r
        return
    for N, d, seed in itertools.product(grid.N, grid.d, grid.seeds):
        yield N, d, seed, generate(GenSpec(grid.kind, N, d, seed))


def cmd_run(grid: ExperimentGrid, out_csv=None) -> Iterator[MetricsRow]:
    """Execute every grid point and yield one row each, appending to ``out_csv`` if given.

    A failing point yields a row carrying the error text; the run goes on.
    """
    grid.validate()
    for c in sorted(set(grid.cores)):
        warmup(c)
    writer = MetricsWriter(out_csv) if out_csv else None
    try:
        for N, d, seed, r in _datasets(grid):
            try:
                ctx = FDomContext.from_constraints(_constraints(grid.constraints, d))
            except (InfeasibleConstraints, ValueError) as exc:
                for op, strat, imp, p, c in itertools.product(
                        grid.ops, grid.strategies, grid.improvements, grid.p, grid.cores):
                    row = MetricsRow(strat, imp, op, N, d, p, c, seed, error=str(exc))
                    if writer:
                        writer.write(row)
                    yield row
                continue
            nd_input = None
            for op in grid.ops:
                if op == "po" and nd_input is None:
                    nd_input = r.by_ids(sorted(nd_sve1f(r, ctx)))
                data = r if op == "nd" else nd_input
                for strat, imp, p, c in itertools.product(grid.strategies, grid.improvements, grid.p, grid.cores):
                    row = _run_point(data, op, strat, imp, p, c, seed, N, d, ctx, grid)
                    if writer:
                        writer.write(row)
                    yield row
    finally:
        if writer:
            writer.close()


def _run_point(data, op, strat, imp, p, c, seed, N, d, ctx, grid) -> MetricsRow:
    row = MetricsRow(strat, imp, op, N, d, p, c, seed)
    flags = improvement_flags(imp)
    try:
        ids, rep = run_parallel(
            data, op, ctx=ctx, strategy=strat, p=p, cores=c,
            representatives=grid.representatives if flags["rep"] else 0,
            noseq=flags["noseq"], grid_filter=flags["grid_filter"],
            seed=seed, slice_dim=grid.slice_dim)
    except (ConfigError, ValueError, RuntimeError) as exc:
        row.error = str(exc)
        return row
    return replace(row, p=rep.p, t_partition=rep.t_partition, t_parallel=rep.t_parallel,
                   t_sequential=rep.t_sequential, t_total=rep.t_total,
                   union_size=rep.union_size, removed_pct=rep.removed_pct,
                   result_size=rep.result_size, input_size=rep.input_size)


class MetricsWriter:
    """Append-only metrics CSV; the header is written when the file is new or empty."""

    def __init__(self, path):
        self.path = Path(path)
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        if not fresh:
            with open(self.path, newline="") as fh:
                header = next(csv.reader(fh), [])
            if header != METRIC_FIELDS:
                raise ConfigError(f"{self.path} has a different metrics schema")
        self.fh = open(self.path, "a", newline="")
        self.w = csv.DictWriter(self.fh, fieldnames=METRIC_FIELDS, lineterminator="\n")
        if fresh:
            self.w.writeheader()

    def write(self, row: MetricsRow) -> None:
        self.w.writerow(asdict(row))
        self.fh.flush()

    def close(self) -> None:
        self.fh.close()


def read_metrics(path) -> list[MetricsRow]:
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            kw = {}
            for k in METRIC_FIELDS:
                v = rec.get(k, "")
                kw[k] = int(v) if k in _INT_FIELDS else float(v) if k in _FLOAT_FIELDS else v
            rows.append(MetricsRow(**kw))
    return rows


# ------------------------------------------------------------------ verification

@dataclass
class VerifyConfig:
    N: int = 300
    d: list[int] = field(default_factory=lambda: [2, 3, 4])
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    kinds: list[str] = field(default_factory=lambda: ["anticorrelated", "independent"])
    constraints: list[str] = field(default_factory=lambda: ["", "w1 >= w2", "w1 >= w2; w2 >= w3"])
    strategies: list[str] = field(default_factory=lambda: list(STRATEGIES))
    improvements: list[str] = field(default_factory=lambda: ["none", "rep", "rep+noseq", "gridfilter"])
    ops: list[str] = field(default_factory=lambda: ["nd", "po"])
    p: list[int] = field(default_factory=lambda: [4])
    cores: int = 1
    representatives: int = 2
    cap: int = 2000
    inject_fault: str | None = None


@dataclass
class Mismatch:
    seed: int
    kind: str
    d: int
    constraints: str
    op: str
    strategy: str
    improvements: str
    p: int
    extra: list[int]
    missing: list[int]


@dataclass
class VerifyReport:
    checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def po_oracle(nd: Dataset, ctx: FDomContext) -> set[int]:
    """Per-tuple LP against every other ND tuple, no incremental rounds."""
    out = set()
    for i in range(len(nd)):
        others = np.delete(nd.values, i, axis=0)
        if is_potentially_optimal(nd.values[i], others, None, ctx=ctx):
            out.add(int(nd.ids[i]))
    return out


def cmd_verify(cfg: VerifyConfig, data: Dataset | None = None) -> VerifyReport:
    """Compare every strategy/improvement combination with the brute-force oracles."""
    if cfg.N > cfg.cap or (data is not None and len(data) > cfg.cap):
        raise ConfigError(f"verification is capped at N={cfg.cap}")
    report = VerifyReport()
    cases = ([(None, data.d, 0, data)] if data is not None else
             [(k, d, s, None) for k in cfg.kinds for d in cfg.d for s in cfg.seeds])
    for kind, d, seed, r in cases:
        if r is None:
            r = generate(GenSpec(kind, cfg.N, d, seed))
        for ctext in cfg.constraints:
            try:
                ctx = FDomContext.from_constraints(_constraints(ctext, d))
            except InfeasibleConstraints:
                continue
            nd_ref = nd_bruteforce(r, ctx)
            nd_data = r.by_ids(sorted(nd_ref))
            po_ref = po_oracle(nd_data, ctx) if "po" in cfg.ops else set()
            for op, strat, imp, p in itertools.product(cfg.ops, cfg.strategies, cfg.improvements, cfg.p):
                flags = improvement_flags(imp)
                if flags["grid_filter"] and strat != "grid":
                    continue
                data_in, ref = (r, nd_ref) if op == "nd" else (nd_data, po_ref)
                ids, _ = run_parallel(
                    data_in, op, ctx=ctx, strategy=strat, p=p, cores=cfg.cores,
                    representatives=cfg.representatives if flags["rep"] else 0,
                    noseq=flags["noseq"], grid_filter=flags["grid_filter"], seed=seed,
                    skip_final=cfg.inject_fault == "skip-final" and not flags["noseq"])
                report.checked += 1
                got = set(ids)
                if got != ref:
                    report.mismatches.append(Mismatch(
                        seed, kind or "file", d, ctext, op, strat, imp, p,
                        sorted(got - ref), sorted(ref - got)))
    return report


# ---------------------------------------------------------------------- plotdata

FIGURES = {
    # figure id: (x axis, y metric)
    "time-vs-N": ("N", "t_total"),
    "parallel-time-vs-N": ("N", "t_parallel"),
    "removal-pct-vs-N": ("N", "removed_pct"),
    "time-vs-d": ("d", "t_total"),
    "time-vs-p": ("p", "t_total"),
    "time-vs-cores": ("cores", "t_total"),
}


def series_label(row: MetricsRow) -> str:
    imp = "" if row.improvements == "none" else "+" + row.improvements
    return f"{row.op}:{row.strategy}{imp}"


def plot_table(rows: list[MetricsRow], figure: str) -> tuple[list[str], list[list]]:
    """Median of the figure's metric per (x, series); returns header and rows sorted by x."""
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    xname, yname = FIGURES[figure]
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        if row.error:
            continue
        y = (1.0 - row.union_size / row.input_size if row.input_size else 0.0) \
            if yname == "removed_pct" else getattr(row, yname)
        groups.setdefault((getattr(row, xname), series_label(row)), []).append(y)
    labels = sorted({k[1] for k in groups})
    xs = sorted({k[0] for k in groups})
    table = []
    for x in xs:
        line = [x]
        for lab in labels:
            vals = groups.get((x, lab))
            line.append(statistics.median(vals) if vals else math.nan)
        table.append(line)
    return [xname] + labels, table


def cmd_plotdata(metrics_csv, figures, out_dir) -> list[Path]:
    rows = read_metrics(metrics_csv)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for fig in figures:
        header, table = plot_table(rows, fig)
        path = out_dir / f"{fig}.dat"
        with open(path, "w") as fh:
            fh.write(" ".join(header) + "\n")
            for line in table:
                fh.write(" ".join(str(v) if not isinstance(v, float) else f"{v:.6g}" for v in line) + "\n")
        written.append(path)
    return written
