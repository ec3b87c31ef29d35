"""Command line: ``flexsky gen | run | verify | plotdata``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict

from .bench import (FIGURES, IMPROVEMENTS, ExperimentGrid, VerifyConfig, cmd_plotdata, cmd_run,
                    cmd_verify)
from .core import InfeasibleConstraints
from .datagen import KINDS, GenSpec, write_generated
from .io import FormatError, read_dataset_csv
from .partitioning import STRATEGIES, ConfigError

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_CONFIG = 0, 1, 2


def _ints(s: str) -> list[int]:
    return [int(float(x)) for x in s.split(",") if x.strip()]


def _strs(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def _improvements(args) -> list[str] | None:
    if args.improvements:
        return _strs(args.improvements)
    parts = []
    if args.representatives:
        parts.append("rep")
    if args.noseq:
        parts.append("noseq")
    if args.grid_filter == "on":
        parts.append("gridfilter")
    return ["+".join(parts) if parts else "none"] if (parts or args.representatives is not None) else None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flexsky", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a synthetic dataset CSV")
    g.add_argument("--kind", choices=KINDS, default="anticorrelated")
    g.add_argument("--N", type=int, default=10_000)
    g.add_argument("--d", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sigma", type=float, default=0.05)
    g.add_argument("-o", "--output", required=True)

    def grid_flags(p, multi: bool):
        conv = _ints if multi else int
        p.add_argument("--config", help="JSON file with grid fields; flags win")
        p.add_argument("--dataset", help="CSV dataset instead of generated data")
        p.add_argument("--kind", choices=KINDS)
        p.add_argument("--constraint", action="append",
                       help="weight constraint such as 'w1 >= w2' (repeatable)")
        p.add_argument("--constraints-file")
        p.add_argument("--strategy", type=_strs, help=f"comma list of {', '.join(STRATEGIES)}")
        p.add_argument("--partitions", type=conv)
        p.add_argument("--slice-dim", type=int, help="1-based dimension used by sliced partitioning")
        p.add_argument("--grid-filter", choices=("on", "off"), default="off")
        p.add_argument("--op", type=_strs, help="comma list of nd, po")
        p.add_argument("--cores", type=conv)
        p.add_argument("--representatives", type=int)
        p.add_argument("--noseq", action="store_true")
        p.add_argument("--improvements", help=f"comma list of {', '.join(IMPROVEMENTS)}")
        p.add_argument("--seed", type=_ints, help="comma list of seeds")
        p.add_argument("--N", type=_ints)
        p.add_argument("--d", type=_ints)

    r = sub.add_parser("run", help="run an experiment grid and append metrics rows")
    grid_flags(r, multi=True)
    r.add_argument("--profile", choices=("paper-defaults", "paper", "desk"))
    r.add_argument("--max-points", type=int)
    r.add_argument("-o", "--output", default="metrics.csv")

    v = sub.add_parser("verify", help="check every combination against brute-force oracles")
    grid_flags(v, multi=True)
    v.add_argument("--cap", type=int, default=2000)
    v.add_argument("--inject-fault", choices=("skip-final",))

    pd = sub.add_parser("plotdata", help="turn a metrics CSV into per-figure data files")
    pd.add_argument("metrics")
    pd.add_argument("--figure", action="append", required=True,
                    help=f"one of {', '.join(FIGURES)} (repeatable)")
    pd.add_argument("-o", "--output-dir", default="plotdata")
    return ap


def _constraint_text(args) -> str | None:
    parts = []
    if args.constraints_file:
        with open(args.constraints_file) as fh:
            parts.append(fh.read())
    if args.constraint:
        parts.extend(args.constraint)
    return "\n".join(parts) if parts else None


def _grid(args) -> ExperimentGrid:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    if args.profile:
        grid = ExperimentGrid.from_profile(args.profile, **base)
    else:
        grid = ExperimentGrid(**base)
    overrides = dict(N=args.N, d=args.d, p=args.partitions, cores=args.cores, strategies=args.strategy,
                     ops=args.op, seeds=args.seed, kind=args.kind, dataset=args.dataset,
                     constraints=_constraint_text(args), improvements=_improvements(args),
                     max_points=args.max_points)
    for k, val in overrides.items():
        if val is not None:
            setattr(grid, k, val)
    if args.representatives:
        grid.representatives = args.representatives
    if args.slice_dim is not None:
        grid.slice_dim = args.slice_dim - 1
    return grid


def _verify_config(args) -> VerifyConfig:
    base = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
    cfg = VerifyConfig(**base)
    if args.N:
        cfg.N = args.N[0]
    for attr, val in (("d", args.d), ("seeds", args.seed), ("strategies", args.strategy),
                      ("ops", args.op), ("p", args.partitions), ("improvements", _improvements(args))):
        if val is not None:
            setattr(cfg, attr, val)
    if args.kind:
        cfg.kinds = [args.kind]
    if args.cores:
        cfg.cores = args.cores[0]
    if args.representatives:
        cfg.representatives = args.representatives
    text = _constraint_text(args)
    if text is not None:
        cfg.constraints = [text]
    cfg.cap = args.cap
    cfg.inject_fault = args.inject_fault
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    log = logging.getLogger("flexsky")
    try:
        if args.cmd == "gen":
            spec = GenSpec(args.kind, args.N, args.d, args.seed, args.sigma)
            write_generated(spec, args.output)
            log.info("wrote %s (%s)", args.output, json.dumps(asdict(spec)))
        elif args.cmd == "run":
            grid = _grid(args)
            n = 0
            for row in cmd_run(grid, args.output):
                n += 1
                if row.error:
                    log.warning("%s/%s/%s N=%d seed=%d: %s", row.op, row.strategy,
                                row.improvements, row.N, row.seed, row.error)
                else:
                    log.info("%s/%s/%s N=%d d=%d p=%d c=%d: total %.3fs union %d result %d",
                             row.op, row.strategy, row.improvements, row.N, row.d, row.p,
                             row.cores, row.t_total, row.union_size, row.result_size)
            log.info("appended %d rows to %s", n, args.output)
        elif args.cmd == "verify":
            cfg = _verify_config(args)
            data = read_dataset_csv(args.dataset) if args.dataset else None
            report = cmd_verify(cfg, data)
            for m in report.mismatches:
                log.error("MISMATCH seed=%d kind=%s d=%d C=%r %s/%s/%s p=%d extra=%s missing=%s",
                          m.seed, m.kind, m.d, m.constraints, m.op, m.strategy, m.improvements,
                          m.p, m.extra, m.missing)
            log.info("%d runs checked, %d mismatches", report.checked, len(report.mismatches))
            return EXIT_OK if report.ok else EXIT_VERIFY_FAILED
        elif args.cmd == "plotdata":
            for path in cmd_plotdata(args.metrics, args.figure, args.output_dir):
                log.info("wrote %s", path)
    except (ConfigError, FormatError, InfeasibleConstraints, FileNotFoundError, TypeError, ValueError) as exc:
        log.error("error: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
