"""CSV datasets and the textual constraint grammar.

Dataset files have a header ``id,a1,...,ad`` and one tuple per line. Ids are
reassigned in order of appearance; the id column only has to be present.
Columns outside [0, 1] are min-max rescaled.

Constraint files hold one inequality per line, e.g. ``w1 >= w2`` or
``0.5*w1 - w3 + 2*w2 >= 0``; ``<=`` is accepted and flipped, ``#`` starts a
comment.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from .core import Dataset, WeightConstraintSet


class FormatError(ValueError):
    pass


def rescale(X: np.ndarray, maximize: Iterable[int] = ()) -> np.ndarray:
    """Negate maximization columns, then min-max rescale any column not already in [0, 1]."""
    X = np.array(X, dtype=float)
    flip = list(maximize)
    if flip:
        X[:, flip] = -X[:, flip]
    for j in range(X.shape[1]):
        col = X[:, j]
        if j in flip or col.size and (col.min() < 0.0 or col.max() > 1.0):
            lo, hi = col.min(), col.max()
            X[:, j] = (col - lo) / (hi - lo) if hi > lo else 0.0
    return X


def read_dataset_csv(path, maximize: Iterable[int] = ()) -> Dataset:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, header row is mandatory") from None
        header = [h.strip() for h in header]
        if len(header) < 3 or header[0] != "id":
            raise FormatError(f"{path}: header must be id,a1,...,ad")
        d = len(header) - 1
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != d + 1:
                raise FormatError(f"{path}:{lineno}: expected {d + 1} fields, got {len(row)}")
            try:
                rows.append([float(c) for c in row[1:]])
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
    X = np.array(rows, dtype=float).reshape(len(rows), d)
    if not np.all(np.isfinite(X)):
        raise FormatError(f"{path}: non-finite value")
    return Dataset(rescale(X, maximize), d=d)


def write_dataset_csv(r: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + [f"a{j + 1}" for j in range(r.d)])
        for i, row in zip(r.ids, r.values):
            w.writerow([int(i)] + [repr(float(v)) for v in row])


_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)\s*\*?\s*)?(w(\d+)|\d+(?:\.\d*)?)")


def _linear(expr: str, d: int, line: str) -> np.ndarray:
    coef = np.zeros(d)
    s = expr.replace(" ", "")
    if s in ("", "0"):
        return coef
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            break
        sign = -1.0 if m.group(1) == "-" else 1.0
        if m.group(4) is None:
            if m.group(2) is not None or float(m.group(3)) != 0.0:
                raise FormatError(f"constraints must be homogeneous: {line!r}")
        else:
            k = int(m.group(4))
            if not 1 <= k <= d:
                raise FormatError(f"weight w{k} out of range 1..{d}: {line!r}")
            coef[k - 1] += sign * (float(m.group(2)) if m.group(2) else 1.0)
        pos = m.end()
        if pos < len(s) and s[pos] not in "+-":
            break
    if pos != len(s):
        raise FormatError(f"cannot parse {expr.strip()!r} in {line!r}")
    return coef


def parse_constraints(text: str, d: int) -> WeightConstraintSet:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ">=" in line:
            lhs, rhs = line.split(">=", 1)
            sign = 1.0
        elif "<=" in line:
            lhs, rhs = line.split("<=", 1)
            sign = -1.0
        else:
            raise FormatError(f"expected '>=' or '<=' in {raw!r}")
        row = sign * (_linear(lhs, d, raw) - _linear(rhs, d, raw))
        rows.append(tuple(row))
    return WeightConstraintSet(d, tuple(rows))


def read_constraints(path, d: int) -> WeightConstraintSet:
    return parse_constraints(Path(path).read_text(), d)


def format_constraints(C: WeightConstraintSet) -> str:
    lines = []
    for row in C.rows:
        terms = [f"{c:+g}*w{j + 1}" for j, c in enumerate(row) if c != 0.0]
        lines.append((" ".join(terms) or "0") + " >= 0")
    return "\n".join(lines) + ("\n" if lines else "")
