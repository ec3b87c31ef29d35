"""Seeded synthetic datasets: independent, correlated and anticorrelated."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .core import Dataset

KINDS = ("anticorrelated", "correlated", "independent")


@dataclass(frozen=True)
class GenSpec:
    kind: str = "anticorrelated"
    N: int = 10_000
    d: int = 4
    seed: int = 0
    sigma: float = 0.05

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if not 2 <= self.d <= 16:
            raise ValueError("d must be between 2 and 16")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")


def generate(spec: GenSpec) -> Dataset:
    rng = np.random.default_rng(spec.seed)
    N, d = spec.N, spec.d
    if spec.kind == "independent":
        X = rng.random((N, d))
    elif spec.kind == "correlated":
        X = rng.random((N, 1)) + rng.normal(0.0, spec.sigma, size=(N, d))
    else:
        # offset of the plane sum(x) = d/2 jittered along its unit normal
        offset = 0.5 + rng.normal(0.0, spec.sigma, size=(N, 1)) / np.sqrt(d)
        u = rng.random((N, d))
        X = offset + (u - u.mean(axis=1, keepdims=True))
    return Dataset(np.clip(X, 0.0, 1.0))


def write_generated(spec: GenSpec, path) -> Dataset:
    """Write the dataset CSV plus a ``<path>.meta.json`` sidecar echoing the spec."""
    from .io import write_dataset_csv

    r = generate(spec)
    path = Path(path)
    write_dataset_csv(r, path)
    Path(str(path) + ".meta.json").write_text(json.dumps(asdict(spec), indent=2) + "\n")
    return r
