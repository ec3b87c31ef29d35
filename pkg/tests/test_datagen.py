import json

import numpy as np
import pytest

from flexsky import FDomContext, GenSpec, WeightConstraintSet, generate, nd_sve1f, skyline_bruteforce
from flexsky.datagen import KINDS, write_generated


def test_spec_validation():
    for bad in (dict(kind="zipf"), dict(N=0), dict(d=1), dict(d=17), dict(sigma=-1.0)):
        with pytest.raises(ValueError):
            GenSpec(**bad)


@pytest.mark.parametrize("kind", KINDS)
def test_deterministic_and_in_range(kind, tmp_path):
    spec = GenSpec(kind, 500, 3, seed=9)
    a, b = generate(spec), generate(spec)
    assert np.array_equal(a.values, b.values)
    assert a.values.min() >= 0.0 and a.values.max() <= 1.0
    write_generated(spec, tmp_path / "x.csv")
    write_generated(spec, tmp_path / "y.csv")
    assert (tmp_path / "x.csv").read_bytes() == (tmp_path / "y.csv").read_bytes()
    meta = json.loads((tmp_path / "x.csv.meta.json").read_text())
    assert meta == dict(kind=kind, N=500, d=3, seed=9, sigma=0.05)
    assert not np.array_equal(generate(GenSpec(kind, 500, 3, seed=10)).values, a.values)


def test_anticorrelated_columns():
    X = generate(GenSpec("anticorrelated", 10_000, 2, seed=0)).values
    assert np.corrcoef(X[:, 0], X[:, 1])[0, 1] < -0.3


def test_correlated_columns():
    X = generate(GenSpec("correlated", 10_000, 3, seed=0)).values
    assert np.corrcoef(X[:, 0], X[:, 2])[0, 1] > 0.8


def test_independent_means():
    X = generate(GenSpec("independent", 10_000, 4, seed=0)).values
    assert np.all(np.abs(X.mean(axis=0) - 0.5) <= 0.02)


def test_anticorrelated_skyline_is_larger():
    # with no constraints the vertices are the unit axes, so ND is the Pareto skyline
    pareto = FDomContext.from_constraints(WeightConstraintSet(4))
    wins = 0
    for seed in range(10):
        anti = len(nd_sve1f(generate(GenSpec("anticorrelated", 10_000, 4, seed)), pareto))
        ind = len(nd_sve1f(generate(GenSpec("independent", 10_000, 4, seed)), pareto))
        wins += anti > ind
    assert wins >= 6


def test_anticorrelated_nd_nontrivial():
    ctx = FDomContext.from_constraints(WeightConstraintSet.ordering(4, 0, 1))
    r = generate(GenSpec("anticorrelated", 2000, 4, seed=1))
    nd = nd_sve1f(r, ctx)
    assert 10 < len(nd) < len(skyline_bruteforce(r))
