import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitforge.gamma import GammaSet, feasible, objective

GAMMAS = [
    GammaSet.all(),
    GammaSet.zero_to_one(),
    GammaSet.one_to_inf(),
    GammaSet.annulus(0.5, 4.0),
    GammaSet.annulus(2.0, 2.0),
    GammaSet.singleton(3.0),
    GammaSet.of_grid([2.0 ** k for k in range(-5, 6)]),
]
pos = st.floats(1e-3, 1e3)


def grid_min(c, d, gamma, n=10_000, levels=3):
    """Brute minimum of max(lam*c, d/lam) on a log grid, zoomed around the best point."""
    if gamma.kind == "grid":
        return min(max(m * c, d / m) for m in gamma.grid)
    lo, hi = gamma.bounds()
    a, b = math.log(max(lo, 1e-9)), math.log(min(hi, 1e9))
    best = math.inf
    for _ in range(levels):
        lam = np.exp(np.linspace(a, b, n)) if b > a else np.array([math.exp(a)])
        lam = lam[[gamma.contains(float(x)) or gamma.kind == "singleton" for x in lam]] if gamma.kind != "singleton" else np.array([gamma.mag0])
        vals = np.maximum(lam * c, d / lam)
        i = int(np.argmin(vals))
        best = min(best, float(vals[i]))
        step = (b - a) / (n - 1) if b > a else 0
        a, b = max(math.log(lam[i]) - 2 * step, math.log(max(lo, 1e-9))), min(math.log(lam[i]) + 2 * step, math.log(min(hi, 1e9)))
    return best


@pytest.mark.parametrize("gamma", GAMMAS, ids=lambda g: g.kind)
@given(c=pos, d=pos)
def test_objective_matches_log_grid(gamma, c, d):
    val = objective(c, d, gamma).value
    ref = grid_min(c, d, gamma)
    assert val <= ref * (1 + 1e-12)
    assert val == pytest.approx(ref, rel=1e-6)


def test_objective_limits():
    assert objective(0.0, 3.0, GammaSet.all()).value == 0.0
    assert not objective(0.0, 3.0, GammaSet.all()).attained
    assert objective(2.0, 0.0, GammaSet.one_to_inf()).value == 2.0
    assert objective(0.0, 3.0, GammaSet.zero_to_one()).value == 3.0
    assert objective(4.0, 1.0, GammaSet.all()).value == pytest.approx(2.0)


def test_grid_converges_to_annulus():
    rng = np.random.default_rng(5)
    ann = GammaSet.annulus(0.25, 8.0)
    prev = math.inf
    for n in (4, 16, 64, 256, 1024):
        g = GammaSet.of_grid(np.geomspace(0.25, 8.0, n))
        gaps = []
        for c, d in rng.uniform(0.01, 10, size=(50, 2)):
            exact = objective(c, d, ann).value
            gaps.append(objective(c, d, g).value / exact - 1)
        gap = max(gaps)
        assert gap >= -1e-12
        assert gap <= prev + 1e-12
        prev = gap
    assert prev < 2e-3


@given(c=pos, d=pos, theta=st.floats(-10, 10))
def test_rotation_leaves_objective_unchanged(c, d, theta):
    for g in GAMMAS:
        r = g.rotate(theta)
        assert objective(c, d, r) == objective(c, d, g)
        assert objective(c, d, g.magnitudes()) == objective(c, d, g)


def test_singleton_rotation_keeps_magnitude():
    g = GammaSet.singleton(2.0).rotate(1.0)
    assert g.mag0 == pytest.approx(2.0)
    assert g.magnitudes() == GammaSet.singleton(g.mag0)


@pytest.mark.parametrize("gamma", GAMMAS, ids=lambda g: g.kind)
@given(c=st.floats(0, 1e3), d=st.floats(0, 1e3), eps=st.floats(1e-3, 1e3))
def test_feasible_witness_is_valid(gamma, c, d, eps):
    ok, lam = feasible(c, d, eps, gamma)
    if ok:
        assert gamma.contains(lam) or gamma.kind == "singleton"
        assert lam * c < eps and d / lam < eps
    else:
        assert objective(c, d, gamma).value >= eps * (1 - 1e-12) or gamma.kind in ("singleton", "grid", "annulus")


def test_neighbours_walk_outward():
    g = GammaSet.of_grid([1, 2, 4, 8])
    assert list(g.neighbours(3.0)) == [4.0, 2.0, 8.0, 1.0]
    it = GammaSet.all().neighbours(1.0)
    assert [next(it) for _ in range(3)] == [1.0, math.sqrt(2), 1 / math.sqrt(2)]


def test_invalid_sets():
    with pytest.raises(ValueError):
        GammaSet.annulus(2, 1)
    with pytest.raises(ValueError):
        GammaSet.singleton(0)
    with pytest.raises(ValueError):
        GammaSet.of_grid([])
