import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_discrete, random_disks
from uncertain_nn.config import TieMode
from uncertain_nn.instances import gen_pvd_quartic
from uncertain_nn.model import discrete_point, disk_point, make_set
from uncertain_nn.nonzero import nn_nonzero
from uncertain_nn.oracles import enumerate_exact, mc_reference
from uncertain_nn.quadrature import QuadratureNonconvergence, adaptive_simpson, integrate_piecewise, _Budget
from uncertain_nn.quantification import (
    Method,
    SpiralIndex,
    continuous_quadrature,
    exact_discrete,
    mc_build,
    mc_query,
    mc_sample_size,
    spiral_m,
    spiral_query,
    spread,
)


def two_point_example():
    return make_set([discrete_point([(1, 0), (3, 0)], [0.5, 0.5]), discrete_point([(2, 0)])])


# ---------------------------------------------------------------------------
# exact


def test_exact_two_point_example():
    res = exact_discrete((0, 0), two_point_example())
    assert res.method is Method.EXACT
    assert res[0] == pytest.approx(0.5) and res[1] == pytest.approx(0.5)


def test_exact_single_point():
    P = make_set([discrete_point([(1, 1), (2, 5)], [0.3, 0.7])])
    assert exact_discrete((0, 0), P).entries == {0: 1.0}


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(TieMode)))
def test_exact_matches_enumeration(seed, mode):
    rng = np.random.default_rng(seed)
    P = random_discrete(seed, n=int(rng.integers(1, 6)), k=3, vary_k=True)
    q = rng.uniform(0, 10, 2)
    got = exact_discrete(q, P, mode).dense(P.n)
    want = enumerate_exact(q, P, mode).probabilities
    assert np.max(np.abs(got - want)) <= 1e-9
    if mode is TieMode.TOTAL:
        assert got.sum() == pytest.approx(1, abs=1e-9)


def test_tie_modes_on_shared_location():
    # both points share a location at the same distance
    P = make_set([discrete_point([(1, 0), (5, 0)], [0.5, 0.5]), discrete_point([(1, 0), (6, 0)], [0.5, 0.5])])
    total = exact_discrete((0, 0), P, TieMode.TOTAL).dense(2)
    closed = exact_discrete((0, 0), P, TieMode.CLOSED).dense(2)
    opened = exact_discrete((0, 0), P, TieMode.OPEN).dense(2)
    assert total.sum() == pytest.approx(1)
    assert closed.sum() < 1 < opened.sum()
    assert np.allclose(total, [0.75, 0.25])


def test_exact_positivity_matches_nonzero():
    rng = np.random.default_rng(3)
    for seed in range(40):
        P = random_discrete(seed, n=5, k=3)
        for q in rng.uniform(0, 10, (10, 2)):
            assert tuple(sorted(exact_discrete(q, P).entries)) == nn_nonzero(q, P)


def test_pvd_formula_open_ties():
    P = gen_pvd_quartic(4, seed=1)
    near = P.locations[::2]
    rng = np.random.default_rng(0)
    for q in rng.uniform(-0.5, 0.5, (20, 2)):
        rank = np.argsort(np.argsort(np.hypot(*(near - q).T)))
        got = exact_discrete(q, P, TieMode.OPEN).dense(P.n)
        assert np.allclose(got, 0.5 ** (rank + 1) + 0.5**P.n, atol=1e-12)


# ---------------------------------------------------------------------------
# quadrature


def test_simpson_polynomial_exact():
    val = adaptive_simpson(lambda x: x**3 - 2 * x, 0.0, 2.0, 1e-12, _Budget(10**5))
    assert val == pytest.approx(0.0, abs=1e-12)


def test_quadrature_budget_exhaustion():
    with pytest.raises(QuadratureNonconvergence):
        integrate_piecewise(lambda x: np.sin(1 / np.maximum(x, 1e-300)), [1e-6, 1.0], 1e-14, 200)


def test_quadrature_single_disk():
    P = make_set([disk_point((3, 1), 2)])
    assert continuous_quadrature((0, 0), P, 1e-8)[0] == pytest.approx(1, abs=1e-8)


def test_quadrature_symmetric_pair():
    P = make_set([disk_point((-3, 0), 1), disk_point((3, 0), 1)])
    res = continuous_quadrature((0, 0), P, 1e-8)
    assert res[0] == pytest.approx(0.5, abs=1e-8)
    assert res[1] == pytest.approx(0.5, abs=1e-8)


def test_quadrature_matches_sampling():
    for seed in range(3):
        P = random_disks(seed, n=3, box=3)
        q = np.random.default_rng(seed).uniform(0, 3, 2)
        got = continuous_quadrature(q, P, 1e-8).dense(P.n)
        s = 200_000
        ref = mc_reference(q, P, s, seed)
        sigma = np.sqrt(np.maximum(ref * (1 - ref), 1e-12) / s)
        assert np.all(np.abs(got - ref) <= np.maximum(1e-8, 4 * sigma))


def test_quadrature_rejects_discrete():
    with pytest.raises(TypeError):
        continuous_quadrature((0, 0), two_point_example())


# ---------------------------------------------------------------------------
# Monte Carlo


def test_mc_sample_size():
    assert mc_sample_size(0.1, 0.05, 1, 1) == 185
    assert mc_sample_size(0.1, 0.01, 1, 1) == 265
    a, b = mc_sample_size(0.1, 0.05, 3, 10), mc_sample_size(0.1, 0.05, 3, 20)
    exact = math.log(2 * 3 * 10 / 0.05) / 0.02
    assert b - a in {math.floor(math.log(2) / 0.02), math.ceil(math.log(2) / 0.02)}
    assert a == math.ceil(exact)


def test_mc_examples():
    P1 = make_set([disk_point((0, 0), 1)])
    assert mc_query((5, 5), mc_build(P1, 17, 0)).entries == {0: 1.0}
    res = mc_query((0, 0), mc_build(two_point_example(), 100_000, 4))
    assert abs(res[0] - 0.5) <= 0.01


def test_mc_determinism_and_certain_points():
    P = random_discrete(2, n=4, k=3)
    a, b = mc_build(P, 50, 9), mc_build(P, 50, 9)
    assert np.array_equal(a.instantiations, b.instantiations)
    assert not np.array_equal(a.instantiations, mc_build(P, 50, 10).instantiations)
    C = make_set([discrete_point([(i, 0)]) for i in range(3)])
    idx = mc_build(C, 20, 0)
    assert np.all(idx.instantiations == idx.instantiations[0])


def test_mc_tie_goes_to_smaller_owner():
    C = make_set([discrete_point([(0, 0)]), discrete_point([(2, 0)])])
    assert mc_query((1, 0), mc_build(C, 30, 0)).entries == {0: 1.0}


def test_mc_at_most_s_nonzero():
    P = random_discrete(5, n=30, k=2)
    res = mc_query((5, 5), mc_build(P, 7, 1))
    assert len(res.entries) <= 7


def test_mc_variance_shrinks_with_s():
    P = random_discrete(8, n=4, k=3, box=2)
    q = (1, 1)
    i = max(exact_discrete(q, P).entries.items(), key=lambda kv: kv[1])[0]
    spreads = []
    for s in (50, 2000):
        est = [mc_query(q, mc_build(P, s, seed))[i] for seed in range(40)]
        spreads.append(np.std(est))
    assert spreads[1] < spreads[0]


# ---------------------------------------------------------------------------
# spiral


def test_spread_examples():
    assert spread(make_set([discrete_point([(0, 0), (1, 0)]), discrete_point([(3, 3)])])) == 2.0
    assert spread(make_set([discrete_point([(0, 0), (1, 0)], [0.9, 0.1])])) == pytest.approx(9)
    P = random_discrete(4)
    assert spread(P) == P.weights.max() / P.weights.min()


def test_spiral_m_formula():
    assert spiral_m(1, 3, 0.1, 1000) == math.ceil(3 * math.log(10)) + 2
    assert spiral_m(1, 1, 0.99, 1000) == 1
    assert spiral_m(50, 4, 0.01, 30) == 30


def test_spiral_full_m_equals_exact():
    P = random_discrete(11, n=5, k=3)
    idx = SpiralIndex(P)
    q = (4, 4)
    big_rho = spread(P) * 1e6
    assert idx.params(0.01, big_rho).m == P.N
    assert idx.query(q, 0.01, big_rho).entries == exact_discrete(q, P).entries


def test_spiral_rejects_small_rho():
    P = random_discrete(1)
    with pytest.raises(ValueError):
        SpiralIndex(P).params(0.1, rho=0.5)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.05, 0.1, 0.2, 0.9999]))
def test_spiral_bounds_uniform_weights(seed, eps):
    rng = np.random.default_rng(seed)
    P = random_discrete(seed, n=int(rng.integers(2, 20)), k=int(rng.integers(1, 5)), weights="uniform")
    q = rng.uniform(0, 10, 2)
    exact = exact_discrete(q, P).dense(P.n)
    approx = spiral_query(q, P, eps).dense(P.n)
    assert np.all(approx <= exact)
    assert np.all(exact <= approx + eps + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_spiral_one_sided_for_any_weights(seed):
    rng = np.random.default_rng(seed)
    P = random_discrete(seed, n=8, k=4, vary_k=True)
    q = rng.uniform(0, 10, 2)
    assert np.all(spiral_query(q, P, 0.3).dense(P.n) <= exact_discrete(q, P).dense(P.n))


def adversarial_instance(eps, n):
    """p1 (weight 3 eps) nearest, then n/2 points of weight 2/n, then p2
    (weight 5 eps); every point keeps its remaining mass far away."""
    pts = [discrete_point([(1, 0), (-5000, 0)], [3 * eps, 1 - 3 * eps])]
    for t in range(n // 2):
        ang = 2 * math.pi * t / (n // 2)
        pts.append(discrete_point([(2 * math.cos(ang), 2 * math.sin(ang)), (-1001 - t, 0)], [2 / n, 1 - 2 / n]))
    pts.append(discrete_point([(10, 0), (-3000, 0)], [5 * eps, 1 - 5 * eps]))
    return make_set(pts)


def test_adversarial_remark_instance():
    eps, n = 0.05, 200
    P = adversarial_instance(eps, n)
    q = (0, 0)
    exact = exact_discrete(q, P).dense(P.n)
    p1, p2 = 0, P.n - 1
    assert exact[p1] == pytest.approx(3 * eps)
    assert exact[p2] == pytest.approx(5 * eps * (1 - 3 * eps) * (1 - 2 / n) ** (n // 2))
    assert exact[p2] < exact[p1]
    # ranking by location weight alone puts p2 ahead of p1
    naive = {p1: 3 * eps, p2: 5 * eps}
    assert naive[p2] > naive[p1]
    approx = spiral_query(q, P, eps).dense(P.n)
    assert np.all(approx <= exact) and np.all(exact <= approx + eps)
    # the small weight of p1 is never dropped
    assert approx[p1] == pytest.approx(exact[p1])
