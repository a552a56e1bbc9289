import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_discrete, random_disks
from uncertain_nn.instances import gen_lb_cubic, gen_lb_quadratic
from uncertain_nn.model import discrete_point, disk_point, make_set
from uncertain_nn.nonzero import (
    VertexKind,
    crossing_counts,
    enumerate_diagram_features,
    exclusion_matrix,
    exclusion_polygon,
    max_dist_envelope,
    nn_nonzero,
    nn_nonzero_discrete_via_polygons,
)
from uncertain_nn.oracles import nn_nonzero_definition


def test_envelope_examples():
    P = make_set([disk_point((0, 0), 1), disk_point((10, 0), 1)])
    assert max_dist_envelope((0, 0), P) == (1, 0)
    value, _ = max_dist_envelope((-2, 3), gen_lb_quadratic(2))
    assert value == pytest.approx(4)
    single = make_set([disk_point((3, 4), 2)])
    assert max_dist_envelope((0, 0), single) == (7, 0)


def test_nn_nonzero_examples():
    assert nn_nonzero((0, 0), make_set([disk_point((0, 0), 1), disk_point((10, 0), 1)])) == (0,)
    assert nn_nonzero((0, 0), make_set([disk_point((0, 0), 1), disk_point((1, 0), 1)])) == (0, 1)
    assert nn_nonzero((5, -7), make_set([disk_point((0, 0), 1)])) == (0,)


def test_certain_point_is_reported():
    # a single-location point has delta = Delta, yet it can be the sure nearest neighbor
    P = make_set([discrete_point([(0, 0)]), discrete_point([(5, 0), (6, 0)])])
    assert nn_nonzero((0.5, 0), P) == (0,)


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["disk", "discrete"]))
def test_nn_nonzero_matches_definition(seed, variant):
    P = random_disks(seed, n=5) if variant == "disk" else random_discrete(seed, n=5, k=3)
    q = np.random.default_rng(seed).uniform(-1, 11, 2)
    res = nn_nonzero(q, P)
    assert res == nn_nonzero_definition(q, P)
    assert max_dist_envelope(q, P)[1] in res


def test_features_quadratic_fixture():
    verts = enumerate_diagram_features(gen_lb_quadratic(2))
    crossings = [v for v in verts if v.kind is VertexKind.CROSSING]
    a = [v for v in crossings if np.allclose(v.location, (-2, 3), atol=1e-9)]
    assert a and a[0].triple == (0, 2, 1) and a[0].value == pytest.approx(4)
    b = [v for v in crossings if np.allclose(v.location, (0, 3 * math.sqrt(5)), atol=1e-9)]
    assert b and b[0].triple[:2] == (0, 3) and b[0].triple[2] in (1, 2)
    assert b[0].value == pytest.approx(8)


def test_features_single_disk_empty():
    assert enumerate_diagram_features(make_set([disk_point((0, 0), 1)])) == []


def test_features_cubic_fixture_m1():
    verts = enumerate_diagram_features(gen_lb_cubic(1))
    pattern = [v for v in verts if v.kind is VertexKind.CROSSING and v.triple[:2] == (0, 1) and v.triple[2] in (2, 3)]
    assert len(pattern) >= 4


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_feature_validity(seed):
    P = random_disks(seed, n=5)
    verts = enumerate_diagram_features(P)
    for v in verts:
        near, far = P.min_dists(v.location), P.max_dists(v.location)
        tol = 1e-9 * (1 + v.value)
        assert v.residual <= tol
        assert far.min() >= v.value - tol
        i, j, k = v.triple
        if v.kind is VertexKind.CROSSING:
            got = [near[i], near[j], far[k]]
        else:
            got = [near[i], far[j], far[k]]
        assert np.allclose(got, v.value, atol=1e-8 * (1 + v.value))
    assert verts == sorted(verts, key=lambda v: v.sort_key())
    assert sum(crossing_counts(verts).values()) == sum(v.kind is VertexKind.CROSSING for v in verts)


def test_exclusion_two_certain_points():
    P = make_set([discrete_point([(10, 0)]), discrete_point([(0, 0)])])
    poly = exclusion_polygon(0, 1, P)
    assert poly.unbounded
    assert poly.contains((4.9, 3))
    assert not poly.contains((5.1, -3))
    assert len(poly.boundary_vertices) == 0  # the boundary is one line


def test_exclusion_shared_single_location():
    P = make_set([discrete_point([(1, 1)]), discrete_point([(1, 1)])])
    poly = exclusion_polygon(0, 1, P)
    assert not poly.empty
    for x in [(0, 0), (100, -3), (1, 1)]:
        assert poly.contains(x)


def test_exclusion_rejects_same_index():
    P = random_discrete(0)
    with pytest.raises(ValueError):
        exclusion_polygon(1, 1, P)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_exclusion_boundary_and_interior(seed, k):
    P = random_discrete(seed, n=2, k=k, spread_scale=2.0)
    rng = np.random.default_rng(seed)
    for i, j in [(0, 1), (1, 0)]:
        poly = exclusion_polygon(i, j, P)
        assert len(poly.halfplanes) <= P[i].k * P[j].k
        bv = poly.boundary_vertices
        assert len(bv) <= 2 * P[i].k * P[j].k
        for v in bv:
            d_i = P.min_dists(v)[i]
            assert abs(d_i - P.max_dists(v)[j]) <= 1e-9 * (1 + d_i)
        if poly.empty:
            continue
        w = rng.dirichlet(np.ones(len(poly.vertices)), 200)
        for x in w @ poly.vertices:
            d_i = P.min_dists(x)[i]
            assert P.max_dists(x)[j] <= d_i + 1e-9 * (1 + d_i)


def test_polygons_match_envelope_off_boundary():
    rng = np.random.default_rng(5)
    for seed in range(20):
        P = random_discrete(seed, n=4, k=3)
        polys = exclusion_matrix(P)
        for q in rng.uniform(-1, 11, (50, 2)):
            assert nn_nonzero_discrete_via_polygons(q, P, polys) == nn_nonzero(q, P)


def test_polygon_boundary_semantics():
    # on the bisector of two certain points delta_i = Delta_j for both, so the
    # strict test and the closed polygons agree in excluding both
    P = make_set([discrete_point([(0, 0)]), discrete_point([(2, 0)])])
    polys = exclusion_matrix(P)
    q = (1.0, 0.5)
    assert nn_nonzero(q, P) == ()
    assert nn_nonzero_discrete_via_polygons(q, P, polys) == ()
    single = make_set([discrete_point([(0, 0), (1, 1)])])
    assert nn_nonzero_discrete_via_polygons((3, 3), single, exclusion_matrix(single)) == (0,)
