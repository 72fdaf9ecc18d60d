import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hullborne import rotation
from hullborne.hull import (
    DegenerateHull,
    hull_volume,
    quickhull,
    vertex_mean_centroid,
    volumetric_centroid,
)
from hullborne.primitives import cone, icosphere, unit_cube

from oracles import brute_force_hull_vertices, monte_carlo_hull_volume

CUBE = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], float)

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False, width=64)
clouds = st.integers(5, 50).flatmap(lambda n: arrays(np.float64, (n, 3), elements=coords))


def spans_volume(p):
    return np.linalg.matrix_rank(p - p.mean(axis=0), tol=1e-6 * max(1.0, np.abs(p).max())) == 3


def test_cube_counts_and_volume():
    h = quickhull(CUBE)
    assert (h.n_vertices, h.n_faces) == (8, 12)
    assert hull_volume(h) == pytest.approx(1.0, rel=1e-12)


def test_interior_and_face_points_excluded():
    pts = np.vstack([CUBE, [[0.5, 0.5, 0.5], [0.5, 0.5, 1.0], [0.2, 0.0, 0.7]]])
    h = quickhull(pts)
    assert sorted(h.vertex_indices.tolist()) == list(range(8))


def test_tetrahedron_volume_exact():
    v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], float)
    assert hull_volume(quickhull(v)) == pytest.approx(1 / 6, rel=1e-12)


def test_faces_point_outward():
    pts = icosphere(1.0, 2).vertices
    h = quickhull(pts)
    nrm, _ = h.planes()
    centers = h.hull_vertices[h.hull_faces].mean(axis=1)
    assert np.all(np.einsum("ij,ij->i", nrm, centers) > 0)


@pytest.mark.parametrize("pts", [
    np.zeros((3, 3)),
    np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [2, 3, 0]], float),
    np.array([[i, 2 * i, 3 * i] for i in range(6)], float),
    np.ones((10, 3)),
])
def test_degenerate_inputs_raise(pts):
    with pytest.raises(DegenerateHull):
        quickhull(pts)


def test_pyramid_vertex_mean():
    pts = np.vstack([CUBE, [[0.5, 0.5, 2.0]]])
    # the apex lifts the vertex mean to (0.5, 0.5, (4 + 2) / 9)
    assert vertex_mean_centroid(quickhull(pts)) == pytest.approx([0.5, 0.5, 6 / 9], abs=1e-12)


def test_slab_volumetric_centroid():
    pts = CUBE * [2.0, 1.0, 0.5] + [1.0, -1.0, 3.0]
    c = volumetric_centroid(quickhull(pts))
    assert c == pytest.approx([2.0, -0.5, 3.25], abs=1e-12)


def test_cone_volumetric_centroid():
    m = cone(1.0, 1.0, 128)
    c = volumetric_centroid(quickhull(m.vertices))
    assert c[2] == pytest.approx(0.25, rel=0.01)
    # the vertex mean sits almost on the base instead
    assert vertex_mean_centroid(quickhull(m.vertices))[2] < 0.01


def test_scaled_cube_volume():
    assert hull_volume(quickhull(unit_cube().vertices * 2.0)) == pytest.approx(8.0, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(5, 50))
def test_matches_brute_force_vertices(seed, n):
    p = np.random.default_rng(seed).normal(size=(n, 3))
    assert set(quickhull(p).vertex_indices.tolist()) == brute_force_hull_vertices(p)


@settings(max_examples=100, deadline=None)
@given(clouds)
def test_containment(p):
    if not spans_volume(p):
        return
    h = quickhull(p)
    assert h.contains(p, tol=1e-9 * max(1.0, np.abs(p).max())).all()


@settings(max_examples=100, deadline=None)
@given(clouds)
def test_idempotent(p):
    if not spans_volume(p):
        return
    h = quickhull(p)
    h2 = quickhull(h.hull_vertices)
    assert h2.n_vertices == h.n_vertices
    assert hull_volume(h2) == pytest.approx(hull_volume(h), rel=1e-9)


@settings(max_examples=100, deadline=None)
@given(clouds)
def test_euler_formula(p):
    if not spans_volume(p):
        return
    h = quickhull(p)
    assert h.n_vertices - len(h.edges()) + h.n_faces == 2
    assert 2 * len(h.edges()) == 3 * h.n_faces


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi),
       st.floats(-math.pi, math.pi))
def test_rotation_invariance(seed, a, b, c):
    p = np.random.default_rng(seed).uniform(-1, 1, size=(40, 3))
    rot = rotation.to_matrix(rotation.from_euler(a, b, c))
    h1 = quickhull(p)
    h2 = quickhull(p @ rot.T)
    assert set(h1.vertex_indices.tolist()) == set(h2.vertex_indices.tolist())
    assert hull_volume(h2) == pytest.approx(hull_volume(h1), rel=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_volume_vs_monte_carlo(seed):
    rng = np.random.default_rng(1000 + seed)
    p = rng.normal(size=(int(rng.integers(8, 30)), 3))
    mc, sigma = monte_carlo_hull_volume(p, 200_000, rng)
    assert abs(hull_volume(quickhull(p)) - mc) < 3 * sigma


def test_operation_count_is_positive_and_deterministic():
    p = np.random.default_rng(3).normal(size=(500, 3))
    a, b = quickhull(p), quickhull(p)
    assert a.point_plane_tests == b.point_plane_tests > 500
