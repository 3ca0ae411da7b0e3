"""Kernel tests run against both the compiled and pure-Python backends."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from geolink.geo import _kernels_py

BACKENDS = [("python", _kernels_py)]
try:
    from geolink.geo import _kernels

    BACKENDS.append(("compiled", _kernels))
except ImportError:
    pass

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
TRIANGLE = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]


@pytest.fixture(params=BACKENDS, ids=[name for name, _ in BACKENDS])
def k(request):
    return request.param[1]


def test_compiled_backend_is_available():
    # The package builds its extension in this environment; make sure the
    # suite actually exercises it rather than silently testing one backend.
    assert len(BACKENDS) == 2


class TestArea:
    def test_unit_square(self, k):
        assert k.signed_area(SQUARE) == 1.0

    def test_triangle_half_of_square(self, k):
        assert k.signed_area(TRIANGLE) == 2.0

    def test_clockwise_is_negative(self, k):
        assert k.signed_area(list(reversed(SQUARE))) == -1.0

    def test_monte_carlo_oracle_on_random_simple_polygon(self, k):
        rng = random.Random(11)
        ring = oracles.random_star_polygon(rng, n=9, min_area=0.05)
        exact = abs(k.signed_area(ring))
        estimate = oracles.monte_carlo_area(ring, samples=1_000_000)
        assert abs(exact - estimate) / exact < 0.01


class TestPointInPolygon:
    def test_interior_and_exterior(self, k):
        assert k.point_in_polygon(0.5, 0.5, SQUARE)
        assert not k.point_in_polygon(1.5, 0.5, SQUARE)

    def test_half_open_edge_rule(self, k):
        # Lower/left boundary is inside, upper/right outside: a grid of
        # adjacent cells counts every point exactly once.
        assert k.point_in_polygon(0.0, 0.5, SQUARE)
        assert not k.point_in_polygon(1.0, 0.5, SQUARE)
        assert k.point_in_polygon(0.5, 0.0, SQUARE)
        assert not k.point_in_polygon(0.5, 1.0, SQUARE)

    def test_concave_notch(self, k):
        ring = [(0, 0), (4, 0), (4, 3), (2, 1), (0, 3)]
        assert not k.point_in_polygon(2.0, 2.0, ring)  # inside the notch
        assert k.point_in_polygon(1.0, 1.0, ring)


class TestSegments:
    def test_point_segment_distance(self, k):
        assert k.point_segment_distance(0.0, 1.0, -1.0, 0.0, 1.0, 0.0) == 1.0
        assert k.point_segment_distance(3.0, 4.0, 0.0, 0.0, 0.0, 0.0) == 5.0
        # Beyond the endpoint the distance is to the endpoint itself.
        assert k.point_segment_distance(2.0, 0.0, 0.0, 0.0, 1.0, 0.0) == 1.0

    def test_boundary_distance(self, k):
        assert k.boundary_distance(1.1, 0.5, SQUARE) == pytest.approx(0.1)
        assert k.boundary_distance(0.5, 0.5, SQUARE) == pytest.approx(0.5)


class TestSimplicity:
    def test_square_is_simple(self, k):
        assert k.ring_is_simple(SQUARE)

    def test_bowtie_is_not(self, k):
        assert not k.ring_is_simple([(0, 0), (1, 1), (1, 0), (0, 1)])

    def test_repeated_vertex_is_not(self, k):
        assert not k.ring_is_simple([(0, 0), (0, 0), (1, 0), (1, 1)])


class TestClipping:
    def test_identity_clip(self, k):
        piece = k.clip_convex(SQUARE, SQUARE)
        assert abs(k.signed_area(piece)) == pytest.approx(1.0)

    def test_disjoint_clip_is_empty(self, k):
        far = [(5.0, 5.0), (6.0, 5.0), (6.0, 6.0), (5.0, 6.0)]
        assert k.clip_convex(SQUARE, far) == []

    def test_half_overlap(self, k):
        shifted = [(0.5, 0.0), (1.5, 0.0), (1.5, 1.0), (0.5, 1.0)]
        piece = k.clip_convex(SQUARE, shifted)
        assert abs(k.signed_area(piece)) == pytest.approx(0.5)


class TestTriangulation:
    def test_square_two_triangles(self, k):
        tris = k.triangulate(SQUARE)
        assert len(tris) == 2
        assert sum(abs(k.signed_area(list(t))) for t in tris) == pytest.approx(1.0)

    def test_concave_area_preserved(self, k):
        ring = [(0, 0), (4, 0), (4, 3), (2, 1), (0, 3)]
        tris = k.triangulate(ring)
        assert sum(abs(k.signed_area(list(t))) for t in tris) == pytest.approx(
            abs(k.signed_area(ring))
        )

    def test_random_star_polygons_area_preserved(self, k):
        rng = random.Random(5)
        for _ in range(50):
            ring = oracles.random_star_polygon(rng, n=rng.randint(5, 11))
            tris = k.triangulate(ring)
            total = sum(abs(k.signed_area(list(t))) for t in tris)
            assert total == pytest.approx(abs(k.signed_area(ring)), rel=1e-9)


class TestIntersectionArea:
    def test_self_intersection_is_area(self, k):
        assert k.intersection_area(SQUARE, SQUARE) == pytest.approx(1.0, abs=1e-12)

    def test_disjoint_is_zero(self, k):
        far = [(5.0, 5.0), (6.0, 5.0), (6.0, 6.0), (5.0, 6.0)]
        assert k.intersection_area(SQUARE, far) == 0.0

    def test_concave_pair_matches_sampling(self, k):
        rng = random.Random(23)
        for _ in range(10):
            a = oracles.random_star_polygon(rng, n=8)
            b = oracles.random_star_polygon(rng, n=7)
            got = k.intersection_area(a, b)
            b_area = oracles.shoelace(b)
            want = oracles.sampled_intersection_fraction(a, b, resolution=700) * b_area
            assert abs(got - want) <= 0.01 * max(b_area, 1e-9) + 1e-4


class TestGridCells:
    def test_full_cover(self, k):
        assert k.cells_inside(SQUARE, 0.0, 0.0, 0.5, 2, 2) == [0, 1, 2, 3]

    def test_offset_polygon(self, k):
        shifted = [(0.5, 0.0), (1.5, 0.0), (1.5, 1.0), (0.5, 1.0)]
        # Centers at x=0.25/0.75: only the right-hand column is inside.
        assert k.cells_inside(shifted, 0.0, 0.0, 0.5, 2, 2) == [1, 3]

    def test_adjacent_tiles_partition_centers(self, k):
        left = [(0.0, 0.0), (0.5, 0.0), (0.5, 1.0), (0.0, 1.0)]
        right = [(0.5, 0.0), (1.0, 0.0), (1.0, 1.0), (0.5, 1.0)]
        cells_left = set(k.cells_inside(left, 0.0, 0.0, 0.25, 4, 4))
        cells_right = set(k.cells_inside(right, 0.0, 0.0, 0.25, 4, 4))
        assert cells_left.isdisjoint(cells_right)
        assert len(cells_left) + len(cells_right) == 16


coord = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=3, max_size=10), st.tuples(coord, coord))
def test_backends_agree_on_point_membership(points, probe):
    hull = oracles.convex_hull(points)
    if len(hull) < 3 or oracles.shoelace(hull) < 1e-6:
        return
    results = {name: impl.point_in_polygon(probe[0], probe[1], hull) for name, impl in BACKENDS}
    assert len(set(results.values())) == 1, results


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coord, coord), min_size=4, max_size=12))
def test_backends_agree_on_intersection_area(points):
    hull = oracles.convex_hull(points)
    if len(hull) < 3 or oracles.shoelace(hull) < 1e-6:
        return
    shifted = [(x + 1.0, y + 0.5) for x, y in hull]
    areas = {name: impl.intersection_area(hull, shifted) for name, impl in BACKENDS}
    values = list(areas.values())
    assert all(abs(v - values[0]) < 1e-9 for v in values)
