import numpy as np
import pytest

from cdtrade.geometry import (Polyhedron2D, RegionPoint, concave_envelope, convex_hull_2d, pareto_front,
                              polygon_area, rate_region_hull, upper_hull)


def test_region_point_validation():
    with pytest.raises(ValueError):
        RegionPoint((-0.1, 0.2))
    assert RegionPoint((1, 2), (0.5,)).rates == (1.0, 2.0)


def test_polyhedron():
    poly = Polyhedron2D.from_bounds(r1=1.0, r2=1.0, sums=(1.5,))
    assert poly.contains(0.5, 1.0)
    assert not poly.contains(1.0, 1.0)
    v = poly.vertices()
    assert len(v) == 5
    assert polygon_area(v) == pytest.approx(1.0 - 0.125)
    # negative bounds clamp to the origin
    assert Polyhedron2D.from_bounds(r1=-0.3, r2=1.0).contains(0.0, 0.5)
    with pytest.raises(ValueError):
        Polyhedron2D(((1.0, 0.0, -1.0),))


def test_hull_square_with_interior():
    rng = np.random.default_rng(0)
    pts = np.vstack([[[0, 0], [1, 0], [1, 1], [0, 1]], rng.uniform(0.1, 0.9, (50, 2))])
    hull = convex_hull_2d(pts)
    assert len(hull) == 4
    assert polygon_area(hull) == pytest.approx(1.0)


def test_hull_collinear_dropped():
    hull = convex_hull_2d([[0, 0], [0.5, 0], [1, 0], [0, 1]])
    assert len(hull) == 3


def test_hull_tiny_scale():
    pts = np.array([[0, 0], [1, 0], [0, 1], [0.2, 0.2]]) * 1e-9
    assert len(convex_hull_2d(pts)) == 3


def test_envelope_lifts_dip():
    x, env = concave_envelope([0, 1, 2], [0, 0, 2])
    assert env.tolist() == [0.0, 1.0, 2.0]
    assert upper_hull([0, 1, 2], [0, 0, 2]).tolist() == [0, 2]


def test_envelope_nondecreasing():
    x, env = concave_envelope([0, 1, 2, 3], [1.0, 2.0, 1.5, 0.5])
    assert np.all(np.diff(env) >= 0)
    assert env[-1] == pytest.approx(2.0)


def test_envelope_requires_increasing_x():
    with pytest.raises(ValueError):
        concave_envelope([0, 0], [1, 2])


def _pareto_bruteforce(pts, maximize, minimize):
    obj = np.concatenate([pts[:, maximize], -pts[:, minimize]], axis=1)
    keep = []
    for i in range(len(obj)):
        dominated = any(np.all(obj[j] >= obj[i]) and np.any(obj[j] > obj[i]) for j in range(len(obj)))
        if not dominated:
            keep.append(i)
    return keep


def test_pareto_matches_bruteforce():
    rng = np.random.default_rng(1)
    pts = rng.uniform(size=(500, 3))
    got = pareto_front(pts, maximize=(0, 1), minimize=(2,))
    assert sorted(got.tolist()) == _pareto_bruteforce(pts, [0, 1], [2])


def test_pareto_duplicates():
    got = pareto_front([[1, 1], [1, 1], [0, 0]], maximize=(0, 1))
    assert got.tolist() == [0]
    with pytest.raises(ValueError):
        pareto_front([[1, 1]])


def test_rate_region_hull_down_closure():
    hull = rate_region_hull([[1.0, 0.5], [0.5, 1.0]])
    assert polygon_area(hull) == pytest.approx(1.0 - 0.125)
