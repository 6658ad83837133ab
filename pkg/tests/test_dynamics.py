import cmath
import math

import numpy as np
import pytest

from rileyslice.algebra import IntPolynomial, poly_iterate
from rileyslice.dynamics import (
    PointCloud,
    PolynomialSystem,
    Raster,
    backward_orbit,
    cluster_roots,
    escape_radius,
    escape_raster,
    escape_time,
    hausdorff,
    iterate,
    periodic_points,
    preimages,
    residual_ok,
    roots,
)
from rileyslice.words import word_polynomial

P = word_polynomial((1, 1))  # z (1 - z)^2
W = cmath.exp(1j * math.pi / 3)  # (1 + i sqrt 3) / 2


def _close_sets(a, b, tol):
    a, b = sorted(a, key=lambda z: (round(z.real, 6), z.imag)), sorted(b, key=lambda z: (round(z.real, 6), z.imag))
    return len(a) == len(b) and all(abs(x - y) <= tol for x, y in zip(a, b))


def test_roots_of_cubic():
    assert _close_sets(roots(P), [0, 1, 1], 1e-12)


def test_roots_agree_with_companion_matrix():
    rng = np.random.default_rng(0)
    for _ in range(20):
        c = tuple(int(x) for x in rng.integers(-9, 10, size=9))
        p = IntPolynomial(c[:-1] + (c[-1] or 1,))
        ours = roots(p)
        ref = np.roots(np.array(p.coeffs[::-1], dtype=float))
        assert len(ours) == p.degree
        for r in ref:
            assert min(abs(r - z) for z in ours) < 1e-6 * max(1, abs(r))
        assert all(residual_ok(p, r) for r in ours)


def test_repeated_roots():
    p = IntPolynomial((-1, 3, -3, 1))  # (z - 1)^3
    assert all(abs(r - 1) < 1e-12 for r in roots(p))
    q = IntPolynomial((1, 0, 2, 0, 1))  # (z^2 + 1)^2
    rts = roots(q)
    assert sum(abs(r - 1j) < 1e-6 for r in rts) == 2
    assert sum(abs(r + 1j) < 1e-6 for r in rts) == 2


def test_roots_of_high_degree_iterate():
    q = poly_iterate(P, 4)  # degree 81
    rts = roots(q)
    assert len(rts) == 81
    assert all(residual_ok(q, r) for r in rts)


def test_roots_rejects_constant():
    with pytest.raises(ValueError):
        roots(IntPolynomial((3,)))


def test_cluster_roots():
    pts = np.array([1.0, 1 + 1e-7, 1 - 1e-7j, 5.0])
    clusters = cluster_roots(pts)
    assert sorted(m for _, m in clusters) == [1, 3]


def test_preimages():
    pre = preimages(P, 2)
    assert len(pre) == 3
    assert all(abs(P(z) - 2) < 1e-12 for z in pre)
    assert any(abs(z - 2) < 1e-12 for z in pre)
    pre = preimages(P, 0.3 + 0.2j)
    assert all(abs(complex(P(z)) - (0.3 + 0.2j)) < 1e-12 for z in pre)


def test_orbits_of_i_and_1():
    o = iterate(P, 1j, 3)
    assert abs(o.points[1] - 2) < 1e-12
    assert o.eventually_periodic and o.period == 1 and o.preperiod == 1
    o = iterate(P, 1, 3)
    assert o.points[1] == 0 and o.period == 1
    o = iterate(P, 10, 10)
    assert o.escaped


def test_fixed_points_and_two_cycle():
    fixed = periodic_points(P, 1)
    pts = [c.points[0] for c in fixed]
    assert _close_sets(pts, [0, 2], 1e-12)
    two = periodic_points(P, 2, exact=True)
    cyc = [c for c in two if any(abs(z - W) < 1e-9 for z in c.points)]
    assert len(cyc) == 1
    assert _close_sets(cyc[0].points, [W, W.conjugate()], 1e-12)
    assert all(c.max_error(P) < 1e-12 for c in two)
    # default includes divisor periods
    assert {c.period for c in periodic_points(P, 2)} == {1, 2}


@pytest.mark.parametrize("n,count", [(3, 8), (4, 18)])
def test_cycle_counts(n, count):
    # exact period-n points number d^n - (points of smaller period), d = 3
    cycles = periodic_points(P, n, exact=True)
    assert len(cycles) == count
    assert all(c.period == n and len(c.points) == n for c in cycles)
    assert all(c.max_error(P) < 1e-9 for c in cycles)


def test_cycle_json():
    c = periodic_points(P, 2, exact=True)[0]
    obj = c.to_json()
    assert obj["period"] == 2 and len(obj["points"]) == 2


def test_escape_radius_and_time():
    R = escape_radius(P)
    assert R == 1 + 1 + 2 + 1
    assert escape_time(P, 10, 100, R) <= 2
    assert escape_time(P, 0.5, 100, R) == 0  # attracted to the parabolic point


def test_raster_geometry():
    r = escape_raster(P, (-1, 3, -2, 2), 64, 32, max_iter=50)
    assert r.data.shape == (32, 64)
    c = r.pixel_centres()
    assert c[0, 0] == pytest.approx(-1 + 4 / 128 + 1j * (2 - 4 / 64))
    assert r.pixel_of(c[5, 7]) == (5, 7)
    assert r.escaping()[0, 0]
    assert not r.escaping()[r.pixel_of(0.5)]
    pgm = r.to_pgm()
    assert pgm.startswith(b"P5\n64 32\n255\n")
    assert len(pgm) == len(b"P5\n64 32\n255\n") + 64 * 32
    assert r.boundary_mask().any()
    with pytest.raises(ValueError):
        escape_raster(P, (0, 0, 0, 1), 8, 8)
    with pytest.raises(ValueError):
        escape_raster(P, (-1, 3, -2, 2), 8, 8, bailout=1.0)


def test_raster_threads_identical():
    a = escape_raster(P, (-1, 3, -2, 2), 48, 48, max_iter=40)
    b = escape_raster(P, (-1, 3, -2, 2), 48, 48, max_iter=40, threads=3)
    assert a.to_pgm() == b.to_pgm()


def test_hausdorff():
    a = np.array([0, 1, 1j])
    assert hausdorff(a, a) == 0
    assert hausdorff(a, np.array([0, 1, 1j, 3])) == pytest.approx(math.hypot(2, 0))


def test_backward_orbit_deterministic_and_on_julia_set():
    system = PolynomialSystem.from_words([(1, 1)])
    a = backward_orbit(system, W, 500, seed=7)
    b = backward_orbit(system, W, 500, seed=7)
    c = backward_orbit(system, W, 500, seed=8)
    assert a.to_csv() == b.to_csv()
    assert a.to_csv() != c.to_csv()
    assert len(a.points) == 500
    # points should not escape and should stay in the filled Julia set's hull
    assert np.all(np.abs(a.points) < escape_radius(P))
    back = PointCloud.from_csv(a.to_csv())
    assert np.array_equal(back.points, a.points)


def test_backward_orbit_chains_and_threads():
    system = PolynomialSystem.from_words([(1,), (1, 1)])
    a = backward_orbit(system, W, 300, seed=1, chains=4, threads=1)
    b = backward_orbit(system, W, 300, seed=1, chains=4, threads=4)
    assert a.to_csv() == b.to_csv()
    assert len(np.unique(np.round(a.points, 9))) == 300


def test_polynomial_system_validation():
    with pytest.raises(ValueError):
        PolynomialSystem.from_words([])
    with pytest.raises(ValueError):
        PolynomialSystem.from_words([(1, 0)])
