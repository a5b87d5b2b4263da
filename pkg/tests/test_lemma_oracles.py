import math

import numpy as np
import pytest

from metricurv import lemma_oracles as L
from metricurv import spaces as S
from metricurv.conditions import delta_hyperbolicity, rcat_scan
from metricurv.model_plane import Curvature

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


def test_plane_interp_bound_endpoints_and_midpoint():
    assert L.plane_interp_bound(3, 4, 5, 0.0) == 9.0
    # x=(0,1), y=(-1,0), z=(1,0): u at t=1/2 is the origin, d(x,u)^2 = 1
    rhs = L.plane_interp_bound(SQRT2, SQRT2, 2.0, 0.5)
    assert rhs == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        L.plane_interp_bound(1, 1, 5, 0.5)


def test_plane_interp_bound_matches_coordinates():
    rng = np.random.default_rng(0)
    for _ in range(500):
        x, y, z = rng.random((3, 2)) * 8 - 4
        t = float(rng.random())
        u = y + t * (z - y)
        rhs = L.plane_interp_bound(
            float(np.linalg.norm(x - y)),
            float(np.linalg.norm(x - z)),
            float(np.linalg.norm(y - z)),
            t,
        )
        assert float(np.linalg.norm(x - u)) ** 2 == pytest.approx(rhs, abs=1e-9)


def test_ellipse_bound_values():
    m, brute = L.ellipse_bound(2.0, 1.0)
    assert m == pytest.approx(math.sqrt(5.0) / 2.0, abs=1e-12)
    assert brute <= m + 1e-9
    assert brute == pytest.approx(m, rel=1e-6)  # attained at the minor axis
    m0, b0 = L.ellipse_bound(3.0, 0.0)
    assert m0 == 0.0 and b0 == 0.0


@pytest.mark.parametrize("l", [0.5, 1.0, 10.0, 100.0])
def test_ellipse_bound_short_function_cases(l):
    h = 1.0 / max(1.0, l)
    m, brute = L.ellipse_bound(l, h, grid=20_000)
    assert m <= SQRT3 / 2.0 + 1e-12
    assert brute <= m + 1e-9


def test_ellipse_brute_matches_closed_form():
    rng = np.random.default_rng(1)
    for _ in range(20):
        l = 0.2 + float(rng.random()) * 20
        h = float(rng.random()) * 2
        m, brute = L.ellipse_bound(l, h, grid=50_000)
        assert brute == pytest.approx(m, rel=1e-6)


def test_zipper_r_formula_and_monotonicity():
    assert L.zipper_r(1.0, 2.0, math.pi / 2, "near") == pytest.approx(3.0)
    for a, e in ((1.0, 1.5), (1.0, 3.0), (2.0, 1.5), (2.0, 3.0)):
        # the near branch lives on [0, pi - acos(1/e)); far on [0, acos(1/e))
        top = math.pi - math.acos(1.0 / e)
        thetas = np.linspace(0.1, top - 0.05, 50)
        rs = [L.zipper_r(a, e, t, "near") for t in thetas]
        diffs = np.diff(rs) / np.diff(thetas)
        assert np.all(diffs > 0)  # theta decreases as r decreases
        cut = math.acos(1.0 / e)
        thetas = np.linspace(0.05, cut - 0.05, 30)
        rs = [L.zipper_r(a, e, t, "far") for t in thetas]
        assert np.all(np.diff(rs) > 0)
    with pytest.raises(ValueError):
        L.zipper_r(1.0, 2.0, math.pi / 2, "far")


def test_zipper_r_against_coordinate_oracle():
    for sign in (1.0, -1.0):
        for w1 in (1.05, 1.7, 4.0, 9.0):
            r, theta = L.zipper_r_oracle(1.0, 2.0, w1, sign)
            assert L.zipper_r(1.0, 2.0, theta, "near") == pytest.approx(r, abs=1e-9)
        for w1 in (-1.05, -1.7, -4.0):
            r, theta = L.zipper_r_oracle(1.0, 2.0, w1, sign)
            assert L.zipper_r(1.0, 2.0, theta, "far") == pytest.approx(r, abs=1e-9)


def test_zipper_identity_configuration():
    rng = np.random.default_rng(3)
    chk = L.zipper_b_check(rng)
    assert chk.passed


def test_zipper_pert_sweep():
    checks = L.zipper_pert_checks(400, seed=2)
    assert len(checks) == 2000
    worst = min(c.slack for c in checks)
    assert worst >= -1e-9


def test_tripod_gap_tree_and_cycle():
    t = S.make_tree("random", n=25, seed=6)
    checks = L.tripod_gap_check(t, 0.0, samples=60, seed=0)
    assert checks and all(c.passed for c in checks)
    c6 = S.make_circle(6, 6.0)
    d6, _ = delta_hyperbolicity(c6)
    checks = L.tripod_gap_check(c6, d6, samples=120, seed=1)
    assert checks and all(c.passed for c in checks)


def test_tripod_gap_hyperbolic_sample():
    h = S.make_hyperbolic_sample(-1.0, 4.0, 40, seed=2)
    dh, _ = delta_hyperbolicity(h)
    checks = L.tripod_gap_check(h, dh, samples=200, seed=3)
    assert checks and all(c.slack >= -1e-9 for c in checks)


def test_rough_convexity_grid_and_tree():
    g = S.make_grid_plane(2, 0.5, "l2")
    c_hat, _ = rcat_scan(g, Curvature.euclidean(), 30, 8, seed=0)
    checks = L.rough_convexity_check(g, c_hat, samples=20, seed=1)
    assert all(c.slack >= -1e-9 for c in checks)
    t = S.make_tree("random", n=20, seed=4)
    c_hat, _ = rcat_scan(t, Curvature.euclidean(), 30, 8, seed=0)
    checks = L.rough_convexity_check(t, c_hat, samples=20, seed=2)
    assert all(c.slack >= -1e-9 for c in checks)


def test_short_vs_geodesic_gap_tree_and_grid():
    t = S.make_tree("random", n=25, seed=9)
    ck = L.short_vs_geodesic_gap(t, 0, 10, 0.0, 0.5, c_hat=2.0, seed=0)
    assert ck.passed
    g = S.make_grid_plane(3, 0.25, "l2")
    x, y = S.grid_node(g, -2.5, 0), S.grid_node(g, 2.5, 0)
    L_ = g.distance(x, y)
    ck = L.short_vs_geodesic_gap(g, x, y, 0.0, 1.0 / max(1.0, L_), c_hat=0.0, seed=1)
    # CAT(0)-style variant: gap <= 1 + sqrt(3)/2 plus the snap allowance
    assert ck.lhs <= 1.0 + SQRT3 / 2.0 + 2.0 * g.snap_budget


def test_l1_rough_convexity_violations_grow():
    # negative certificate: against a fixed reference constant the taxicab
    # plane's violations grow with scale
    worst = []
    for n in (2, 4, 8):
        g = S.make_grid_plane(n, 1, "l1")
        checks = L.rough_convexity_check(g, 0.0, samples=25, seed=5)
        worst.append(max(-c.slack for c in checks))
    assert worst[0] < worst[1] < worst[2]


def test_constant_conversions_table():
    t = L.constant_conversions("cat0")
    assert t["rcat0"] == 2.0 + SQRT3
    t = L.constant_conversions("hrcat0", 1.0)
    assert t["rcat0"] == pytest.approx(5.0 + SQRT3)
    t = L.constant_conversions("very_weak", 2.0)
    assert t["bolic"] == 1.0
    t = L.constant_conversions("bolic", 1.0)
    assert t["very_weak_rcat0"] == pytest.approx(4.0 + SQRT2)
    t = L.constant_conversions("weak_hrcat0", 1.5)
    assert t["four_point"] == 3.0
    t = L.constant_conversions("four_point", 1.0, kappa=-1.0)
    assert t["weak_rcat0"] == pytest.approx(2.0 + SQRT3 / 2.0)
    assert t["rcat_kappa"] == pytest.approx(6.0 + 4.0 * math.log(3.0))
    t = L.constant_conversions("four_point", 1.0, kappa=-math.inf)
    assert t["rcat_minus_inf"] == 6.0
    t = L.constant_conversions("delta_hyperbolic", 0.5)
    assert t["rcat_minus_inf"] == 4.0
    with pytest.raises(ValueError):
        L.constant_conversions("nonsense")
