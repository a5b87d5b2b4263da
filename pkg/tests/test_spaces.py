import json
import math

import numpy as np
import pytest

from metricurv import spaces as S
from metricurv.model_plane import Curvature, model_distance


def test_validate_metric_accepts_two_points():
    fm = S.validate_metric([[0, 1], [1, 0]])
    assert fm.n == 2


def test_validate_metric_asymmetry():
    with pytest.raises(S.MetricError) as err:
        S.validate_metric([[0, 3], [2, 0]])
    assert err.value.reason == "asymmetry"


def test_validate_metric_triangle_violation_reports_triple():
    with pytest.raises(S.MetricError) as err:
        S.validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert err.value.reason == "triangle inequality"
    assert err.value.violation == pytest.approx(1.0)
    assert set(err.value.witness) == {0, 1, 2}


def test_validate_metric_negative_and_diagonal():
    with pytest.raises(S.MetricError):
        S.validate_metric([[0, -1], [-1, 0]])
    with pytest.raises(S.MetricError):
        S.validate_metric([[0.5, 1], [1, 0]])


def test_hypothesis_symmetric_psd_like_matrices():
    hypothesis = pytest.importorskip("hypothesis")
    from hypothesis import given, settings, strategies as st

    @given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=2, max_size=8))
    @settings(max_examples=200, deadline=None)
    def inner(points):
        pts = np.array(points)
        d = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
        fm = S.validate_metric(d)  # any point-set metric validates
        assert fm.n == len(points)

    inner()


def test_grid_l1_taxicab():
    g = S.make_grid_plane(1, 1, "l1")
    assert g.n == 9
    assert g.distance(S.grid_node(g, -1, -1), S.grid_node(g, 1, 1)) == 4.0


def test_grid_l2_diagonal():
    g = S.make_grid_plane(1, 1, "l2", moves="knight")
    d = g.distance(S.grid_node(g, -1, -1), S.grid_node(g, 1, 1))
    assert d == pytest.approx(2 * math.sqrt(2))


def test_grid_l2_distortion_bounds():
    g = S.make_grid_plane(3, 0.25, "l2")
    rng = np.random.default_rng(0)
    nodes = rng.choice(g.n, size=40, replace=False)
    coords = g.coords
    for i in nodes[:12]:
        row = g.dist_row(int(i))
        eu = np.linalg.norm(coords - coords[int(i)], axis=1)
        # path metric never undercuts Euclidean distance
        assert np.min(row - eu) >= -1e-12
        mask = eu >= 8 * 0.25
        assert np.all(row[mask] / eu[mask] <= 1.025)


def test_tree_star_and_circle():
    t = S.make_tree("star", leaves=4, leg=1.0)
    for i in range(1, 5):
        for j in range(i + 1, 5):
            assert t.distance(i, j) == 2.0
    c = S.make_circle(4, 4.0)
    assert c.distance(0, 2) == 2.0


def test_hyperbolic_sample_metric_dominates_flat_polar():
    h = S.make_hyperbolic_sample(-1.0, 3.0, 30, seed=9)
    S.validate_metric(h.dist_matrix())
    curv, pts = S.hyperbolic_sample_points(h)
    d = h.dist_matrix()
    # same polar configuration laid out in the flat plane is contracted
    x1 = np.array([p.data[1] for p in pts])
    x2 = np.array([p.data[2] for p in pts])
    rad = np.arccosh(np.array([p.data[0] for p in pts]))
    ang = np.arctan2(x2, x1)
    flat = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
    fd = np.linalg.norm(flat[:, None] - flat[None, :], axis=2)
    assert np.all(d >= fd - 1e-9)


def test_l2_product_examples():
    a = S.from_matrix([[0, 3], [3, 0]])
    b = S.from_matrix([[0, 4], [4, 0]])
    p = S.l2_product(a, b)
    assert p.dist_matrix().max() == pytest.approx(5.0)
    single = S.from_matrix([[0.0]])
    q = S.l2_product(a, single)
    assert np.allclose(q.dist_matrix(), a.dist_matrix())
    path = S.make_tree("path", n=3, weight=1.0)
    pr = S.l2_product(path, path)
    # (0,0) vs (1,1) -> sqrt(2)
    assert pr.distance(0 * 3 + 0, 1 * 3 + 1) == pytest.approx(math.sqrt(2))


def test_l2_product_projection_bound():
    a = S.make_tree("path", n=4)
    b = S.make_circle(5, 5.0)
    p = S.l2_product(a, b)
    d = p.dist_matrix()
    n1, n2 = a.n, b.n
    da, db = a.dist_matrix(), b.dist_matrix()
    for i1 in range(n1):
        for i2 in range(n2):
            for j1 in range(n1):
                for j2 in range(n2):
                    lhs = d[i1 * n2 + i2, j1 * n2 + j2]
                    assert lhs >= max(da[i1, j1], db[i2, j2]) - 1e-12


def test_glue_wedge_and_two_point_set():
    seg = S.from_matrix([[0, 1], [1, 0]])
    wedge = S.glue(seg, [1], S.from_matrix([[0, 1], [1, 0]]), [0])
    assert wedge.n == 3 and wedge.distance(0, 2) == 2.0

    # gluing along a 2-point set: cross distance is the better of two sums
    sq = S.from_matrix(np.array([[0, 1, 1], [1, 0, 2], [1, 2, 0]], float))
    other = S.from_matrix(np.array([[0, 2, 3], [2, 0, 3], [3, 3, 0]], float))
    glued = S.glue(sq, [1, 2], other, [0, 1])
    d1, d2 = sq.dist_matrix(), other.dist_matrix()
    for x1 in range(3):
        x2_new = 3  # the only unmerged point of the second piece
        expect = min(d1[x1, 1] + d2[0, 2], d1[x1, 2] + d2[1, 2])
        assert glued.distance(x1, x2_new) == pytest.approx(expect)


def test_glue_never_shortens_within_pieces():
    rng = np.random.default_rng(2)
    pts1 = rng.random((8, 2)) * 4
    pts2 = rng.random((7, 2)) * 4
    pts2[0] = pts1[0] + (pts2[0] - pts2[0])  # no-op; keep shapes clear
    d1 = np.linalg.norm(pts1[:, None] - pts1[None, :], axis=2)
    d2 = np.linalg.norm(pts2[:, None] - pts2[None, :], axis=2)
    # make the gluing pair isometric: share one point only
    x1 = S.from_matrix(d1)
    x2 = S.from_matrix(d2)
    glued = S.glue(x1, [3], x2, [5])
    dg = glued.dist_matrix()
    assert np.all(dg[:8, :8] >= d1 - 1e-12)
    S.validate_metric(dg)


def test_glue_rejects_non_isometric_pairing():
    a = S.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    b = S.from_matrix([[0, 1.5, 3], [1.5, 0, 1.5], [3, 1.5, 0]])
    with pytest.raises(S.SpaceError):
        S.glue(a, [0, 2], b, [0, 2])


def test_constructors_validate():
    for handle in (
        S.make_grid_plane(2, 0.5, "l2"),
        S.make_grid_plane(3, 1, "l1"),
        S.make_tree("random", n=30, seed=1),
        S.make_circle(9, 3.0),
        S.make_warped_ladder(2, 6.0, 0.5),
    ):
        S.validate_metric(handle.dist_matrix())


def test_warped_ladder_geometry():
    lad = S.make_warped_ladder(3, 10.0, 0.25)
    # within-half-plane distances are exact Euclidean
    p = S.ladder_node(lad, 0, 0.0, 10.0)
    q = S.ladder_node(lad, 0, 2.0, 0.0)
    assert lad.distance(p, q) == pytest.approx(math.hypot(10.0, 2.0), abs=1e-9)
    # rung-crossing distance at station n equals exp(-|n|)
    for n in (-2, 0, 1, 3):
        a = S.ladder_node(lad, 0, float(n), 0.0)
        b = S.ladder_node(lad, 1, float(n), 0.0)
        assert lad.distance(a, b) == pytest.approx(math.exp(-abs(n)), abs=1e-9)
    # cross distances realize the best rung: min over m of the three-leg sum
    p2 = S.ladder_node(lad, 1, 0.0, 10.0)
    best = min(
        2 * math.hypot(10.0, m) + math.exp(-abs(m)) for m in range(-3, 4)
    )
    assert lad.distance(p, p2) == pytest.approx(best, abs=1e-9)


def test_warped_ladder_threshold_forces_far_rung():
    n = 3
    y = S.ladder_threshold_height(n)
    costs = [(2 * math.hypot(y, m) + math.exp(-abs(m)), m) for m in range(0, n + 3)]
    assert min(costs)[1] >= n


def test_json_roundtrip(tmp_path):
    g = S.make_grid_plane(1, 0.5, "l2", moves="knight")
    path = tmp_path / "grid.json"
    S.save_space(g, str(path))
    g2 = S.load_space(str(path))
    assert g2.n == g.n
    assert np.allclose(g2.dist_matrix(), g.dist_matrix())

    fm = S.make_hyperbolic_sample(-1.0, 2.0, 12, seed=3)
    path2 = tmp_path / "fm.json"
    S.save_space(fm, str(path2))
    fm2 = S.load_space(str(path2))
    assert np.allclose(fm2.dist_matrix(), fm.dist_matrix())


def test_csv_import(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,1\n1,0\n")
    fm = S.load_space(str(path))
    assert fm.n == 2 and fm.distance(0, 1) == 1.0


def test_seeded_constructors_are_reproducible():
    a = S.make_hyperbolic_sample(-1.0, 3.0, 25, seed=42)
    b = S.make_hyperbolic_sample(-1.0, 3.0, 25, seed=42)
    assert np.array_equal(a.dist_matrix(), b.dist_matrix())
    t1 = S.make_tree("random", n=20, seed=5)
    t2 = S.make_tree("random", n=20, seed=5)
    assert np.array_equal(t1.dist_matrix(), t2.dist_matrix())
