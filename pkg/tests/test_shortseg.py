import math

import numpy as np
import pytest

from metricurv import spaces as S
from metricurv.shortseg import (
    ShortSegment,
    build_short_triangle,
    geodesic,
    point_at_arclength,
    sample_short_segment,
    standard_short_h,
)


@pytest.mark.parametrize(
    "dists,expect",
    [((0, 0, 0), 1.0), ((3, 4, 5), 0.2), ((0.5, 0.5, 0.9), 1.0)],
)
def test_standard_short_h(dists, expect):
    assert standard_short_h(*dists) == expect


def test_geodesic_on_grid_and_identity():
    g = S.make_grid_plane(3, 1, "l1")
    a, b = S.grid_node(g, 0, 0), S.grid_node(g, 3, 0)
    seg = geodesic(g, a, b)
    assert seg.length == 3.0 and seg.slack == 0.0 and len(seg.nodes) == 4
    empty = geodesic(g, a, a)
    assert empty.length == 0.0 and empty.nodes == [a]


def test_geodesic_tree_through_meet():
    t = S.make_tree("star", leaves=3, leg=2.0)
    seg = geodesic(t, 1, 2)
    assert seg.nodes == [1, 0, 2] and seg.length == 4.0


def test_sample_short_segment_cycle_detour():
    c6 = S.make_circle(6, 6.0)
    # h larger than the detour cost: when a far waypoint is selected the
    # long way is taken and the slack is (long - short)
    slacks = set()
    for seed in range(12):
        seg = sample_short_segment(c6, 0, 2, h=3.0, seed=seed)
        assert seg.slack <= 3.0
        slacks.add(round(seg.slack, 12))
    assert 2.0 in slacks  # the long way (length 4 vs distance 2) appears


def test_sample_short_segment_small_h_gives_geodesic():
    g = S.make_grid_plane(2, 1, "l1")
    a, b = S.grid_node(g, -2, 0), S.grid_node(g, 2, 0)
    seg = sample_short_segment(g, a, b, h=1e-9, seed=1)
    assert seg.slack == 0.0 and seg.length == 4.0


def test_apex_waypoint_matches_detour_formula():
    # x=(-R,0), y=(R,0): the waypoint (0,t) with t = sqrt(hR + h^2/4) is an
    # exactly-h detour in the plane; on the grid it stays within h
    R, h = 4.0, 1.0
    g = S.make_grid_plane(5, 0.25, "l2")
    x, y = S.grid_node(g, -R, 0), S.grid_node(g, R, 0)
    t = math.sqrt(h * R + h * h / 4.0)
    w = S.grid_node(g, 0.0, t)
    detour = g.distance(x, w) + g.distance(w, y) - g.distance(x, y)
    assert 0.0 < detour <= h + 1e-9
    planar = 2 * math.hypot(R, t) - 2 * R
    assert planar == pytest.approx(h, abs=1e-9)


def test_defining_inequality_and_subpaths():
    g = S.make_grid_plane(3, 0.5, "l2")
    rng = np.random.default_rng(4)
    for k in range(30):
        a, b = rng.choice(g.n, size=2, replace=False)
        h = 1.0 / max(1.0, g.distance(int(a), int(b)))
        seg = sample_short_segment(g, int(a), int(b), h, seed=k)
        assert seg.length >= seg.endpoint_distance >= seg.length - h - 1e-9
        # subpaths of an h-short segment are h-short
        nodes = seg.nodes
        for k0, k1 in ((0, len(nodes) - 1), (0, len(nodes) // 2), (len(nodes) // 3, len(nodes) - 1)):
            sub = seg.subsegment(k0, k1)
            assert sub.length >= sub.endpoint_distance >= sub.length - h - 1e-9


def test_point_at_arclength():
    g = S.make_grid_plane(3, 1, "l1")
    a, b = S.grid_node(g, -3, 0), S.grid_node(g, 3, 0)
    seg = geodesic(g, a, b)
    node, pre, suf = point_at_arclength(seg, 0.0)
    assert node == a and pre == 0.0
    node, pre, suf = point_at_arclength(seg, seg.length)
    assert node == b and suf == 0.0
    node, pre, suf = point_at_arclength(seg, seg.length / 2)
    assert pre == suf == 3.0 and node == S.grid_node(g, 0, 0)
    # prefix + suffix reproduces the total length (float associativity only)
    for t in np.linspace(0, seg.length, 13):
        _, pre, suf = point_at_arclength(seg, float(t))
        assert pre + suf == pytest.approx(seg.length, abs=1e-12)


def test_build_short_triangle_bookkeeping():
    g = S.make_grid_plane(3, 0.5, "l2")
    x, y, z = S.grid_node(g, -2, 0), S.grid_node(g, 2, 0), S.grid_node(g, 0, 2)
    h = standard_short_h(g.distance(x, y), g.distance(x, z), g.distance(y, z))
    tri = build_short_triangle(g, x, y, z, h, seed=3)
    assert tri.vertices == (x, y, z)
    for side in tri.sides:
        assert side.slack <= h + 1e-12
    # degenerate triangle: y = z leaves one empty side
    tri2 = build_short_triangle(g, x, y, y, h, seed=3)
    assert tri2.sides[1].length == 0.0
    assert tri2.sides[0].start == x and tri2.sides[2].end == x


def test_sampling_is_reproducible():
    g = S.make_grid_plane(3, 0.5, "l2")
    a, b = S.grid_node(g, -2, -1), S.grid_node(g, 2, 1)
    s1 = sample_short_segment(g, a, b, 0.5, seed=77)
    s2 = sample_short_segment(g, a, b, 0.5, seed=77)
    assert s1.nodes == s2.nodes and s1.length == s2.length
    t1 = build_short_triangle(g, a, b, S.grid_node(g, 0, 2), 0.5, seed=9)
    t2 = build_short_triangle(g, a, b, S.grid_node(g, 0, 2), 0.5, seed=9)
    assert [s.nodes for s in t1.sides] == [s.nodes for s in t2.sides]
