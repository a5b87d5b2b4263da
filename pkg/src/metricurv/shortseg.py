"""Generation and bookkeeping of h-short segments and triangles.

A segment is a node path whose hop lengths are distances between
consecutive nodes; its slack is the amount by which the path length exceeds
the endpoint distance.  Detours are realized as two-leg geodesic
concatenations through a waypoint, which reach every slack value available
on the graph while keeping arclength bookkeeping exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from metricurv.spaces import SpaceHandle, SpaceError


def standard_short_h(dxy: float, dxz: float, dyz: float) -> float:
    """1 / (1 v dxy v dxz v dyz)."""
    return 1.0 / max(1.0, dxy, dxz, dyz)


@dataclass
class ShortSegment:
    """Path with recorded slack: length >= d(endpoints) >= length - h."""

    space: SpaceHandle
    nodes: list
    hops: np.ndarray
    h: float
    length: float = field(init=False)
    endpoint_distance: float = field(init=False)
    slack: float = field(init=False)
    _prefix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.hops = np.asarray(self.hops, dtype=np.float64)
        if len(self.hops) != max(0, len(self.nodes) - 1):
            raise SpaceError("hop count must be len(nodes) - 1")
        self._prefix = np.concatenate([[0.0], np.cumsum(self.hops)])
        self.length = float(self._prefix[-1])
        self.endpoint_distance = (
            self.space.distance(self.nodes[0], self.nodes[-1])
            if len(self.nodes) > 1
            else 0.0
        )
        self.slack = self.length - self.endpoint_distance
        if self.slack < -1e-9 * max(1.0, self.length):
            raise SpaceError(f"path shorter than the metric distance: {self.slack}")
        if self.slack < 0.0:
            self.slack = 0.0

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    def point_at_arclength(self, t: float):
        """Nearest node to arclength t, with its exact subpath lengths.

        Returns (node, len_prefix, len_suffix); the snap error is at most the
        longest hop.  Prefix and suffix are the recorded path sums feeding
        comparison-point intervals downstream.
        """
        if t < -1e-9 or t > self.length + 1e-9:
            raise SpaceError(f"arclength {t} outside [0, {self.length}]")
        k = int(np.argmin(np.abs(self._prefix - t)))
        pre = float(self._prefix[k])
        return self.nodes[k], pre, self.length - pre

    def node_positions(self):
        """(nodes, prefix lengths, suffix lengths) for every node on the path."""
        pre = self._prefix
        return list(self.nodes), pre.copy(), self.length - pre

    def subsegment(self, k0: int, k1: int) -> "ShortSegment":
        """Subpath between node indices k0 <= k1 (h-short with the same h)."""
        if not (0 <= k0 <= k1 < len(self.nodes)):
            raise SpaceError("bad subsegment indices")
        return ShortSegment(self.space, self.nodes[k0 : k1 + 1], self.hops[k0:k1], self.h)


def _leg(space: SpaceHandle, source: int, target: int, reverse: bool = False):
    """Shortest node path from the cached tree of ``source``; hops from
    distance-row differences (exact along a shortest path)."""
    nodes = space._tree_path(source, target)
    row = space.dist_row(source)
    hops = np.diff(row[nodes])
    if reverse:
        nodes = nodes[::-1]
        hops = hops[::-1]
    return nodes, hops


def geodesic(space: SpaceHandle, x: int, y: int, h: float = 0.0) -> ShortSegment:
    """Shortest path as a segment with slack 0 (empty path when x == y)."""
    x, y = int(x), int(y)
    if x == y:
        return ShortSegment(space, [x], np.zeros(0), h)
    nodes = space.geodesic_nodes(x, y)
    row = space.dist_row(x)
    hops = np.diff(row[nodes])
    return ShortSegment(space, nodes, hops, h)


def sample_short_segment(
    space: SpaceHandle, x: int, y: int, h: float, seed: int = 0
) -> ShortSegment:
    """h-short segment via a uniformly chosen detour waypoint.

    Candidates are nodes w with 0 < d(x,w) + d(w,y) - d(x,y) <= h (up to a
    relative guard of 1e-9 so the recorded slack never exceeds h); when no
    strict detour exists the geodesic is returned.  Deterministic under seed.
    """
    x, y = int(x), int(y)
    if h <= 0.0:
        raise SpaceError("sample_short_segment needs h > 0")
    if x == y:
        return ShortSegment(space, [x], np.zeros(0), h)
    d = space.distance(x, y)
    dx = space.dist_row(x)
    dy = space.dist_row(y)
    guard = 1e-9 * max(1.0, d)
    sums = dx + dy
    cand = np.flatnonzero((sums > d + guard) & (sums <= d + h - guard))
    if cand.size == 0:
        return geodesic(space, x, y, h)
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    w = int(cand[int(rng.integers(0, cand.size))])
    n1, h1 = _leg(space, x, w)
    n2, h2 = _leg(space, y, w, reverse=True)
    seg = ShortSegment(space, n1 + n2[1:], np.concatenate([h1, h2]), h)
    if seg.slack > h:
        return geodesic(space, x, y, h)
    return seg


@dataclass
class ShortTriangle:
    """Three h-short segments joining vertices (x, y, z) pairwise; side k
    joins vertex k to vertex (k+1) mod 3."""

    vertices: tuple
    sides: tuple
    h: float

    def __post_init__(self):
        x, y, z = self.vertices
        want = ((x, y), (y, z), (z, x))
        for seg, (a, b) in zip(self.sides, want):
            if (seg.start, seg.end) != (a, b):
                raise SpaceError(
                    f"side {seg.start}->{seg.end} does not join {a}->{b}"
                )
            if seg.slack > self.h + 1e-9:
                raise SpaceError("side slack exceeds the triangle bound")

    @property
    def space(self) -> SpaceHandle:
        return self.sides[0].space

    def vertex_distances(self):
        """(d(x,y), d(x,z), d(y,z))."""
        x, y, z = self.vertices
        s = self.space
        return s.distance(x, y), s.distance(x, z), s.distance(y, z)


def triangle_from_sides(side_xy, side_yz, side_zx, h=None) -> ShortTriangle:
    hh = max(side_xy.slack, side_yz.slack, side_zx.slack) if h is None else h
    return ShortTriangle(
        (side_xy.start, side_xy.end, side_yz.end), (side_xy, side_yz, side_zx), hh
    )


def build_short_triangle(
    space: SpaceHandle, x: int, y: int, z: int, h, seed: int = 0
) -> ShortTriangle:
    """Triangle of sampled h-short sides (independent sub-seeds per side).

    ``h`` may be one slack bound or a per-side triple; degenerate triangles
    (coincident vertices give empty sides) are valid.
    """
    hs = (h, h, h) if np.isscalar(h) else tuple(h)
    children = np.random.SeedSequence(int(seed)).generate_state(3)
    pairs = ((x, y), (y, z), (z, x))
    sides = []
    for (a, b), hv, sub in zip(pairs, hs, children):
        if a == b or hv <= 0.0:
            sides.append(geodesic(space, a, b, max(hv, 0.0)))
        else:
            sides.append(sample_short_segment(space, a, b, hv, int(sub)))
    return ShortTriangle((int(x), int(y), int(z)), tuple(sides), max(hs))


def point_at_arclength(seg: ShortSegment, t: float):
    """Module-level alias of ShortSegment.point_at_arclength."""
    return seg.point_at_arclength(t)
