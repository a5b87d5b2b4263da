"""Curvature-condition checkers and minimal-constant estimators.

Every scan reports a sampled lower bound on the true minimal constant,
together with a witness that re-realizes the reported value.  The
four-point subembedding places the two comparison triangles on opposite
sides of the diagonal and optimizes the diagonal length; the rough CAT
excess minimizes comparison separation over all admissible comparison
points (the conservative quantifier).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from metricurv import _kernels as kernels
from metricurv.model_plane import (
    GEOM_TOL,
    ComparisonTriangle,
    Curvature,
    GeometryError,
    ModelPoint,
    build_comparison_triangle,
    comparison_point_interval,
    euclidean_point,
    geodesic_point,
    model_distance,
)
from metricurv.shortseg import (
    ShortSegment,
    ShortTriangle,
    build_short_triangle,
    geodesic,
    sample_short_segment,
    standard_short_h,
    triangle_from_sides,
)
from metricurv.spaces import SpaceError, SpaceHandle

DEFAULT_POOL = 160


class ConditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rough 4-point subembedding


@dataclass
class SubembedResult:
    """Minimal-C rough subembedding of an ordered 4-tuple."""

    minimal_C: float
    optimal_diagonal: float
    points: list | None
    feasible: bool
    diagnostics: dict

    def consecutive_distances(self, curvature: Curvature):
        if self.points is not None:
            p = self.points
            return tuple(
                model_distance(curvature, p[i], p[(i + 1) % 4]) for i in range(4)
            )
        d = self.diagnostics
        t = self.optimal_diagonal
        # glued-tripod legs: junctions at arclengths p, p' on the diagonal
        return (
            d["leg_p"] + d["branch_m"],
            d["branch_m"] + (t - d["leg_p"]),
            (t - d["leg_pp"]) + d["branch_mp"],
            d["branch_mp"] + d["leg_pp"],
        )

    def diagonals(self, curvature: Curvature):
        if self.points is not None:
            p = self.points
            return (
                model_distance(curvature, p[0], p[2]),
                model_distance(curvature, p[1], p[3]),
            )
        d = self.diagnostics
        return (self.optimal_diagonal, d["separation"])


def _validate_four_point(d12, d23, d34, d41, d13, d24, tol=GEOM_TOL):
    vals = (d12, d23, d34, d41, d13, d24)
    if min(vals) < -tol:
        raise ConditionError("negative distance in 4-point data")
    triples = (
        (d12, d23, d13),
        (d12, d24, d41),
        (d13, d34, d41),
        (d23, d34, d24),
    )
    for a, b, c in triples:
        if max(a - b - c, b - a - c, c - a - b) > tol:
            raise ConditionError(
                f"4-point data violates a triangle inequality: {(a, b, c)}"
            )


def rough_subembedding_C(
    curvature: Curvature,
    d12: float,
    d23: float,
    d34: float,
    d41: float,
    d13: float,
    d24: float,
) -> SubembedResult:
    """Minimal C so that (x1..x4) has a C-rough subembedding.

    Consecutive distances are embedded exactly, the first diagonal is at
    least d13, and C = max(0, d24 - separation) where the separation
    |x2bar - x4bar| is maximized: the diagonal t ranges over its feasible
    interval and the two triangles sit on opposite sides (tripod curvature:
    exact leg arithmetic, the separation is branch + branch + junction gap).
    """
    _validate_four_point(d12, d23, d34, d41, d13, d24)
    t_lo = max(d13, abs(d12 - d23), abs(d34 - d41))
    t_hi = min(d12 + d23, d34 + d41)
    if t_hi < t_lo - GEOM_TOL:
        return SubembedResult(math.inf, math.nan, None, False, {"reason": "empty t-interval"})
    t_hi = max(t_hi, t_lo)
    if curvature.kind == "tripod":
        t = t_lo
        gap = abs(d12 + d34 - d23 - d41) / 2.0
        sep = (d12 + d23 + d34 + d41) / 2.0 - t + gap
        diag = {
            "separation": sep,
            "leg_p": (d12 + t - d23) / 2.0,
            "leg_pp": (d41 + t - d34) / 2.0,
            "branch_m": (d12 + d23 - t) / 2.0,
            "branch_mp": (d41 + d34 - t) / 2.0,
        }
        return SubembedResult(max(0.0, d24 - sep), t, None, True, diag)
    kind = kernels.KIND_EUCLIDEAN if curvature.kind == "euclidean" else kernels.KIND_HYPERBOLIC
    sep, t = kernels.sep_scan(kind, curvature.scale, d12, d23, d34, d41, t_lo, t_hi)
    points = _place_subembedding(curvature, t, d12, d23, d34, d41)
    return SubembedResult(
        max(0.0, d24 - sep),
        t,
        points,
        True,
        {"separation": sep, "t_interval": (t_lo, t_hi), "grid_cells": 256},
    )


def _place_subembedding(curvature, t, d12, d23, d34, d41):
    """Model points of the optimal placement (diagonal along the reference
    geodesic, x2 above, x4 below)."""
    if curvature.kind == "euclidean":
        if t <= 0.0:
            return [
                euclidean_point(0, 0),
                euclidean_point(0, d12),
                euclidean_point(0, 0),
                euclidean_point(0, -d41),
            ]
        x2 = (d12 * d12 + t * t - d23 * d23) / (2.0 * t)
        y2 = math.sqrt(max(0.0, d12 * d12 - x2 * x2))
        x4 = (d41 * d41 + t * t - d34 * d34) / (2.0 * t)
        y4 = math.sqrt(max(0.0, d41 * d41 - x4 * x4))
        return [
            euclidean_point(0.0, 0.0),
            euclidean_point(x2, y2),
            euclidean_point(t, 0.0),
            euclidean_point(x4, -y4),
        ]
    s = curvature.scale
    base = ModelPoint("hyperbolic", (1.0, 0.0, 0.0))
    x3 = ModelPoint("hyperbolic", (math.cosh(t * s), math.sinh(t * s), 0.0))

    def polar(r, cos_a, sign):
        if r <= 0.0:
            return base
        sin_a = math.sqrt(max(0.0, 1.0 - cos_a * cos_a))
        return ModelPoint(
            "hyperbolic",
            (math.cosh(r * s), math.sinh(r * s) * cos_a, sign * math.sinh(r * s) * sin_a),
        )

    if t <= 0.0 or math.sinh(t * s) == 0.0:
        return [base, polar(d12, 1.0, 1.0), base, polar(d41, 1.0, -1.0)]
    ca2 = (math.cosh(d12 * s) * math.cosh(t * s) - math.cosh(d23 * s)) / (
        math.sinh(d12 * s) * math.sinh(t * s)
    ) if d12 > 0 else 1.0
    ca4 = (math.cosh(d41 * s) * math.cosh(t * s) - math.cosh(d34 * s)) / (
        math.sinh(d41 * s) * math.sinh(t * s)
    ) if d41 > 0 else 1.0
    ca2 = min(1.0, max(-1.0, ca2))
    ca4 = min(1.0, max(-1.0, ca4))
    return [base, polar(d12, ca2, 1.0), x3, polar(d41, ca4, -1.0)]


def subembed_for_tuple(X: SpaceHandle, curvature: Curvature, tup) -> SubembedResult:
    a, b, c, d = (int(i) for i in tup)
    dd = X.distance
    return rough_subembedding_C(
        curvature, dd(a, b), dd(b, c), dd(c, d), dd(d, a), dd(a, c), dd(b, d)
    )


# ---------------------------------------------------------------------------
# delta-hyperbolicity


def delta_hyperbolicity(X: SpaceHandle, cap: int = 400):
    """Exact brute force over all 4-subsets (four-point sums form).

    Returns (delta, witness 4-tuple).  The scan is O(n^4); the cap keeps it
    at desk scale.
    """
    if X.n > cap:
        raise ConditionError(f"delta scan of n={X.n} exceeds cap {cap}")
    d = X.dist_matrix()
    delta, wit = kernels.delta_hyp(np.ascontiguousarray(d))
    return float(delta), tuple(int(i) for i in wit)


# ---------------------------------------------------------------------------
# sampling helpers


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


def _pool(X: SpaceHandle, rng, cap: int = DEFAULT_POOL):
    if X.n <= cap:
        return np.arange(X.n)
    return np.sort(rng.choice(X.n, size=cap, replace=False))


def sample_tuples(X: SpaceHandle, count: int, seed: int, pool_cap: int = DEFAULT_POOL):
    """Seeded 4-tuples (distinct entries, drawn order)."""
    rng = _rng(seed)
    pool = _pool(X, rng, pool_cap)
    if len(pool) < 4:
        raise ConditionError("need at least 4 points")
    out = []
    for _ in range(count):
        out.append(tuple(int(i) for i in rng.choice(pool, size=4, replace=False)))
    return out


def sample_triples(X: SpaceHandle, count: int, seed: int, pool_cap: int = DEFAULT_POOL):
    rng = _rng(seed)
    pool = _pool(X, rng, pool_cap)
    if len(pool) < 3:
        raise ConditionError("need at least 3 points")
    return [
        tuple(int(i) for i in rng.choice(pool, size=3, replace=False))
        for _ in range(count)
    ]


def sample_triangles(
    X: SpaceHandle, count: int, seed: int, triples=None, pool_cap: int = DEFAULT_POOL
):
    """Short triangles with the standard short function as slack bound."""
    base = list(triples) if triples else []
    if count > len(base):
        base += sample_triples(X, count - len(base), seed, pool_cap)
    children = np.random.SeedSequence(int(seed)).generate_state(max(1, len(base)))
    tris = []
    for (x, y, z), sub in zip(base, children):
        dxy, dxz, dyz = X.distance(x, y), X.distance(x, z), X.distance(y, z)
        h = standard_short_h(dxy, dxz, dyz)
        tris.append(build_short_triangle(X, x, y, z, h, int(sub)))
    return tris


# ---------------------------------------------------------------------------
# 4-point scans

_ORDERINGS = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3))


def four_point_scan(
    X: SpaceHandle,
    curvature: Curvature,
    orderings: str = "given",
    sampler="exhaustive",
    seed: int = 0,
    tuples=None,
    pool_cap: int = DEFAULT_POOL,
):
    """Max of rough_subembedding_C over scanned ordered 4-tuples.

    orderings "given" evaluates tuples as drawn; "all" takes the worst of
    the three inequivalent cyclic arrangements of each 4-set.
    sampler is "exhaustive" (all 4-subsets, index order) or ("seeded", count).
    Explicit ``tuples`` are scanned in addition.
    """
    if tuples is None:
        tuples = []
    tuples = [tuple(int(i) for i in t) for t in tuples]
    if sampler == "exhaustive":
        from itertools import combinations

        if math.comb(X.n, 4) > 200_000:
            raise ConditionError("exhaustive scan too large; use a seeded sampler")
        tuples += [t for t in combinations(range(X.n), 4)]
    elif isinstance(sampler, tuple) and sampler[0] == "seeded":
        tuples += sample_tuples(X, int(sampler[1]), seed, pool_cap)
    elif sampler is not None:
        raise ConditionError(f"unknown sampler {sampler!r}")
    best = 0.0
    witness = None
    X.dist_rows([i for t in tuples for i in t])
    for tup in tuples:
        orders = _ORDERINGS if orderings == "all" else (_ORDERINGS[0],)
        for perm in orders:
            ordered = tuple(tup[p] for p in perm)
            res = subembed_for_tuple(X, curvature, ordered)
            if res.minimal_C > best or witness is None:
                best = res.minimal_C
                witness = {"tuple": ordered, "C": res.minimal_C, "diagonal": res.optimal_diagonal}
    return max(0.0, best), witness


# ---------------------------------------------------------------------------
# rough CAT excess


def _model_side(tri_side: int):
    """Map a short-triangle side to (model side index, reversed flag)."""
    return ((0, False), (2, False), (1, True))[tri_side]


def comparison_for(curvature: Curvature, tri: ShortTriangle) -> ComparisonTriangle:
    dxy, dxz, dyz = tri.vertex_distances()
    return build_comparison_triangle(curvature, dxy, dxz, dyz)


def _interval_on_model(comp, tri_side, pre, suf):
    side, reverse = _model_side(tri_side)
    if reverse:
        lo, hi = comparison_point_interval(comp, side, suf, pre)
    else:
        lo, hi = comparison_point_interval(comp, side, pre, suf)
    return side, (lo, hi)


def _eucl_coords(p: ModelPoint):
    return p.data


def _seg_point_dist(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    vx, vy = bx - ax, by - ay
    vv = vx * vx + vy * vy
    if vv == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * vx + (py - ay) * vy) / vv
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_cross(a, b, c, d):
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    return (o1 * o2 < 0.0) and (o3 * o4 < 0.0)


def _min_dist_segments_euclidean(a, b, c, d):
    if _segments_cross(a, b, c, d):
        return 0.0
    return min(
        _seg_point_dist(a, c, d),
        _seg_point_dist(b, c, d),
        _seg_point_dist(c, a, b),
        _seg_point_dist(d, a, b),
    )


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a, b, tol):
    if b - a <= tol:
        x = 0.5 * (a + b)
        return f(x), x
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return f(x), x


def _tripod_pieces(p: ModelPoint, q: ModelPoint, lo: float, hi: float):
    """Linear pieces (s0, s1, ray, r0, slope) of a tripod side restricted to
    arclengths [lo, hi] from p; the radius at arclength s is r0 + slope*s."""
    ray_p, rp = p.data
    ray_q, rq = q.data
    if rp == 0.0:
        pieces = [(0.0, rq, ray_q, 0.0, 1.0)]
    elif rq == 0.0:
        pieces = [(0.0, rp, ray_p, rp, -1.0)]
    elif ray_p == ray_q:
        if rq < rp:
            pieces = [(0.0, rp - rq, ray_p, rp, -1.0)]
        else:
            pieces = [(0.0, rq - rp, ray_p, rp, 1.0)]
    else:
        pieces = [(0.0, rp, ray_p, rp, -1.0), (rp, rp + rq, ray_q, -rp, 1.0)]
    out = []
    for s0, s1, ray, r0, slope in pieces:
        a, b = max(s0, lo), min(s1, hi)
        if a <= b + 1e-15:
            out.append((a, max(a, b), ray, r0, slope))
    return out


def _min_dist_tripod(comp, side_u, iv_u, side_v, iv_v):
    pu, qu = comp.side_endpoints(side_u)
    pv, qv = comp.side_endpoints(side_v)
    pieces_u = _tripod_pieces(pu, qu, iv_u[0], iv_u[1])
    pieces_v = _tripod_pieces(pv, qv, iv_v[0], iv_v[1])
    best = math.inf
    for a0, a1, ray_u, ru0, su in pieces_u:
        for b0, b1, ray_v, rv0, sv in pieces_v:
            corners = [
                (a0, b0), (a0, b1), (a1, b0), (a1, b1),
            ]

            def radius(r0, slope, s):
                return r0 + slope * s

            if ray_u == ray_v:
                vals = [
                    radius(ru0, su, sa) - radius(rv0, sv, sb) for sa, sb in corners
                ]
                if min(vals) <= 0.0 <= max(vals):
                    best = 0.0
                else:
                    best = min(best, min(abs(v) for v in vals))
            else:
                # different rays: distance = r_u + r_v unless one radius is 0,
                # in which case it degenerates to the other radius (handled by
                # the sum as well since the origin is shared)
                best = min(
                    best,
                    min(
                        radius(ru0, su, sa) + radius(rv0, sv, sb)
                        for sa, sb in corners
                    ),
                )
            if best == 0.0:
                return 0.0
    return best


def _min_dist_hyperbolic(comp, side_u, iv_u, side_v, iv_v):
    curv = comp.curvature
    s = curv.scale
    pu, qu = comp.side_endpoints(side_u)
    pv, qv = comp.side_endpoints(side_v)

    def frame(p, q):
        total = model_distance(curv, p, q) * s
        if total == 0.0:
            return p.data, (0.0, 0.0, 0.0), 0.0
        u = tuple(
            (q.data[i] - math.cosh(total) * p.data[i]) / math.sinh(total)
            for i in range(3)
        )
        return p.data, u, total

    a0, u0, _ = frame(pu, qu)
    b0, v0, _ = frame(pv, qv)

    def lor(x, y):
        return x[0] * y[0] - x[1] * y[1] - x[2] * y[2]

    cab, cav = lor(a0, b0), lor(a0, v0)
    cub, cuv = lor(u0, b0), lor(u0, v0)

    def inner(su_, sv_):
        cu, shu = math.cosh(su_ * s), math.sinh(su_ * s)
        cv, shv = math.cosh(sv_ * s), math.sinh(sv_ * s)
        return cab * cu * cv + cav * cu * shv + cub * shu * cv + cuv * shu * shv

    tol = 1e-11 * max(1.0, iv_u[1], iv_v[1])

    def g(su_):
        val, _ = _golden_min(lambda sv_: inner(su_, sv_), iv_v[0], iv_v[1], tol)
        return val

    val, _ = _golden_min(g, iv_u[0], iv_u[1], tol)
    return math.acosh(max(1.0, val)) / s


def _min_separation(comp: ComparisonTriangle, side_u, iv_u, side_v, iv_v):
    curv = comp.curvature
    if curv.kind == "euclidean":
        pu, qu = (p.data for p in comp.side_endpoints(side_u))
        pv, qv = (p.data for p in comp.side_endpoints(side_v))

        def at(p, q, t, length):
            if length == 0.0:
                return p
            f = t / length
            return (p[0] + f * (q[0] - p[0]), p[1] + f * (q[1] - p[1]))

        lu, lv = comp.side_length(side_u), comp.side_length(side_v)
        a = at(pu, qu, iv_u[0], lu)
        b = at(pu, qu, iv_u[1], lu)
        c = at(pv, qv, iv_v[0], lv)
        d = at(pv, qv, iv_v[1], lv)
        return _min_dist_segments_euclidean(a, b, c, d)
    if curv.kind == "tripod":
        return _min_dist_tripod(comp, side_u, iv_u, side_v, iv_v)
    return _min_dist_hyperbolic(comp, side_u, iv_u, side_v, iv_v)


@dataclass
class ExcessResult:
    excess: float
    d_uv: float
    min_separation: float
    u_node: int
    v_node: int
    u_interval: tuple
    v_interval: tuple


def rcat_triangle_excess(
    X: SpaceHandle,
    tri: ShortTriangle,
    u,
    v,
    curvature: Curvature,
    comp: ComparisonTriangle | None = None,
) -> ExcessResult:
    """Excess d(u,v) - min |ubar - vbar| over admissible comparison points.

    u and v are (side index, arclength) on different sides; arclengths snap
    to path nodes whose exact subpath lengths define the comparison-point
    intervals.
    """
    (su, tu), (sv, tv) = u, v
    if su == sv:
        raise ConditionError("u and v must lie on different sides")
    if comp is None:
        comp = comparison_for(curvature, tri)
    un, upre, usuf = tri.sides[su].point_at_arclength(tu)
    vn, vpre, vsuf = tri.sides[sv].point_at_arclength(tv)
    mu, iv_u = _interval_on_model(comp, su, upre, usuf)
    mv, iv_v = _interval_on_model(comp, sv, vpre, vsuf)
    sep = _min_separation(comp, mu, iv_u, mv, iv_v)
    duv = X.distance(un, vn)
    return ExcessResult(duv - sep, duv, sep, un, vn, iv_u, iv_v)


def rcat_scan(
    X: SpaceHandle,
    curvature: Curvature,
    n_triangles: int = 100,
    n_pairs: int = 30,
    seed: int = 0,
    triples=None,
    triangles=None,
    include_vertex_pairs: bool = True,
    pool_cap: int = DEFAULT_POOL,
):
    """Sampled lower bound on the rough CAT roughness constant.

    For each short triangle (slack bound = the standard short function)
    the excess is maximized over sampled cross-side point pairs; vertex
    pairs (u, opposite vertex) are included so the weak condition's samples
    are a subset of the full scan's.
    """
    if triangles is None:
        triangles = sample_triangles(X, n_triangles, seed, triples, pool_cap)
    rng = _rng(seed ^ 0x5EED)
    best = -math.inf
    witness = None
    u_quantiles = (0.25, 0.5, 0.75)
    for tri in triangles:
        comp = comparison_for(curvature, tri)
        lengths = [s.length for s in tri.sides]
        # u positions are quantized so one distance row per u node covers
        # every paired v (v only indexes into it)
        pairs = []
        u_nodes = set(tri.vertices)
        for _ in range(n_pairs):
            a, b = rng.choice(3, size=2, replace=False)
            q = u_quantiles[int(rng.integers(0, len(u_quantiles)))]
            u = (int(a), q * lengths[a])
            pairs.append((u, (int(b), float(rng.random() * lengths[b]))))
            u_nodes.add(tri.sides[a].point_at_arclength(u[1])[0])
        if include_vertex_pairs:
            for s in range(3):
                opp = (s + 2) % 3
                for q in u_quantiles:
                    u = (s, q * lengths[s])
                    pairs.append((u, (opp, 0.0)))
                    u_nodes.add(tri.sides[s].point_at_arclength(u[1])[0])
        X.dist_rows(u_nodes)
        for u, v in pairs:
            try:
                res = rcat_triangle_excess(X, tri, u, v, curvature, comp)
            except ConditionError:
                continue
            if res.excess > best:
                best = res.excess
                witness = {
                    "triangle": tri.vertices,
                    "u": u,
                    "v": v,
                    "u_node": res.u_node,
                    "v_node": res.v_node,
                    "excess": res.excess,
                }
    return max(0.0, best), witness


# ---------------------------------------------------------------------------
# weak / very-weak variants, bolicity, CN


def _weak_required_C(dxy, dxz, dyz, dxu, pre, suf):
    """Required C at one (triangle, u) weak sample: the comparison quadratic
    is minimized over the admissible interpolation parameter (convex in t,
    so the clamped vertex is the minimum)."""
    A, B, D = dxy * dxy, dxz * dxz, dyz * dyz
    if dyz <= 0.0:
        rhs = min(A, B)
    else:
        t_lo = max(0.0, 1.0 - suf / dyz)
        t_hi = min(1.0, pre / dyz)
        if t_lo > t_hi:  # float noise only; pre + suf >= dyz by construction
            t_lo = t_hi = 0.5 * (t_lo + t_hi)
        tv = (A - B + D) / (2.0 * D)
        tv = min(t_hi, max(t_lo, tv))
        rhs = (1.0 - tv) * A + tv * B - tv * (1.0 - tv) * D
    return dxu - math.sqrt(max(0.0, rhs))


def weak_rcat_evaluations(X: SpaceHandle, triangles, u_per_side: int = 16):
    """All weak-condition samples (v = a vertex, u on the opposite side) for
    the given triangles; returns a list of dicts with the required C."""
    out = []
    for ti, tri in enumerate(triangles):
        for role in range(3):
            x = tri.vertices[role]
            side_idx = (role + 1) % 3
            side = tri.sides[side_idx]
            y, z = side.start, side.end
            dxy, dxz = X.distance(x, y), X.distance(x, z)
            dyz = side.endpoint_distance
            nodes, pres, sufs = side.node_positions()
            if len(nodes) > u_per_side:
                keep = np.unique(
                    np.round(np.linspace(0, len(nodes) - 1, u_per_side)).astype(int)
                )
            else:
                keep = np.arange(len(nodes))
            for k in keep:
                u = nodes[k]
                c = _weak_required_C(
                    dxy, dxz, dyz, X.distance(x, u), float(pres[k]), float(sufs[k])
                )
                out.append(
                    {
                        "triangle_index": ti,
                        "triangle": tri.vertices,
                        "x": x,
                        "u": u,
                        "side": side_idx,
                        "required_C": c,
                        "tuple": (y, u, z, x),
                    }
                )
    return out


def weak_rcat_min_C(
    X: SpaceHandle,
    samples: int = 100,
    seed: int = 0,
    triples=None,
    triangles=None,
    u_per_side: int = 16,
    pool_cap: int = DEFAULT_POOL,
):
    """Sampled lower bound on the weak rough CAT(0) constant."""
    if triangles is None:
        triangles = sample_triangles(X, samples, seed, triples, pool_cap)
    evals = weak_rcat_evaluations(X, triangles, u_per_side)
    if not evals:
        return 0.0, None
    best = max(evals, key=lambda e: e["required_C"])
    return max(0.0, best["required_C"]), best


def midpoint_samples(
    X: SpaceHandle,
    triples,
    seed: int = 0,
    widen: float = None,
    side_kind: str = "standard",
    derive: bool = False,
):
    """Shared sampling records for bolicity / very-weak scans.

    For each triple (x, y, z) one side [y,z] is sampled (an h-short detour
    with the standard short function, or the geodesic when side_kind is
    "geodesic") and its admissible h-midpoint nodes are collected: nodes
    whose subpath lengths are at least d(y,z)/2 - widen on both sides (widen
    defaults to the space's snap budget).  Each record carries the canonical
    midpoint map value: the admissible node balancing the two subpath
    lengths (x-independent).  With derive=True, every original record also
    spawns records (m, y, z) for each admissible midpoint m, sharing the
    side; these feed the bolicity/very-weak conversion chain.
    """
    if widen is None:
        widen = X.snap_budget
    children = np.random.SeedSequence(int(seed)).generate_state(max(1, len(triples)))
    records = []

    def make_record(x, y, z, side, nodes, pres, sufs, derived):
        dxy, dxz = X.distance(x, y), X.distance(x, z)
        dyz = side.endpoint_distance
        half = dyz / 2.0
        ok = (pres >= half - widen) & (sufs >= half - widen)
        idx = np.flatnonzero(ok)
        mids = [nodes[k] for k in idx]
        map_index = None
        if len(idx):
            balance = np.abs(pres[idx] - sufs[idx])
            map_index = int(np.argmin(balance))
        rad = math.sqrt(max(0.0, 2.0 * dxy * dxy + 2.0 * dxz * dxz - dyz * dyz))
        return {
            "x": x,
            "y": y,
            "z": z,
            "h": side.h,
            "side": side,
            "midpoints": mids,
            "map_index": map_index,
            "radicand_root": rad,
            "d_x_mid": [X.distance(x, m) for m in mids],
            "derived": derived,
        }

    for (x, y, z), sub in zip(triples, children):
        dxy, dxz = X.distance(x, y), X.distance(x, z)
        dyz = X.distance(y, z)
        h = standard_short_h(dxy, dxz, dyz)
        if y == z or side_kind == "geodesic":
            side = geodesic(X, y, z, h)
        else:
            side = sample_short_segment(X, y, z, h, int(sub))
        nodes, pres, sufs = side.node_positions()
        rec = make_record(x, y, z, side, nodes, pres, sufs, derived=False)
        records.append(rec)
        if derive:
            for m in rec["midpoints"]:
                records.append(make_record(m, y, z, side, nodes, pres, sufs, derived=True))
    return records


def bolicity_min_delta(
    X: SpaceHandle,
    policy: str = "best",
    samples: int = 200,
    seed: int = 0,
    triples=None,
    records=None,
    side_kind: str = "standard",
    pool_cap: int = DEFAULT_POOL,
):
    """Sampled lower bound on the bolicity constant.

    policy "best" takes the midpoint minimizing the left side (the existence
    form); "map" evaluates the canonical x-independent midpoint map (what the
    conversion chain needs); "all" takes the worst admissible h-midpoint (the
    very-weak comparison reading).  Triples without any admissible midpoint
    are excluded and counted.
    """
    if records is None:
        if triples is None:
            triples = sample_triples(X, samples, seed, pool_cap=pool_cap)
        records = midpoint_samples(X, triples, seed, side_kind=side_kind)
    best = 0.0
    witness = None
    excluded = 0
    for rec in records:
        if not rec["midpoints"]:
            excluded += 1
            continue
        dxm = rec["d_x_mid"]
        if policy == "best":
            k = int(np.argmin(dxm))
        elif policy == "map":
            k = rec["map_index"]
        else:
            k = int(np.argmax(dxm))
        delta = (2.0 * dxm[k] - rec["radicand_root"]) / 4.0
        if delta > best or witness is None:
            best = max(best, delta)
            witness = {
                "triple": (rec["x"], rec["y"], rec["z"]),
                "midpoint": rec["midpoints"][k],
                "delta": delta,
            }
    return max(0.0, best), witness, excluded


def very_weak_min_C(X: SpaceHandle, records):
    """Very-weak constant from shared midpoint records: worst required C with
    the comparison point pinned at the Euclidean midpoint."""
    best = 0.0
    witness = None
    for rec in records:
        half_root = rec["radicand_root"] / 2.0
        for m, dxm in zip(rec["midpoints"], rec["d_x_mid"]):
            c = dxm - half_root
            if c > best or witness is None:
                best = max(best, c)
                witness = {"triple": (rec["x"], rec["y"], rec["z"]), "midpoint": m, "C": c}
    return max(0.0, best), witness


def cn_min_deficit(X: SpaceHandle, samples: int = 200, seed: int = 0, triples=None,
                   widen: float = None, pool_cap: int = DEFAULT_POOL):
    """Minimal additive slack for the CN midpoint inequality over sampled
    triples with exact graph midpoints (within ``widen``, defaulting to the
    space's snap budget)."""
    if triples is None:
        triples = sample_triples(X, samples, seed, pool_cap=pool_cap)
    snap = X.snap_budget if widen is None else widen
    best = -math.inf
    witness = None
    evaluated = 0
    for x, y, z in triples:
        dyz = X.distance(y, z)
        ry, rz = X.dist_row(y), X.dist_row(z)
        ok = (np.abs(ry - dyz / 2.0) <= snap + GEOM_TOL) & (
            np.abs(rz - dyz / 2.0) <= snap + GEOM_TOL
        )
        mids = np.flatnonzero(ok)
        if mids.size == 0:
            continue
        evaluated += 1
        rx = X.dist_row(x)
        dxy, dxz = rx[y], rx[z]
        deficit = 2.0 * rx[mids] ** 2 + 0.5 * dyz * dyz - dxy * dxy - dxz * dxz
        k = int(np.argmax(deficit))
        if deficit[k] > best:
            best = float(deficit[k])
            witness = {"triple": (x, y, z), "midpoint": int(mids[k]), "deficit": best}
    if evaluated == 0:
        return math.inf, None, 0
    return max(0.0, best), witness, evaluated


# ---------------------------------------------------------------------------
# coupled consistency suite (used by the conversion-chain acceptance)


def consistency_suite(
    X: SpaceHandle,
    seed: int = 0,
    n_tuples: int = 120,
    n_triangles: int = 40,
    n_pairs: int = 12,
    n_triples: int = 120,
    derive_cap: int = 240,
    u_per_side: int = 16,
    pool_cap: int = DEFAULT_POOL,
):
    """Measure all constants with coupled samples.

    The couplings make the one-sided conversion chains checkable: the weak
    scan covers triangles derived from every scanned 4-tuple (sharing the
    diagonal side), tuples derived from the strongest weak samples feed the
    4-point scan, the full scan includes every weak sample as a vertex pair,
    and bolicity / very-weak read the same midpoint records.
    """
    tuples0 = sample_tuples(X, n_tuples, seed, pool_cap)
    tris_rand = sample_triangles(X, n_triangles, seed + 1, pool_cap=pool_cap)

    derived_tris = []
    children = np.random.SeedSequence(int(seed) + 2).generate_state(max(1, len(tuples0)))
    for (p, q, r, s), sub in zip(tuples0, children):
        dd = X.distance
        h = min(
            standard_short_h(dd(p, r), dd(p, q), dd(r, q)),
            standard_short_h(dd(p, r), dd(p, s), dd(r, s)),
        )
        rng_pair = np.random.SeedSequence(int(sub)).generate_state(3)
        if p == r:
            shared = geodesic(X, p, r, h)
        else:
            shared = sample_short_segment(X, p, r, h, int(rng_pair[0]))
        for other, child in ((q, rng_pair[1]), (s, rng_pair[2])):
            if other in (p, r):
                continue
            side_rq = (
                sample_short_segment(X, r, other, h, int(child))
                if r != other
                else geodesic(X, r, other, h)
            )
            side_qp = (
                sample_short_segment(X, other, p, h, int(child) ^ 0xA5)
                if other != p
                else geodesic(X, other, p, h)
            )
            derived_tris.append(triangle_from_sides(shared, side_rq, side_qp, h))

    all_tris = tris_rand + derived_tris
    weak_evals = weak_rcat_evaluations(X, all_tris, u_per_side)
    c_weak = max((e["required_C"] for e in weak_evals), default=0.0)
    c_weak = max(0.0, c_weak)

    c_full, full_wit = rcat_scan(
        X, Curvature.euclidean(), seed=seed + 3, triangles=all_tris, n_pairs=n_pairs
    )
    c_full = max(c_full, c_weak)  # vertex pairs are full-condition samples

    ranked = sorted(weak_evals, key=lambda e: -e["required_C"])
    derived_tuples = [e["tuple"] for e in ranked[:derive_cap]]
    c4, c4_wit = four_point_scan(
        X,
        Curvature.euclidean(),
        orderings="given",
        sampler=None,
        tuples=tuples0 + derived_tuples,
    )

    triples = sample_triples(X, n_triples, seed + 4, pool_cap)
    records = midpoint_samples(X, triples, seed + 5, derive=True)
    d_bolic, bolic_wit, excluded = bolicity_min_delta(X, "map", records=records)
    c_vw, vw_wit = very_weak_min_C(X, records)
    h_max = max((rec["h"] for rec in records), default=1.0)

    snap = X.snap_budget
    e_budget = 0.0
    for rec in records:
        dyz = rec["side"].endpoint_distance
        e = rec["h"] + snap
        e_budget = max(e_budget, math.sqrt(max(0.0, dyz * e + e * e)))
    return {
        "c_full": c_full,
        "c_weak": c_weak,
        "c_four_point": c4,
        "c_very_weak": c_vw,
        "delta_bolic": d_bolic,
        "witnesses": {
            "full": full_wit,
            "four_point": c4_wit,
            "bolic": bolic_wit,
            "very_weak": vw_wit,
        },
        "midpoint_excluded": excluded,
        "snap_budget": snap,
        "h_max": h_max,
        "vw_budget": max(0.0, e_budget - math.sqrt(2.0)),
        "samples": {
            "tuples": len(tuples0) + len(derived_tuples),
            "triangles": len(all_tris),
            "weak_evaluations": len(weak_evals),
            "triples": len(triples),
        },
    }


# ---------------------------------------------------------------------------
# reporting


@dataclass
class ConditionEstimate:
    condition: str
    kappa: float
    constant: float
    samples: int
    witness: dict | None
    budget: float
    extra: dict = field(default_factory=dict)

    def to_json(self, space_provenance):
        kappa = "-inf" if self.kappa == -math.inf else self.kappa
        return {
            "space": {k: v for k, v in space_provenance.items() if k != "node_of"},
            "condition": self.condition,
            "kappa": kappa,
            "constant": self.constant,
            "witness": self.witness,
            "samples": self.samples,
            "budget": self.budget,
            **({"extra": self.extra} if self.extra else {}),
        }


@dataclass
class CurvatureReport:
    space_provenance: dict
    entries: list

    def to_json(self):
        return [e.to_json(self.space_provenance) for e in self.entries]
