"""Exact geometry of the comparison planes: Euclidean, rescaled hyperbolic
(hyperboloid model), and the four-ray tripod used as the kappa = -infinity
comparison space.

All lengths are plain floats; geometry tolerance is GEOM_TOL = 1e-9
throughout.  Inputs violating the triangle inequality by more than the
tolerance are rejected, never repaired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

GEOM_TOL = 1e-9

#: Ordered vertex pairs addressed by the ``side`` index of triangle
#: operations: side 0 joins v0->v1, side 1 joins v0->v2, side 2 joins v1->v2.
SIDE_PAIRS = ((0, 1), (0, 2), (1, 2))


class GeometryError(ValueError):
    """Invalid input to an exact-geometry operation."""


@dataclass(frozen=True)
class Curvature:
    """Comparison-space selector: euclidean (0), hyperbolic (kappa < 0) or
    tripod (kappa = -inf).  The diameter is infinite for every admitted kappa."""

    kind: str
    kappa: float = 0.0

    def __post_init__(self):
        if self.kind == "euclidean":
            if self.kappa != 0.0:
                raise GeometryError("euclidean curvature has kappa = 0")
        elif self.kind == "hyperbolic":
            if not (self.kappa < 0.0 and math.isfinite(self.kappa)):
                raise GeometryError("hyperbolic curvature needs finite kappa < 0")
        elif self.kind == "tripod":
            if self.kappa != -math.inf:
                raise GeometryError("tripod curvature has kappa = -inf")
        else:
            raise GeometryError(f"unknown curvature kind {self.kind!r}")

    @property
    def diameter(self) -> float:
        return math.inf

    @property
    def scale(self) -> float:
        """sqrt(-kappa) for hyperbolic, else 0 (unused)."""
        return math.sqrt(-self.kappa) if self.kind == "hyperbolic" else 0.0

    @staticmethod
    def euclidean() -> "Curvature":
        return Curvature("euclidean", 0.0)

    @staticmethod
    def hyperbolic(kappa: float) -> "Curvature":
        return Curvature("hyperbolic", float(kappa))

    @staticmethod
    def tripod() -> "Curvature":
        return Curvature("tripod", -math.inf)

    @staticmethod
    def from_kappa(kappa) -> "Curvature":
        """Parse 0 / negative float / -inf (also accepts the strings
        "0", "-1.5", "-inf")."""
        if isinstance(kappa, str):
            text = kappa.strip().lower()
            kappa = -math.inf if text in ("-inf", "-infinity") else float(text)
        kappa = float(kappa)
        if kappa == 0.0:
            return Curvature.euclidean()
        if kappa == -math.inf:
            return Curvature.tripod()
        if kappa < 0.0:
            return Curvature.hyperbolic(kappa)
        raise GeometryError("kappa must lie in [-inf, 0]")


@dataclass(frozen=True)
class ModelPoint:
    """A point of one comparison space.

    data is (x, y) for euclidean, a hyperboloid triple (x0, x1, x2) with
    x0^2 - x1^2 - x2^2 = 1 for hyperbolic, and (ray, radius) with
    ray in 0..3, radius >= 0 for tripod.
    """

    kind: str
    data: tuple

    def __post_init__(self):
        if self.kind == "hyperbolic":
            x0, x1, x2 = self.data
            if x0 <= 0.0 or abs(x0 * x0 - x1 * x1 - x2 * x2 - 1.0) > 1e-6:
                raise GeometryError("point is not on the unit hyperboloid")
        elif self.kind == "tripod":
            ray, r = self.data
            if r < 0.0 or int(ray) not in (0, 1, 2, 3):
                raise GeometryError("tripod point needs ray in 0..3, radius >= 0")


def euclidean_point(x: float, y: float) -> ModelPoint:
    return ModelPoint("euclidean", (float(x), float(y)))


def tripod_point(ray: int, radius: float) -> ModelPoint:
    if radius == 0.0:
        ray = 0  # the origin is ray-independent; normalize for determinism
    return ModelPoint("tripod", (int(ray), float(radius)))


def hyperboloid_point(x1: float, x2: float) -> ModelPoint:
    """Hyperboloid point above the chart coordinates (x1, x2)."""
    x0 = math.sqrt(1.0 + x1 * x1 + x2 * x2)
    return ModelPoint("hyperbolic", (x0, float(x1), float(x2)))


def _lorentz(p: tuple, q: tuple) -> float:
    return p[0] * q[0] - p[1] * q[1] - p[2] * q[2]


def model_distance(curvature: Curvature, p: ModelPoint, q: ModelPoint) -> float:
    """Distance in the comparison space (hyperbolic distances carry the
    1/sqrt(-kappa) rescaling)."""
    if p.kind != curvature.kind or q.kind != curvature.kind:
        raise GeometryError(
            f"point kinds ({p.kind}, {q.kind}) do not match curvature {curvature.kind}"
        )
    if curvature.kind == "euclidean":
        return math.hypot(p.data[0] - q.data[0], p.data[1] - q.data[1])
    if curvature.kind == "tripod":
        return _tripod_dist(p.data[0], p.data[1], q.data[0], q.data[1])
    inner = _lorentz(p.data, q.data)
    if inner < 1.0:
        inner = 1.0
    return math.acosh(inner) / curvature.scale


def _tripod_dist(ray_p, rp, ray_q, rq):
    if ray_p == ray_q or rp == 0.0 or rq == 0.0:
        return abs(rp - rq)
    return rp + rq


def geodesic_point(curvature: Curvature, p: ModelPoint, q: ModelPoint, s: float) -> ModelPoint:
    """Point at arclength s from p along the geodesic [p, q]."""
    total = model_distance(curvature, p, q)
    if s < -GEOM_TOL or s > total + GEOM_TOL:
        raise GeometryError(f"arclength {s} outside [0, {total}]")
    s = min(max(s, 0.0), total)
    if total == 0.0 or s == 0.0:
        return p
    if s == total:
        return q
    if curvature.kind == "euclidean":
        f = s / total
        return euclidean_point(
            p.data[0] + f * (q.data[0] - p.data[0]),
            p.data[1] + f * (q.data[1] - p.data[1]),
        )
    if curvature.kind == "tripod":
        ray_p, rp = p.data
        ray_q, rq = q.data
        if rp == 0.0:
            return tripod_point(ray_q, s)
        if rq == 0.0 or (ray_p == ray_q and rq < rp):
            return tripod_point(ray_p, rp - s)
        if ray_p == ray_q:
            return tripod_point(ray_p, rp + s)
        if s <= rp:
            return tripod_point(ray_p, rp - s)
        return tripod_point(ray_q, s - rp)
    sc = curvature.scale
    rho = total * sc
    u = tuple(
        (q.data[i] - math.cosh(rho) * p.data[i]) / math.sinh(rho) for i in range(3)
    )
    r = s * sc
    pt = tuple(math.cosh(r) * p.data[i] + math.sinh(r) * u[i] for i in range(3))
    x0 = math.sqrt(1.0 + pt[1] * pt[1] + pt[2] * pt[2])  # re-project: kills drift
    return ModelPoint("hyperbolic", (x0, pt[1], pt[2]))


def angle_from_sides(curvature: Curvature, adj1: float, adj2: float, opp: float) -> float:
    """Vertex angle from the two adjacent side lengths and the opposite one."""
    if adj1 <= 0.0 or adj2 <= 0.0:
        raise GeometryError("vertex angle needs positive adjacent sides")
    if curvature.kind == "euclidean":
        c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2)
    elif curvature.kind == "hyperbolic":
        sc = curvature.scale
        c = (math.cosh(adj1 * sc) * math.cosh(adj2 * sc) - math.cosh(opp * sc)) / (
            math.sinh(adj1 * sc) * math.sinh(adj2 * sc)
        )
    else:
        raise GeometryError("vertex angles are undefined in the tripod space")
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True)
class ComparisonTriangle:
    """SSS triangle in a comparison space, canonically placed.

    requested sides (a, b, c) are the vertex distances
    (d(v0,v1), d(v0,v2), d(v1,v2)).  Euclidean/hyperbolic placement puts v0
    at the base point, v1 on the reference geodesic, v2 in the upper half;
    tripod vertices sit on rays 0, 1, 2 at the Gromov-product leg radii.
    """

    curvature: Curvature
    vertices: tuple
    requested_sides: tuple
    realized_sides: tuple = field(default=None)

    def side_length(self, side: int) -> float:
        return self.realized_sides[side]

    def side_endpoints(self, side: int) -> tuple:
        i, j = SIDE_PAIRS[side]
        return self.vertices[i], self.vertices[j]

    def point_on_side(self, side: int, s: float) -> ModelPoint:
        return point_on_side(self, side, s)

    @property
    def legs(self) -> tuple:
        """Gromov-product leg lengths (meaningful for any curvature)."""
        a, b, c = self.requested_sides
        return ((a + b - c) / 2.0, (a + c - b) / 2.0, (b + c - a) / 2.0)


def build_comparison_triangle(
    curvature: Curvature, a: float, b: float, c: float
) -> ComparisonTriangle:
    """Construct the canonical triangle with vertex distances (a, b, c) =
    (d(v0,v1), d(v0,v2), d(v1,v2)).  Degenerate (collinear) inputs are
    allowed; violations of the triangle inequality beyond 1e-9 are not."""
    sides = (float(a), float(b), float(c))
    if min(sides) < -GEOM_TOL:
        raise GeometryError("negative side length")
    lo = max(0.0, a - b - c, b - a - c, c - a - b)
    if lo > GEOM_TOL:
        raise GeometryError(
            f"triangle inequality violated by {lo:.3g} for sides {sides}"
        )
    if curvature.kind == "tripod":
        l0 = max(0.0, (a + b - c) / 2.0)
        l1 = max(0.0, (a + c - b) / 2.0)
        l2 = max(0.0, (b + c - a) / 2.0)
        verts = (tripod_point(0, l0), tripod_point(1, l1), tripod_point(2, l2))
    elif curvature.kind == "euclidean":
        v0 = euclidean_point(0.0, 0.0)
        v1 = euclidean_point(a, 0.0)
        if a <= 0.0 or b <= 0.0:
            v2 = euclidean_point(b, 0.0)
        else:
            gamma = angle_from_sides(curvature, a, b, c)
            v2 = euclidean_point(b * math.cos(gamma), b * math.sin(gamma))
        verts = (v0, v1, v2)
    else:
        sc = curvature.scale
        v0 = ModelPoint("hyperbolic", (1.0, 0.0, 0.0))
        v1 = ModelPoint("hyperbolic", (math.cosh(a * sc), math.sinh(a * sc), 0.0))
        if a <= 0.0 or b <= 0.0:
            v2 = ModelPoint("hyperbolic", (math.cosh(b * sc), math.sinh(b * sc), 0.0))
        else:
            gamma = angle_from_sides(curvature, a, b, c)
            v2 = ModelPoint(
                "hyperbolic",
                (
                    math.cosh(b * sc),
                    math.sinh(b * sc) * math.cos(gamma),
                    math.sinh(b * sc) * math.sin(gamma),
                ),
            )
        verts = (v0, v1, v2)
    realized = tuple(
        model_distance(curvature, verts[i], verts[j]) for i, j in SIDE_PAIRS
    )
    for want, got in zip(sides, realized):
        if abs(want - got) > max(GEOM_TOL, 1e-12 * max(1.0, want)) * 8:
            raise GeometryError(
                f"realized side {got} deviates from requested {want}"
            )
    return ComparisonTriangle(curvature, verts, sides, realized)


def point_on_side(tri: ComparisonTriangle, side: int, s: float) -> ModelPoint:
    """Point at arclength s from the side's first endpoint."""
    p, q = tri.side_endpoints(side)
    return geodesic_point(tri.curvature, p, q, s)


def comparison_point_interval(
    tri: ComparisonTriangle, side: int, len_prefix: float, len_suffix: float
) -> tuple:
    """Admissible comparison-point arclengths on a side.

    A point with recorded subpath lengths (len_prefix, len_suffix) admits the
    comparison points at arclength sigma from the side's first endpoint with
    sigma <= len_prefix and L - sigma <= len_suffix.
    """
    length = tri.side_length(side)
    lo = max(0.0, length - len_suffix)
    hi = min(length, len_prefix)
    if lo > hi + GEOM_TOL:
        raise GeometryError(
            f"empty comparison interval: prefix {len_prefix} + suffix "
            f"{len_suffix} < side length {length}"
        )
    return (min(lo, hi), hi)


@dataclass
class AlexandrovReport:
    """Numeric check of Alexandrov's lemma on one configuration."""

    hypothesis_met: bool
    opposite_sides: bool
    gamma_sum: float
    perimeter_slack: float = math.nan
    angle_slack_a: float = math.nan
    angle_slack_b: float = math.nan
    angle_slack_b_prime: float = math.nan
    distance_slack: float = math.nan

    @property
    def slacks(self) -> tuple:
        return (
            self.perimeter_slack,
            self.angle_slack_a,
            self.angle_slack_b,
            self.angle_slack_b_prime,
            self.distance_slack,
        )

    @property
    def passed(self) -> bool:
        if not self.hypothesis_met:
            return True  # nothing asserted
        return all(s >= -GEOM_TOL for s in self.slacks)


def _side_sign(curvature: Curvature, a: ModelPoint, c: ModelPoint, p: ModelPoint) -> float:
    if curvature.kind == "euclidean":
        ax, ay = a.data
        cx, cy = c.data
        px, py = p.data
        return (cx - ax) * (py - ay) - (cy - ay) * (px - ax)
    # hyperboloid: the geodesic through a, c spans a plane through the origin
    m = (a.data, c.data, p.data)
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def alexandrov_check(
    curvature: Curvature,
    a: ModelPoint,
    b: ModelPoint,
    b_prime: ModelPoint,
    c: ModelPoint,
) -> AlexandrovReport:
    """Verify Alexandrov's lemma numerically for the two triangles T(A,B,C)
    and T(A,B',C).

    When B, B' lie on opposite sides of the line AC and the angles at C sum
    to at least pi, the report carries the slack of each conclusion
    (conclusion value minus its bound; all must be >= -1e-9).
    """
    if curvature.kind == "tripod":
        raise GeometryError("Alexandrov check applies to euclidean/hyperbolic only")
    dist = lambda p, q: model_distance(curvature, p, q)
    d_ab, d_abp, d_ac = dist(a, b), dist(a, b_prime), dist(a, c)
    d_bc, d_bpc = dist(b, c), dist(b_prime, c)
    if min(d_ab, d_abp, d_ac, d_bc, d_bpc, dist(b, b_prime)) <= GEOM_TOL:
        raise GeometryError("Alexandrov check needs pairwise distinct points")
    s1 = _side_sign(curvature, a, c, b)
    s2 = _side_sign(curvature, a, c, b_prime)
    opposite = s1 * s2 < 0.0
    gamma = angle_from_sides(curvature, d_ac, d_bc, d_ab)
    gamma_p = angle_from_sides(curvature, d_ac, d_bpc, d_abp)
    gsum = gamma + gamma_p
    if not opposite or gsum < math.pi - GEOM_TOL:
        return AlexandrovReport(False, opposite, gsum)

    alpha = angle_from_sides(curvature, d_ab, d_ac, d_bc)
    alpha_p = angle_from_sides(curvature, d_abp, d_ac, d_bpc)
    beta = angle_from_sides(curvature, d_ab, d_bc, d_ac)
    beta_p = angle_from_sides(curvature, d_abp, d_bpc, d_ac)

    base = d_bc + d_bpc
    perimeter_slack = (d_ab + d_abp) - base
    if perimeter_slack < -GEOM_TOL:
        # conclusion 1 already fails; report it without the comparison part
        return AlexandrovReport(True, True, gsum, perimeter_slack)
    # comparison triangle (A, B, B') with |B - B'| spread to d_bc + d_bpc
    comp = build_comparison_triangle(
        curvature, d_ab, d_abp, min(base, d_ab + d_abp)
    )
    alpha_bar = angle_from_sides(curvature, d_ab, d_abp, base)
    beta_bar = angle_from_sides(curvature, d_ab, base, d_abp)
    beta_bar_p = angle_from_sides(curvature, d_abp, base, d_ab)
    c_bar = comp.point_on_side(2, d_bc)
    d_ac_bar = model_distance(curvature, comp.vertices[0], c_bar)
    return AlexandrovReport(
        True,
        True,
        gsum,
        perimeter_slack,
        alpha_bar - (alpha + alpha_p),
        beta_bar - beta,
        beta_bar_p - beta_p,
        d_ac_bar - d_ac,
    )
