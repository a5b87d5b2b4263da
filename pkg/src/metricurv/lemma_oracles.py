"""Closed-form evaluators and brute-force verifiers for the explicit planar
bounds, perturbation/zipper inequalities, the tripod gap, rough convexity,
and the constant-conversion table.

Each check returns BoundCheck records: computed left side, bound, and slack
(bound minus left side); a record passes when its slack clears -tolerance.
Counterexample certificates go the other way and are asserted to grow
across scales by the callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from metricurv.model_plane import Curvature, alexandrov_check, euclidean_point
from metricurv.shortseg import geodesic, sample_short_segment, standard_short_h
from metricurv.spaces import SpaceHandle

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


@dataclass
class BoundCheck:
    statement: str
    inputs: dict
    lhs: float
    rhs: float
    tolerance: float = 1e-9

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.slack >= -self.tolerance

    def to_json(self):
        return {
            "statement": self.statement,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "pass": self.passed,
        }


def _rng(seed):
    return np.random.Generator(np.random.PCG64(int(seed)))


# ---------------------------------------------------------------------------
# planar interpolation bound


def plane_interp_bound(dxy: float, dxz: float, dyz: float, t: float) -> float:
    """Right side of the planar comparison bound for a point at parameter t
    along [y, z]: (1-t) dxy^2 + t dxz^2 - t (1-t) dyz^2."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if max(dxy - dxz - dyz, dxz - dxy - dyz, dyz - dxy - dxz) > 1e-9:
        raise ValueError("invalid triangle distances")
    return (1.0 - t) * dxy * dxy + t * dxz * dxz - t * (1.0 - t) * dyz * dyz


# ---------------------------------------------------------------------------
# ellipse bound for h-short segments vs the straight segment


def ellipse_bound(l: float, h: float, grid: int = 100_000):
    """Closed form M = sqrt(2 l h + h^2) / 2 plus a brute-force maximum of the
    distance from the detour ellipse (foci at the endpoints, string length
    l + h) to the segment, over a dense parameter grid."""
    if l <= 0 or h < 0:
        raise ValueError("need l > 0 and h >= 0")
    m_closed = 0.5 * math.sqrt(2.0 * l * h + h * h)
    if h == 0.0:
        return m_closed, 0.0
    a = (l + h) / 2.0
    b = m_closed  # semi-minor axis equals the bound
    theta = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    px = l / 2.0 + a * np.cos(theta)
    py = b * np.sin(theta)
    # distance to the segment [(0,0), (l,0)]
    cx = np.clip(px, 0.0, l)
    brute = float(np.max(np.hypot(px - cx, py)))
    return m_closed, brute


# ---------------------------------------------------------------------------
# zipper hyperbola formula


def zipper_r(a: float, e: float, theta: float, branch: str = "near") -> float:
    """Focal radius of the zipped-triangle hyperbola: r = a(e^2-1)/(1 + e cos
    theta) on the branch near the focus, r = a(e^2-1)/(-1 + e cos theta) on
    the far branch."""
    if e <= 1.0:
        raise ValueError("eccentricity must exceed 1")
    denom = (1.0 if branch == "near" else -1.0) + e * math.cos(theta)
    if denom <= 0.0:
        raise ValueError(f"denominator {denom} not positive for branch {branch!r}")
    return a * (e * e - 1.0) / denom


def zipper_r_oracle(a: float, e: float, w1: float, sign: float = 1.0):
    """Geometric (r, theta) for the hyperbola point with abscissa w1 on either
    branch: coordinates straight from the conic, angle at the focus (ae, 0)
    measured against the other focus."""
    b = a * math.sqrt(e * e - 1.0)
    w2 = sign * b * math.sqrt(max(0.0, (w1 / a) ** 2 - 1.0))
    fx, fy = a * e, 0.0
    r = math.hypot(w1 - fx, w2 - fy)
    # angle between the rays focus->(-ae,0) and focus->point
    ux, uy = -a * e - fx, 0.0
    vx, vy = w1 - fx, w2 - fy
    cosang = (ux * vx + uy * vy) / (math.hypot(ux, uy) * r)
    return r, math.acos(min(1.0, max(-1.0, cosang)))


# ---------------------------------------------------------------------------
# zipper and perturbation sweeps (coordinate brute force)


def _random_triangle(rng, scale=10.0, min_side=0.2):
    while True:
        pts = rng.random((3, 2)) * scale
        x, y, z = pts
        a = np.linalg.norm(x - z)
        b = np.linalg.norm(y - z)
        c = np.linalg.norm(x - y)
        if min(a, b, c) > min_side:
            return x, y, z, float(a), float(b), float(c)


def _place_triangle(a, b, c):
    """x at origin, y on the axis; returns coordinates (x, y, z)."""
    x = np.array([0.0, 0.0])
    y = np.array([c, 0.0])
    cosx = (c * c + a * a - b * b) / (2.0 * c * a) if c > 0 and a > 0 else 1.0
    cosx = min(1.0, max(-1.0, cosx))
    sinx = math.sqrt(max(0.0, 1.0 - cosx * cosx))
    z = np.array([a * cosx, a * sinx])
    return x, y, z


def perturbation_check(rng) -> BoundCheck:
    """One perturbed-triangle configuration: two side lengths preserved, the
    third moved by at most h = 1/(1 + max side^2); comparison points at equal
    arclengths from x move by at most 2."""
    x, y, z, a, b, c = _random_triangle(rng)
    h = 1.0 / (1.0 + max(a, b, c) ** 2)
    # perturb |y-z| keeping |x-z| and |x-y| (triangle stays valid: b grows
    # toward a + c or shrinks toward |a - c|)
    room_up = (a + c) - b
    room_dn = b - abs(a - c)
    db = rng.uniform(-min(h, 0.9 * room_dn), min(h, 0.9 * room_up))
    b2 = b + db
    x1, y1, z1 = _place_triangle(a, b, c)
    x2, y2, z2 = _place_triangle(a, b2, c)
    l = rng.uniform(0.0, a)
    s = rng.uniform(0.0, 1.0)
    u1 = x1 + (z1 - x1) * (l / a)
    u2 = x2 + (z2 - x2) * (l / a)
    v1 = x1 + (y1 - x1) * s
    v2 = x2 + (y2 - x2) * s
    e1 = float(np.linalg.norm(u1 - v1))
    e2 = float(np.linalg.norm(u2 - v2))
    return BoundCheck(
        "perturbation: |u'-v'| <= |u-v| + 2",
        {"sides": (a, b, c), "db": db, "l": l, "s": s},
        e2,
        e1 + 2.0,
    )


def zipper_a_check(rng, perturbed: bool = False) -> BoundCheck:
    """Zipper case (a): z' moved toward y (so |dx| <= dy holds by the
    triangle inequality); optionally jittered within the allowed h."""
    x, y, z, a, b, c = _random_triangle(rng)
    t = rng.uniform(0.0, b)
    zp = z + (y - z) * (t / b)
    h = 1.0 / (1.0 + max(a, b, c) ** 2)
    bound = 0.0
    if perturbed:
        ang = rng.uniform(0.0, 2.0 * math.pi)
        zp = zp + (h / 2.0) * np.array([math.cos(ang), math.sin(ang)])
        bound = 2.0
    ap = float(np.linalg.norm(x - zp))
    lu = rng.uniform(0.0, min(a, ap))
    u = x + (z - x) * (lu / a)
    up = x + (zp - x) * (lu / ap)
    v = x + (y - x) * rng.uniform(0.0, 1.0)
    lhs = float(np.linalg.norm(up - v))
    rhs = float(np.linalg.norm(u - v)) + bound
    name = "zipper (a)" + (" perturbed: |u'-v| <= |u-v| + 2" if perturbed else ": |u'-v| <= |u-v|")
    return BoundCheck(name, {"sides": (a, b, c), "t": t}, lhs, rhs)


def zipper_b_check(rng, perturbed: bool = False) -> BoundCheck:
    """Zipper case (b): both focal radii shortened by the same t >= 0 (z' on
    the circle intersection on z's side); optionally jittered."""
    while True:
        x, y, z, a, b, c = _random_triangle(rng)
        tmax = 0.45 * (a + b - c)
        if tmax > 1e-3:
            break
    t = rng.uniform(0.0, tmax)
    ap, bp = a - t, b - t
    # z' with |x-z'| = ap, |y-z'| = bp, same side as z
    cosx = (c * c + ap * ap - bp * bp) / (2.0 * c * ap)
    cosx = min(1.0, max(-1.0, cosx))
    sinx = math.sqrt(max(0.0, 1.0 - cosx * cosx))
    ex = (y - x) / c
    ey = np.array([-ex[1], ex[0]])
    if np.dot(z - x, ey) < 0:
        ey = -ey
    zp = x + ex * (ap * cosx) + ey * (ap * sinx)
    h = 1.0 / (1.0 + max(a, b, c) ** 2)
    bound = 0.0
    if perturbed:
        ang = rng.uniform(0.0, 2.0 * math.pi)
        zp = zp + (h / 3.0) * np.array([math.cos(ang), math.sin(ang)])
        bound = 4.0
    ap = float(np.linalg.norm(x - zp))
    bp = float(np.linalg.norm(y - zp))
    lu = rng.uniform(0.0, min(a, ap))
    lv = rng.uniform(0.0, min(b, bp))
    u = x + (z - x) * (lu / a)
    up = x + (zp - x) * (lu / ap)
    v = y + (z - y) * (lv / b)
    vp = y + (zp - y) * (lv / bp)
    lhs = float(np.linalg.norm(up - vp))
    rhs = float(np.linalg.norm(u - v)) + bound
    name = "zipper (b)" + (" perturbed: |u'-v'| <= |u-v| + 4" if perturbed else ": |u'-v'| <= |u-v|")
    return BoundCheck(name, {"sides": (a, b, c), "t": t}, lhs, rhs)


def zipper_pert_checks(samples: int, seed: int = 0):
    """Slack sweep across the four planar lemma families."""
    rng = _rng(seed)
    out = []
    for _ in range(samples):
        out.append(perturbation_check(rng))
        out.append(zipper_a_check(rng))
        out.append(zipper_a_check(rng, perturbed=True))
        out.append(zipper_b_check(rng))
        out.append(zipper_b_check(rng, perturbed=True))
    return out


def alexandrov_sweep(curvature: Curvature, samples: int, seed: int = 0):
    """Random opposite-side configurations; returns (checked reports,
    hypothesis-not-met count)."""
    rng = _rng(seed)
    reports = []
    skipped = 0
    while len(reports) + skipped < samples:
        if curvature.kind == "euclidean":
            pts = rng.random((4, 2)) * 6.0 - 3.0
            A = euclidean_point(*pts[0])
            C = euclidean_point(*pts[1])
            B = euclidean_point(*pts[2])
            Bp = euclidean_point(*pts[3])
        else:
            from metricurv.model_plane import hyperboloid_point

            raw = rng.random((4, 2)) * 4.0 - 2.0
            A, C, B, Bp = (hyperboloid_point(*p) for p in raw)
        try:
            rep = alexandrov_check(curvature, A, B, Bp, C)
        except Exception:
            skipped += 1
            continue
        if rep.hypothesis_met:
            reports.append(rep)
        else:
            skipped += 1
    return reports, skipped


# ---------------------------------------------------------------------------
# space-level checks


def short_vs_geodesic_gap(
    X: SpaceHandle,
    x: int,
    y: int,
    h1: float,
    h2: float,
    c_hat: float,
    samples: int = 20,
    seed: int = 0,
) -> BoundCheck:
    """Max arclength-aligned gap between an h1-short and an h2-short segment
    from x to y, against the rough-uniqueness bound instantiated with the
    space's measured constant."""
    if h1 > h2:
        h1, h2 = h2, h1
    L = X.distance(x, y)
    g1 = geodesic(X, x, y, h1) if h1 <= 0 else sample_short_segment(X, x, y, h1, seed)
    g2 = sample_short_segment(X, x, y, h2, seed + 1)
    worst = 0.0
    snap = X.snap_budget
    for t in np.linspace(0.0, min(g1.length, g2.length), samples):
        n1, _, _ = g1.point_at_arclength(t)
        n2, _, _ = g2.point_at_arclength(t)
        worst = max(worst, X.distance(n1, n2))
    bound = (
        2.0 * c_hat
        + h2
        + 0.5 * math.sqrt(2.0 * L * h1 + h1 * h1)
        + 0.5 * math.sqrt(2.0 * L * h2 + h2 * h2)
        + 2.0 * snap
    )
    return BoundCheck(
        "rough uniqueness: gap <= 2C + h2 + M(h1) + M(h2)",
        {"x": x, "y": y, "L": L, "h1": h1, "h2": h2, "c_hat": c_hat, "snap": snap},
        worst,
        bound,
    )


def tripod_gap_check(
    X: SpaceHandle, delta_hat: float, samples: int = 50, seed: int = 0, h: float = 1.0
):
    """Sampled tripod-lemma gaps: points at equal arclength along two h-short
    paths from a common origin stay within 4 delta + 2h (+ snap)."""
    rng = _rng(seed)
    out = []
    snap = X.snap_budget
    for k in range(samples):
        o, x1, x2 = (int(v) for v in rng.choice(X.n, size=3, replace=False))
        g1 = sample_short_segment(X, o, x1, h, int(rng.integers(0, 2**31)))
        g2 = sample_short_segment(X, o, x2, h, int(rng.integers(0, 2**31)))
        ip = 0.5 * (X.distance(o, x1) + X.distance(o, x2) - X.distance(x1, x2))
        t = rng.uniform(0.0, min(g1.length, g2.length))
        n1, pre1, _ = g1.point_at_arclength(min(t, g1.length))
        if X.distance(o, n1) > ip:
            continue
        n2, _, _ = g2.point_at_arclength(min(pre1, g2.length))
        out.append(
            BoundCheck(
                "tripod lemma: d(y1,y2) <= 4 delta + 2h",
                {"o": o, "x1": x1, "x2": x2, "t": pre1},
                X.distance(n1, n2),
                4.0 * delta_hat + 2.0 * h + 2.0 * snap,
                tolerance=1e-9,
            )
        )
    return out


def rough_convexity_check(
    X: SpaceHandle, c_hat: float, samples: int = 30, seed: int = 0, t_steps: int = 9
):
    """Sampled rough-convexity slacks: constant-speed h-short paths satisfy
    d(g1(t), g2(t)) <= (1-t) d(a1,a2) + t d(b1,b2) + 2C (C when the starts
    coincide)."""
    rng = _rng(seed)
    out = []
    snap = X.snap_budget
    for k in range(samples):
        a1, b1, a2, b2 = (int(v) for v in rng.choice(X.n, size=4, replace=False))
        if k % 3 == 0:
            a2 = a1  # exercise the common-endpoint subcase
        h1 = 1.0 / max(1.0, X.distance(a1, b1))
        h2 = 1.0 / max(1.0, X.distance(a2, b2))
        g1 = sample_short_segment(X, a1, b1, h1, int(rng.integers(0, 2**31)))
        g2 = sample_short_segment(X, a2, b2, h2, int(rng.integers(0, 2**31)))
        daa = X.distance(a1, a2)
        dbb = X.distance(b1, b2)
        cc = c_hat if a1 == a2 else 2.0 * c_hat
        for t in np.linspace(0.0, 1.0, t_steps):
            n1, _, _ = g1.point_at_arclength(t * g1.length)
            n2, _, _ = g2.point_at_arclength(t * g2.length)
            out.append(
                BoundCheck(
                    "rough convexity: d(g1(t),g2(t)) <= (1-t)d(a1,a2)+t d(b1,b2)+2C",
                    {"pairs": (a1, b1, a2, b2), "t": float(t)},
                    X.distance(n1, n2),
                    (1.0 - t) * daa + t * dbb + cc + 2.0 * snap,
                )
            )
    return out


# ---------------------------------------------------------------------------
# constant conversions

_LOG3 = math.log(3.0)


def constant_conversions(name: str, value: float = 0.0, kappa: float = None) -> dict:
    """Implied-constant table for a named input constant.

    Names: cat0, hrcat0 (C), weak_hrcat0 (C), rcat0 (C), weak_rcat (C),
    four_point (C'), bolic (delta), very_weak (C), delta_hyperbolic (delta).
    Pure arithmetic; kappa (< 0) feeds the conversions that depend on it.
    """
    if value < 0:
        raise ValueError("constants are non-negative")
    c = float(value)
    table = {}
    if name == "cat0":
        table["rcat0"] = 2.0 + SQRT3
    elif name == "hrcat0":
        table["rcat0"] = 3.0 * c + 2.0 + SQRT3
        table["weak_rcat0_from_weak_hrcat0"] = 2.0 * c + 1.0 + SQRT3 / 2.0
        table["l2_product_hrcat0"] = SQRT2 * c
    elif name == "weak_hrcat0":
        table["weak_rcat0"] = 2.0 * c + 1.0 + SQRT3 / 2.0
        table["four_point"] = 2.0 * c
    elif name == "rcat0":
        table["weak_rcat0"] = c
        table["four_point"] = 2.0 * c
    elif name == "weak_rcat":
        table["four_point"] = 2.0 * c
    elif name == "four_point":
        table["weak_rcat0"] = c + 1.0 + SQRT3 / 2.0
        if kappa is not None and kappa < 0 and math.isfinite(kappa):
            table["rcat_kappa"] = 4.0 * c + 2.0 + 4.0 * _LOG3 / math.sqrt(-kappa)
            table["delta_hyperbolic"] = _LOG3 / math.sqrt(-kappa) + c
        if kappa == -math.inf:
            table["rcat_minus_inf"] = 4.0 * c + 2.0
            table["delta_hyperbolic"] = c
    elif name == "bolic":
        table["very_weak_rcat0"] = 4.0 * c + SQRT2
    elif name == "very_weak":
        table["bolic"] = c / 2.0
    elif name == "delta_hyperbolic":
        table["rcat_minus_inf"] = 4.0 * c + 2.0
    else:
        raise ValueError(f"unknown constant name {name!r}")
    return table
