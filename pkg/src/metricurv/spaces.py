"""Finite metric spaces and weighted-graph length spaces.

A ``SpaceHandle`` wraps either a validated distance matrix or a connected
weighted graph whose shortest-path metric stands in for a length space.
Constructors cover the example spaces used throughout: grids (taxicab and
near-Euclidean), trees, circles, hyperbolic disc samples, l2-products,
two-space gluings, and the warped ladder.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from metricurv.model_plane import Curvature, ModelPoint, model_distance

METRIC_TOL = 1e-9
MATERIALIZE_CAP = 4000
PRODUCT_CAP = 6000
GRID_CAP = 250_000


class SpaceError(ValueError):
    """Invalid space construction or query."""


class MetricError(SpaceError):
    """A matrix failed metric validation; carries the worst offender."""

    def __init__(self, reason, witness=None, violation=None):
        self.reason = reason
        self.witness = witness
        self.violation = violation
        msg = reason
        if witness is not None:
            msg += f" at {witness}"
        if violation is not None:
            msg += f" (violation {violation:.3g})"
        super().__init__(msg)


@dataclass
class FiniteMetric:
    """Validated n x n distance matrix."""

    d: np.ndarray
    labels: list | None = None

    @property
    def n(self) -> int:
        return self.d.shape[0]


def validate_metric(matrix, tol: float = METRIC_TOL, labels=None) -> FiniteMetric:
    """Check symmetry, zero diagonal, non-negativity and all triangle
    inequalities; reports the worst triangle violation with its triple."""
    d = np.asarray(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise MetricError("matrix is not square")
    n = d.shape[0]
    if n == 0:
        raise MetricError("empty matrix")
    asym = np.abs(d - d.T)
    ij = np.unravel_index(np.argmax(asym), asym.shape)
    if asym[ij] > tol:
        raise MetricError("asymmetry", witness=tuple(int(k) for k in ij), violation=float(asym[ij]))
    diag = np.abs(np.diag(d))
    k = int(np.argmax(diag))
    if diag[k] > tol:
        raise MetricError("nonzero diagonal", witness=(k,), violation=float(diag[k]))
    neg = np.min(d)
    if neg < -tol:
        ij = np.unravel_index(np.argmin(d), d.shape)
        raise MetricError("negative entry", witness=tuple(int(x) for x in ij), violation=float(-neg))
    worst = 0.0
    worst_triple = None
    for k in range(n):
        viol = d - (d[:, k][:, None] + d[k, :][None, :])
        ij = np.unravel_index(np.argmax(viol), viol.shape)
        v = float(viol[ij])
        if v > worst:
            worst = v
            worst_triple = (int(ij[0]), k, int(ij[1]))
    if worst > tol:
        raise MetricError("triangle inequality", witness=worst_triple, violation=worst)
    return FiniteMetric(d, list(labels) if labels is not None else None)


@dataclass
class GraphSpace:
    """Connected undirected weighted graph; the shortest-path metric is the
    space's metric."""

    n: int
    edges: np.ndarray  # (m, 2) int endpoints
    weights: np.ndarray  # (m,) positive lengths
    coords: np.ndarray | None = None  # optional (n, k) node coordinates
    _csr: csr_matrix = field(default=None, repr=False)

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if len(self.weights) != len(self.edges):
            raise SpaceError("edge/weight length mismatch")
        if len(self.weights) and np.min(self.weights) <= 0.0:
            raise SpaceError("edge weights must be positive")
        if self._csr is None:
            i, j = self.edges[:, 0], self.edges[:, 1]
            m = csr_matrix(
                (np.concatenate([self.weights, self.weights]),
                 (np.concatenate([i, j]), np.concatenate([j, i]))),
                shape=(self.n, self.n),
            )
            self._csr = m
        ncomp, _ = connected_components(self._csr, directed=False)
        if ncomp != 1:
            raise SpaceError(f"graph is disconnected ({ncomp} components)")

    @property
    def csr(self) -> csr_matrix:
        return self._csr

    @property
    def max_weight(self) -> float:
        return float(np.max(self.weights)) if len(self.weights) else 0.0


class SpaceHandle:
    """Uniform distance/path oracle over a FiniteMetric or GraphSpace.

    Distance rows (and, for graphs, shortest-path predecessor trees) are
    cached per queried source, so repeated scans from a sampling pool stay
    cheap.  All queries are read-only after construction.
    """

    def __init__(self, underlying, provenance=None, labels=None):
        if not isinstance(underlying, (FiniteMetric, GraphSpace)):
            raise SpaceError("underlying must be FiniteMetric or GraphSpace")
        self.underlying = underlying
        self.provenance = dict(provenance or {})
        self._labels = labels
        self._rows: dict = {}
        self._preds: dict = {}
        self._matrix: np.ndarray | None = (
            underlying.d if isinstance(underlying, FiniteMetric) else None
        )

    # -- basic facts ------------------------------------------------------
    @property
    def is_graph(self) -> bool:
        return isinstance(self.underlying, GraphSpace)

    @property
    def n(self) -> int:
        return self.underlying.n

    @property
    def coords(self):
        return self.underlying.coords if self.is_graph else None

    @property
    def labels(self):
        if self._labels is not None:
            return self._labels
        if isinstance(self.underlying, FiniteMetric):
            return self.underlying.labels
        return None

    @property
    def snap_budget(self) -> float:
        """Node-snapping resolution: max edge weight for graphs, the largest
        nearest-neighbour gap for finite metrics."""
        if self.is_graph:
            return self.underlying.max_weight
        d = self.underlying.d.copy()
        np.fill_diagonal(d, np.inf)
        return float(np.max(np.min(d, axis=1))) if self.n > 1 else 0.0

    # -- distances --------------------------------------------------------
    def dist_row(self, i: int) -> np.ndarray:
        i = int(i)
        row = self._rows.get(i)
        if row is None:
            if self.is_graph:
                dist, pred = dijkstra(
                    self.underlying.csr, indices=i, return_predecessors=True
                )
                self._preds[i] = pred
                row = dist
            else:
                row = self.underlying.d[i]
            self._rows[i] = row
        return row

    def dist_rows(self, nodes) -> None:
        """Prefetch several source rows in one batched shortest-path call."""
        missing = [int(i) for i in dict.fromkeys(int(i) for i in nodes) if int(i) not in self._rows]
        if not missing:
            return
        if not self.is_graph:
            for i in missing:
                self._rows[i] = self.underlying.d[i]
            return
        dist, pred = dijkstra(
            self.underlying.csr, indices=missing, return_predecessors=True
        )
        if len(missing) == 1:
            dist = dist.reshape(1, -1)
            pred = pred.reshape(1, -1)
        for k, i in enumerate(missing):
            self._rows[i] = dist[k]
            self._preds[i] = pred[k]

    def distance(self, i: int, j: int) -> float:
        row = self._rows.get(int(i))
        if row is not None:
            return float(row[int(j)])
        row = self._rows.get(int(j))
        if row is not None:
            return float(row[int(i)])
        return float(self.dist_row(i)[j])

    def dist_matrix(self, cap: int = MATERIALIZE_CAP) -> np.ndarray:
        """All-pairs distances (materialized; exactly symmetric)."""
        if self._matrix is None:
            if self.n > cap:
                raise SpaceError(
                    f"all-pairs materialization of {self.n} nodes exceeds cap {cap}"
                )
            d = dijkstra(self.underlying.csr, directed=False)
            self._matrix = np.minimum(d, d.T)
        return self._matrix

    def as_finite(self, cap: int = MATERIALIZE_CAP) -> FiniteMetric:
        if isinstance(self.underlying, FiniteMetric):
            return self.underlying
        return FiniteMetric(self.dist_matrix(cap), self.labels)

    # -- paths -------------------------------------------------------------
    def _tree_path(self, source: int, target: int) -> list:
        """Node path source -> target along the cached shortest-path tree."""
        if not self.is_graph:
            return [source] if source == target else [source, target]
        self.dist_row(source)
        pred = self._preds[source]
        path = [int(target)]
        while path[-1] != source:
            p = int(pred[path[-1]])
            if p < 0:
                raise SpaceError(f"no path from {source} to {target}")
            path.append(p)
        path.reverse()
        return path

    def geodesic_nodes(self, x: int, y: int) -> list:
        """Shortest node path from x to y, centered at a midmost node.

        Among nodes on shortest paths the one balancing the two leg lengths
        is picked first (ties: nearest to the coordinate midpoint when
        coordinates exist, then lowest index), and the two halves follow the
        predecessor trees of x and y.  Deterministic.
        """
        x, y = int(x), int(y)
        if x == y:
            return [x]
        if not self.is_graph:
            return [x, y]
        dx = self.dist_row(x)
        dy = self.dist_row(y)
        d = dx[y]
        tol = 1e-9 * max(1.0, d)
        on_path = (dx + dy <= d + tol) & (dx > tol) & (dy > tol)
        idx = np.flatnonzero(on_path)
        if idx.size == 0:
            return [x, y]
        imbalance = np.abs(dx[idx] - dy[idx])
        best = imbalance <= np.min(imbalance) + tol
        cand = idx[best]
        if self.coords is not None and len(cand) > 1:
            mid = 0.5 * (self.coords[x] + self.coords[y])
            off = np.linalg.norm(self.coords[cand] - mid[None, :], axis=1)
            cand = cand[off <= np.min(off) + 1e-12]
        m = int(cand.min())
        first = self._tree_path(x, m)
        second = self._tree_path(y, m)[::-1]
        return first + second[1:]

    def path_hops(self, nodes) -> np.ndarray:
        """Hop lengths along a node path (graph hops must be edges or
        shortest-path steps; finite-metric hops are direct distances)."""
        if len(nodes) < 2:
            return np.zeros(0)
        hops = np.empty(len(nodes) - 1)
        for k in range(len(nodes) - 1):
            hops[k] = self.distance(nodes[k], nodes[k + 1])
        return hops


# --------------------------------------------------------------------------
# constructors


def from_matrix(matrix, labels=None, provenance=None) -> SpaceHandle:
    fm = validate_metric(matrix, labels=labels)
    return SpaceHandle(fm, provenance or {"constructor": "matrix"})


def from_graph(n, edges, weights, coords=None, provenance=None) -> SpaceHandle:
    g = GraphSpace(n, edges, weights, coords)
    return SpaceHandle(g, provenance or {"constructor": "graph"})


def l2_product(x1: SpaceHandle, x2: SpaceHandle, cap: int = PRODUCT_CAP) -> SpaceHandle:
    """l2-product: d((a1,a2),(b1,b2)) = sqrt(d1(a1,b1)^2 + d2(a2,b2)^2).

    Materialized as a finite metric on index pairs (i1*n2 + i2): the graph
    product's path metric would not reproduce the formula on edges.
    """
    n1, n2 = x1.n, x2.n
    if n1 * n2 > cap:
        raise SpaceError(f"product size {n1 * n2} exceeds cap {cap}")
    d1 = x1.dist_matrix()
    d2 = x2.dist_matrix()
    sq = d1[:, None, :, None] ** 2 + d2[None, :, None, :] ** 2
    d = np.sqrt(sq).reshape(n1 * n2, n1 * n2)
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return SpaceHandle(
        FiniteMetric(d),
        {
            "constructor": "l2_product",
            "factors": [x1.provenance, x2.provenance],
            "shape": [n1, n2],
        },
    )


def glue(
    x1: SpaceHandle,
    s1,
    x2: SpaceHandle,
    s2,
    tol: float = METRIC_TOL,
) -> SpaceHandle:
    """Glue two spaces along the isometric index sets s1 <-> s2 (paired by
    position).  Cross distances take the minimum two-leg sum over the gluing
    set; identified points are merged (kept at their x1 indices)."""
    s1 = [int(i) for i in s1]
    s2 = [int(i) for i in s2]
    if len(s1) != len(s2) or len(s1) == 0:
        raise SpaceError("gluing sets must be nonempty and equal-sized")
    if len(set(s1)) != len(s1) or len(set(s2)) != len(s2):
        raise SpaceError("gluing sets must not repeat points")
    d1 = x1.dist_matrix()
    d2 = x2.dist_matrix()
    a = d1[np.ix_(s1, s1)]
    b = d2[np.ix_(s2, s2)]
    gap = float(np.max(np.abs(a - b))) if len(s1) else 0.0
    if gap > tol:
        ij = np.unravel_index(np.argmax(np.abs(a - b)), a.shape)
        raise SpaceError(
            f"pairing is not an isometry: |d1 - d2| = {gap:.3g} at pair "
            f"({s1[ij[0]]},{s1[ij[1]]}) vs ({s2[ij[0]]},{s2[ij[1]]})"
        )
    n1, n2 = x1.n, x2.n
    keep2 = [j for j in range(n2) if j not in set(s2)]
    new_index2 = {}
    for k, j in enumerate(s2):
        new_index2[j] = s1[k]
    for k, j in enumerate(keep2):
        new_index2[j] = n1 + k
    n = n1 + len(keep2)
    d = np.zeros((n, n))
    d[:n1, :n1] = d1
    d22 = d2[np.ix_(keep2, keep2)]
    d[n1:, n1:] = d22
    # cross block: min over gluing points of the two-leg sum
    legs1 = d1[:, s1]  # (n1, m)
    legs2 = d2[np.ix_(s2, keep2)]  # (m, k)
    cross = np.min(legs1[:, :, None] + legs2[None, :, :], axis=1)
    d[:n1, n1:] = cross
    d[n1:, :n1] = cross.T
    # within-x1 rows for merged points already carry d1; overwrite x2 rows of
    # glued points with the min of the two sides' values
    for k, j in enumerate(s2):
        tgt = s1[k]
        row2 = d2[j, keep2]
        d[tgt, n1:] = np.minimum(d[tgt, n1:], row2)
        d[n1:, tgt] = d[tgt, n1:]
    return SpaceHandle(
        FiniteMetric(d),
        {
            "constructor": "glue",
            "pieces": [x1.provenance, x2.provenance],
            "gluing_size": len(s1),
        },
    )


_MOVE_SETS = {
    "axis": ((1, 0),),
    "knight": ((1, 0), (1, 1), (2, 1)),
    "wide": ((1, 0), (1, 1), (2, 1), (3, 1), (3, 2), (4, 1), (5, 1)),
}


def _closure(moves):
    out = set()
    for p, q in moves:
        for a, b in ((p, q), (q, p)):
            for sa in (a, -a):
                for sb in (b, -b):
                    out.add((sa, sb))
    # keep one representative per undirected direction
    return sorted(v for v in out if v > (0, 0) or (v[0] == 0 and v[1] > 0))


def make_grid_plane(
    halfwidth: float,
    step: float,
    norm: str = "l2",
    moves: str = "wide",
    cap: int = GRID_CAP,
) -> SpaceHandle:
    """Square grid on [-halfwidth, halfwidth]^2 with spacing ``step``.

    norm "l1" uses axis edges only (taxicab path metric).  norm "l2" adds
    longer straight moves (preset "wide": diagonals, knight and further
    (3,1),(3,2),(4,1),(5,1) steps) so the path metric tracks Euclidean
    distance to about half a percent; the residual distortion is measured by
    tests, never assumed.
    """
    if step <= 0 or halfwidth < step:
        raise SpaceError("need step > 0 and halfwidth >= step")
    m = int(round(halfwidth / step))
    side = 2 * m + 1
    if side * side > cap:
        raise SpaceError(f"grid of {side * side} nodes exceeds cap {cap}")
    xs = np.arange(-m, m + 1)
    ii, jj = np.meshgrid(xs, xs, indexing="ij")
    coords = np.stack([ii.ravel() * step, jj.ravel() * step], axis=1)
    move_set = _MOVE_SETS["axis"] if norm == "l1" else _MOVE_SETS[moves]
    edges = []
    weights = []
    for p, q in _closure(move_set):
        w = step * math.hypot(p, q)
        i0 = max(0, -p)
        i1 = side - max(0, p)
        j0 = max(0, -q)
        j1 = side - max(0, q)
        if i0 >= i1 or j0 >= j1:
            continue
        bi, bj = np.meshgrid(np.arange(i0, i1), np.arange(j0, j1), indexing="ij")
        src = (bi * side + bj).ravel()
        dst = ((bi + p) * side + (bj + q)).ravel()
        edges.append(np.stack([src, dst], axis=1))
        weights.append(np.full(len(src), w))
    g = GraphSpace(side * side, np.concatenate(edges), np.concatenate(weights), coords)
    return SpaceHandle(
        g,
        {
            "constructor": "grid",
            "norm": norm,
            "halfwidth": halfwidth,
            "step": step,
            "moves": "axis" if norm == "l1" else moves,
        },
    )


def grid_node(handle: SpaceHandle, x: float, y: float) -> int:
    """Index of the grid node nearest to coordinates (x, y)."""
    prov = handle.provenance
    if prov.get("constructor") != "grid":
        raise SpaceError("grid_node needs a grid-constructed space")
    step = prov["step"]
    m = int(round(prov["halfwidth"] / step))
    side = 2 * m + 1
    i = min(max(int(round(x / step)) + m, 0), side - 1)
    j = min(max(int(round(y / step)) + m, 0), side - 1)
    return i * side + j


def make_tree(shape: str = "random", **params) -> SpaceHandle:
    """Tree spaces: "random" (uniform attachment, integer weights from
    ``weight_choices``), "star" (leaves at distance ``leg``), or "path"."""
    if shape == "random":
        n = int(params.get("n", 30))
        seed = int(params.get("seed", 0))
        choices = params.get("weight_choices", (1.0, 2.0, 3.0, 4.0))
        rng = np.random.Generator(np.random.PCG64(seed))
        parents = [int(rng.integers(0, k)) for k in range(1, n)]
        ws = [float(choices[int(rng.integers(0, len(choices)))]) for _ in range(n - 1)]
        edges = [(parents[k], k + 1) for k in range(n - 1)]
        prov = {"constructor": "tree", "shape": "random", "n": n, "seed": seed}
    elif shape == "star":
        leaves = int(params.get("leaves", 4))
        leg = float(params.get("leg", 1.0))
        edges = [(0, k + 1) for k in range(leaves)]
        ws = [leg] * leaves
        prov = {"constructor": "tree", "shape": "star", "leaves": leaves, "leg": leg}
    elif shape == "path":
        n = int(params.get("n", 10))
        w = float(params.get("weight", 1.0))
        edges = [(k, k + 1) for k in range(n - 1)]
        ws = [w] * (n - 1)
        prov = {"constructor": "tree", "shape": "path", "n": n}
    else:
        raise SpaceError(f"unknown tree shape {shape!r}")
    nn = max(max(e) for e in edges) + 1
    return SpaceHandle(GraphSpace(nn, np.array(edges), np.array(ws)), prov)


def make_circle(n: int, circumference: float) -> SpaceHandle:
    if n < 3 or circumference <= 0:
        raise SpaceError("circle needs n >= 3 and positive circumference")
    w = circumference / n
    edges = [(k, (k + 1) % n) for k in range(n)]
    theta = 2.0 * math.pi * np.arange(n) / n
    r = circumference / (2.0 * math.pi)
    coords = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)
    return SpaceHandle(
        GraphSpace(n, np.array(edges), np.full(n, w), coords),
        {"constructor": "circle", "n": n, "circumference": circumference},
    )


def make_hyperbolic_sample(
    kappa: float, radius: float, count: int, seed: int = 0
) -> SpaceHandle:
    """Finite metric of model distances on points sampled uniformly (w.r.t.
    hyperbolic area) in a disc of the given radius around the base point."""
    curv = Curvature.from_kappa(kappa)
    if curv.kind != "hyperbolic":
        raise SpaceError("hyperbolic sampler needs finite kappa < 0")
    s = curv.scale
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    u = rng.random(count)
    phi = rng.random(count) * 2.0 * math.pi
    r = np.arccosh(1.0 + u * (math.cosh(radius * s) - 1.0)) / s
    x0 = np.cosh(r * s)
    x1 = np.sinh(r * s) * np.cos(phi)
    x2 = np.sinh(r * s) * np.sin(phi)
    inner = np.outer(x0, x0) - np.outer(x1, x1) - np.outer(x2, x2)
    np.clip(inner, 1.0, None, out=inner)
    d = np.arccosh(inner) / s
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return SpaceHandle(
        FiniteMetric(d),
        {
            "constructor": "hyperbolic_sample",
            "kappa": kappa,
            "radius": radius,
            "count": count,
            "seed": int(seed),
        },
    )


def hyperbolic_sample_points(handle: SpaceHandle):
    """Rebuild the sampled ModelPoints of a hyperbolic sample (for oracles)."""
    prov = handle.provenance
    if prov.get("constructor") != "hyperbolic_sample":
        raise SpaceError("not a hyperbolic sample")
    curv = Curvature.from_kappa(prov["kappa"])
    s = curv.scale
    rng = np.random.Generator(np.random.PCG64(prov["seed"]))
    u = rng.random(prov["count"])
    phi = rng.random(prov["count"]) * 2.0 * math.pi
    r = np.arccosh(1.0 + u * (math.cosh(prov["radius"] * s) - 1.0)) / s
    pts = [
        ModelPoint(
            "hyperbolic",
            (
                float(np.cosh(ri * s)),
                float(np.sinh(ri * s) * np.cos(pi_)),
                float(np.sinh(ri * s) * np.sin(pi_)),
            ),
        )
        for ri, pi_ in zip(r, phi)
    ]
    return curv, pts


def make_warped_ladder(n_max: int, depth: float, step: float = 0.25) -> SpaceHandle:
    """Two Euclidean half-planes joined by exponentially-shrinking rungs.

    Each half-plane is realized exactly: its materialized nodes (boundary
    stations and spine points up to ``depth``) are joined by direct edges of
    Euclidean length, which a convex region admits, so within-piece distances
    carry no discretization error.  Rungs of length exp(-|n|) at the integer
    stations are subdivided into at least two edges so rung midpoints exist
    as nodes.  ``step`` controls boundary-station spacing and rung
    subdivision.
    """
    if n_max < 1 or depth <= 0 or step <= 0:
        raise SpaceError("need n_max >= 1, depth > 0, step > 0")
    m = int(round(n_max / step))
    xs = [k * step for k in range(-m, m + 1)]
    ys = []
    y = step
    while y < min(depth, 4.0 * n_max):
        ys.append(y)
        y += step
    while y < depth:
        ys.append(y)
        y *= 1.5
    ys.append(float(depth))

    coords = []
    node_of = {}

    def add(side, x, yv):
        key = (side, round(x, 9), round(yv, 9))
        if key not in node_of:
            node_of[key] = len(coords)
            coords.append((x, yv))
        return node_of[key]

    per_side = [[], []]
    for side in (0, 1):
        for x in xs:
            per_side[side].append(add(side, x, 0.0))
        for yv in ys:
            per_side[side].append(add(side, 0.0, yv))
    edges = []
    weights = []
    for side in (0, 1):
        ids = per_side[side]
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                pa, pb = coords[ids[a]], coords[ids[b]]
                w = math.hypot(pa[0] - pb[0], pa[1] - pb[1])
                if w > 0.0:
                    edges.append((ids[a], ids[b]))
                    weights.append(w)
    stations = list(range(-n_max, n_max + 1))
    for nsta in stations:
        length = math.exp(-abs(nsta))
        pieces = max(2, int(math.ceil(length / step)))
        prev = node_of[(0, float(nsta), 0.0)]
        for k in range(1, pieces):
            mid = len(coords)
            coords.append((float(nsta), 0.0))
            edges.append((prev, mid))
            weights.append(length / pieces)
            prev = mid
        edges.append((prev, node_of[(1, float(nsta), 0.0)]))
        weights.append(length / pieces)
    g = GraphSpace(len(coords), np.array(edges), np.array(weights), np.array(coords))
    handle = SpaceHandle(
        g,
        {
            "constructor": "warped_ladder",
            "n_max": n_max,
            "depth": depth,
            "step": step,
        },
    )
    handle.provenance["node_of"] = {f"{k[0]}:{k[1]}:{k[2]}": v for k, v in node_of.items()}
    return handle


def ladder_node(handle: SpaceHandle, side: int, x: float, y: float) -> int:
    key = f"{side}:{round(x, 9)}:{round(y, 9)}"
    table = handle.provenance.get("node_of")
    if table is None or key not in table:
        raise SpaceError(f"no ladder node at side {side}, ({x}, {y})")
    return table[key]


def ladder_threshold_height(n: int) -> float:
    """Smallest spine height making the rung-n crossing beat every rung of
    smaller station index: 2*(sqrt(y^2+n^2) - y) < e^{-(n-1)} - e^{-n}."""
    gap = math.exp(-(n - 1)) - math.exp(-n)
    # solve 2*(sqrt(y^2+n^2)-y) = gap for y and round up a little
    y = (n * n - (gap / 2.0) ** 2) / gap
    return float(math.ceil(y + 1.0))


# --------------------------------------------------------------------------
# serialization


def space_to_json(handle: SpaceHandle) -> dict:
    if handle.is_graph:
        g = handle.underlying
        nodes = []
        for i in range(g.n):
            entry = {"id": i}
            if g.coords is not None:
                entry["coords"] = [float(c) for c in g.coords[i]]
            nodes.append(entry)
        return {
            "kind": "graph",
            "nodes": nodes,
            "edges": [
                [int(i), int(j), float(w)]
                for (i, j), w in zip(g.edges, g.weights)
            ],
        }
    fm = handle.underlying
    out = {"kind": "finite", "matrix": [[float(v) for v in row] for row in fm.d]}
    if handle.labels:
        out["labels"] = list(handle.labels)
    return out


def space_from_json(payload: dict, provenance=None) -> SpaceHandle:
    kind = payload.get("kind")
    if kind == "finite":
        return from_matrix(
            payload["matrix"], labels=payload.get("labels"), provenance=provenance
        )
    if kind == "graph":
        nodes = payload["nodes"]
        n = len(nodes)
        coords = None
        if nodes and "coords" in nodes[0]:
            coords = np.array([node["coords"] for node in nodes], dtype=np.float64)
        edges = [(e[0], e[1]) for e in payload["edges"]]
        weights = [e[2] for e in payload["edges"]]
        return from_graph(n, edges, weights, coords, provenance=provenance)
    raise SpaceError(f"unknown space kind {kind!r}")


def load_space(path: str) -> SpaceHandle:
    if path.endswith(".csv"):
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
        return from_matrix(rows, provenance={"source": path})
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return space_from_json(payload, provenance={"source": path})


def save_space(handle: SpaceHandle, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(space_to_json(handle), fh)
        fh.write("\n")
