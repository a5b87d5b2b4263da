import math

import numpy as np
import pytest

from metricurv import _kernels as K
from metricurv._kernels import _pykernels as P

try:
    from metricurv._kernels import _ckernels as C
except ImportError:
    C = None

needs_compiled = pytest.mark.skipif(C is None, reason="compiled extension not built")


def test_backend_identifies_itself():
    assert K.BACKEND in ("compiled", "python")


def _random_metric(n, seed):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 3)) * 4
    return np.ascontiguousarray(np.linalg.norm(pts[:, None] - pts[None, :], axis=2))


@needs_compiled
def test_delta_backends_agree():
    for seed in range(4):
        d = _random_metric(25, seed)
        dc, wc = C.delta_hyp(d)
        dp, wp = P.delta_hyp(d)
        assert dc == pytest.approx(dp, abs=1e-12)


def test_delta_small_cases():
    d = np.zeros((3, 3))
    assert P.delta_hyp(d)[0] == 0.0
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
    d = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
    val, wit = K.delta_hyp(np.ascontiguousarray(d))
    assert val == pytest.approx(math.sqrt(2) - 1, abs=1e-12)


@needs_compiled
def test_sep_scan_backends_agree():
    rng = np.random.default_rng(1)
    count = 0
    while count < 150:
        d12, d23, d34, d41 = rng.random(4) * 8
        d13 = abs(d12 - d23) + rng.random() * (d12 + d23 - abs(d12 - d23))
        tlo = max(d13, abs(d12 - d23), abs(d34 - d41))
        thi = min(d12 + d23, d34 + d41)
        if thi <= tlo:
            continue
        for kind, s in ((0, 0.0), (1, 1.0), (1, 0.3)):
            vc, tc = C.sep_scan(kind, s, d12, d23, d34, d41, tlo, thi)
            vp, tp = P.sep_scan(kind, s, d12, d23, d34, d41, tlo, thi)
            assert vc == pytest.approx(vp, abs=1e-9)
        count += 1


def test_separation_symmetry_and_degenerate():
    # separation at t=0 degenerates to the sum of the hanging sides
    assert P.separation(0, 0.0, 0.0, 2.0, 2.0, 3.0, 3.0) == 5.0
    # euclidean separation is maximal when both triangles are flat outward
    v = P.separation(0, 0.0, 2.0, 1.0, 1.0, 1.0, 1.0)
    assert v == pytest.approx(0.0, abs=1e-12)  # degenerate collapse


def test_sep_scan_finds_flat_optimum():
    # unit euclidean square: separation at t = sqrt(2) equals sqrt(2)
    tlo = thi = math.sqrt(2.0)
    v, t = K.sep_scan(0, 0.0, 1, 1, 1, 1, tlo, thi)
    assert v == pytest.approx(math.sqrt(2.0), abs=1e-9)
