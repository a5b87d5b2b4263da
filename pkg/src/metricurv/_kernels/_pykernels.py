"""Pure-Python (numpy) implementations of the hot scan kernels.

Mirrors ``_ckernels.pyx`` operation for operation; the dispatch in
``__init__`` prefers the compiled module when it imported successfully.
Formulas and iteration order are kept identical so both backends agree
to the last ulp on the same inputs.
"""

import math

import numpy as np

BACKEND = "python"

KIND_EUCLIDEAN = 0
KIND_HYPERBOLIC = 1

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def delta_hyp(d):
    """Exact four-point hyperbolicity constant of a distance matrix.

    Scans every 4-subset {i<j<k<l}; for the three pairing sums
    s1 >= s2 >= s3 the defect is (s1 - s2)/2.  Returns the maximal
    defect and its witness tuple.
    """
    d = np.ascontiguousarray(d, dtype=np.float64)
    n = d.shape[0]
    if n < 4:
        return 0.0, (0, 0, 0, 0)
    best = 0.0
    wit = (0, 1, 2, 3)
    for j in range(1, n - 1):
        ks, ls = np.triu_indices(n - j - 1, 1)
        ks = ks + j + 1
        ls = ls + j + 1
        if ks.size == 0:
            continue
        dkl = d[ks, ls]
        for i in range(j):
            s1 = d[i, j] + dkl
            s2 = d[i, ks] + d[j, ls]
            s3 = d[i, ls] + d[j, ks]
            hi = np.maximum(s1, np.maximum(s2, s3))
            lo = np.minimum(s1, np.minimum(s2, s3))
            mid = s1 + s2 + s3 - hi - lo
            defect = 0.5 * (hi - mid)
            a = int(np.argmax(defect))
            if defect[a] > best:
                best = float(defect[a])
                wit = (i, j, int(ks[a]), int(ls[a]))
    return best, wit


def _sep_euclidean(t, d12, d23, d34, d41):
    if t <= 0.0:
        return d12 + d41
    x2 = (d12 * d12 + t * t - d23 * d23) / (2.0 * t)
    y2s = d12 * d12 - x2 * x2
    y2 = math.sqrt(y2s) if y2s > 0.0 else 0.0
    x4 = (d41 * d41 + t * t - d34 * d34) / (2.0 * t)
    y4s = d41 * d41 - x4 * x4
    y4 = math.sqrt(y4s) if y4s > 0.0 else 0.0
    return math.hypot(x2 - x4, y2 + y4)


def _sep_hyperbolic(t, d12, d23, d34, d41, s):
    ts = t * s
    if ts <= 0.0:
        return d12 + d41
    a = d12 * s
    c = d41 * s
    sht = math.sinh(ts)
    cht = math.cosh(ts)
    if a <= 0.0:
        p20, p21, p22 = 1.0, 0.0, 0.0
    else:
        sha = math.sinh(a)
        ca = (math.cosh(a) * cht - math.cosh(d23 * s)) / (sha * sht)
        ca = min(1.0, max(-1.0, ca))
        sa = math.sqrt(max(0.0, 1.0 - ca * ca))
        p20, p21, p22 = math.cosh(a), sha * ca, sha * sa
    if c <= 0.0:
        p40, p41, p42 = 1.0, 0.0, 0.0
    else:
        shc = math.sinh(c)
        cc = (math.cosh(c) * cht - math.cosh(d34 * s)) / (shc * sht)
        cc = min(1.0, max(-1.0, cc))
        sc = math.sqrt(max(0.0, 1.0 - cc * cc))
        p40, p41, p42 = math.cosh(c), shc * cc, -shc * sc
    inner = p20 * p40 - p21 * p41 - p22 * p42
    if inner < 1.0:
        inner = 1.0
    return math.acosh(inner) / s


def separation(kind, s, t, d12, d23, d34, d41):
    """Distance |x2bar - x4bar| for opposite-side placement at diagonal t."""
    if kind == KIND_EUCLIDEAN:
        return _sep_euclidean(t, d12, d23, d34, d41)
    return _sep_hyperbolic(t, d12, d23, d34, d41, s)


def sep_scan(kind, s, d12, d23, d34, d41, tlo, thi, cells=256):
    """Maximize the opposite-side separation over diagonal t in [tlo, thi].

    Dense grid first (guards against multiple local maxima), then a
    golden-section refinement of the best bracket.  Returns
    (sep_max, t_opt).
    """
    if thi <= tlo:
        t = tlo
        return separation(kind, s, t, d12, d23, d34, d41), t
    n = int(cells)
    step = (thi - tlo) / n
    best = -1.0
    ib = 0
    for i in range(n + 1):
        t = tlo + step * i
        v = separation(kind, s, t, d12, d23, d34, d41)
        if v > best:
            best = v
            ib = i
    a = tlo + step * (ib - 1) if ib > 0 else tlo
    b = tlo + step * (ib + 1) if ib < n else thi
    tol = 1e-10 * max(1.0, thi)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = separation(kind, s, x1, d12, d23, d34, d41)
    f2 = separation(kind, s, x2, d12, d23, d34, d41)
    while b - a > tol:
        if f1 > f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - _INVPHI * (b - a)
            f1 = separation(kind, s, x1, d12, d23, d34, d41)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + _INVPHI * (b - a)
            f2 = separation(kind, s, x2, d12, d23, d34, d41)
    t = 0.5 * (a + b)
    v = separation(kind, s, t, d12, d23, d34, d41)
    if v < best:
        v, t = best, tlo + step * ib
    return v, t
