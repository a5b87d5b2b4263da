# Compiled twins of the hot scan kernels in _pykernels.py.
# Same formulas, same iteration order, so results match the fallback.

from libc.math cimport sqrt, sinh, cosh, acosh, hypot

BACKEND = "compiled"

KIND_EUCLIDEAN = 0
KIND_HYPERBOLIC = 1

cdef double _INVPHI = (sqrt(5.0) - 1.0) / 2.0


def delta_hyp(double[:, :] d):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, j, k, l
    cdef double s1, s2, s3, hi, mid, lo, defect
    cdef double best = 0.0
    cdef Py_ssize_t wi = 0, wj = 1, wk = 2, wl = 3
    if n < 4:
        return 0.0, (0, 0, 0, 0)
    for j in range(1, n - 1):
        for i in range(j):
            for k in range(j + 1, n - 1):
                for l in range(k + 1, n):
                    s1 = d[i, j] + d[k, l]
                    s2 = d[i, k] + d[j, l]
                    s3 = d[i, l] + d[j, k]
                    if s1 >= s2:
                        hi = s1; lo = s2
                    else:
                        hi = s2; lo = s1
                    if s3 > hi:
                        mid = hi; hi = s3
                    elif s3 < lo:
                        mid = lo; lo = s3
                    else:
                        mid = s3
                    defect = 0.5 * (hi - mid)
                    if defect > best:
                        best = defect
                        wi = i; wj = j; wk = k; wl = l
    return best, (wi, wj, wk, wl)


cdef double _sep_euclidean(double t, double d12, double d23,
                           double d34, double d41) nogil:
    cdef double x2, y2s, y2, x4, y4s, y4
    if t <= 0.0:
        return d12 + d41
    x2 = (d12 * d12 + t * t - d23 * d23) / (2.0 * t)
    y2s = d12 * d12 - x2 * x2
    y2 = sqrt(y2s) if y2s > 0.0 else 0.0
    x4 = (d41 * d41 + t * t - d34 * d34) / (2.0 * t)
    y4s = d41 * d41 - x4 * x4
    y4 = sqrt(y4s) if y4s > 0.0 else 0.0
    return hypot(x2 - x4, y2 + y4)


cdef double _sep_hyperbolic(double t, double d12, double d23,
                            double d34, double d41, double s) nogil:
    cdef double ts = t * s
    cdef double a, c, sht, cht, sha, shc, ca, cc, sa, sc
    cdef double p20, p21, p22, p40, p41, p42, inner
    if ts <= 0.0:
        return d12 + d41
    a = d12 * s
    c = d41 * s
    sht = sinh(ts)
    cht = cosh(ts)
    if a <= 0.0:
        p20 = 1.0; p21 = 0.0; p22 = 0.0
    else:
        sha = sinh(a)
        ca = (cosh(a) * cht - cosh(d23 * s)) / (sha * sht)
        if ca > 1.0:
            ca = 1.0
        elif ca < -1.0:
            ca = -1.0
        sa = sqrt(1.0 - ca * ca) if ca * ca < 1.0 else 0.0
        p20 = cosh(a); p21 = sha * ca; p22 = sha * sa
    if c <= 0.0:
        p40 = 1.0; p41 = 0.0; p42 = 0.0
    else:
        shc = sinh(c)
        cc = (cosh(c) * cht - cosh(d34 * s)) / (shc * sht)
        if cc > 1.0:
            cc = 1.0
        elif cc < -1.0:
            cc = -1.0
        sc = sqrt(1.0 - cc * cc) if cc * cc < 1.0 else 0.0
        p40 = cosh(c); p41 = shc * cc; p42 = -shc * sc
    inner = p20 * p40 - p21 * p41 - p22 * p42
    if inner < 1.0:
        inner = 1.0
    return acosh(inner) / s


cdef double _sep(int kind, double s, double t, double d12, double d23,
                 double d34, double d41) nogil:
    if kind == 0:
        return _sep_euclidean(t, d12, d23, d34, d41)
    return _sep_hyperbolic(t, d12, d23, d34, d41, s)


def separation(int kind, double s, double t, double d12, double d23,
               double d34, double d41):
    return _sep(kind, s, t, d12, d23, d34, d41)


def sep_scan(int kind, double s, double d12, double d23, double d34,
             double d41, double tlo, double thi, int cells=256):
    cdef double step, best, v, a, b, tol, x1, x2, f1, f2, t
    cdef int i, ib
    if thi <= tlo:
        t = tlo
        return _sep(kind, s, t, d12, d23, d34, d41), t
    step = (thi - tlo) / cells
    best = -1.0
    ib = 0
    for i in range(cells + 1):
        t = tlo + step * i
        v = _sep(kind, s, t, d12, d23, d34, d41)
        if v > best:
            best = v
            ib = i
    a = tlo + step * (ib - 1) if ib > 0 else tlo
    b = tlo + step * (ib + 1) if ib < cells else thi
    tol = 1e-10 * (thi if thi > 1.0 else 1.0)
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1 = _sep(kind, s, x1, d12, d23, d34, d41)
    f2 = _sep(kind, s, x2, d12, d23, d34, d41)
    while b - a > tol:
        if f1 > f2:
            b = x2
            x2 = x1
            f2 = f1
            x1 = b - _INVPHI * (b - a)
            f1 = _sep(kind, s, x1, d12, d23, d34, d41)
        else:
            a = x1
            x1 = x2
            f1 = f2
            x2 = a + _INVPHI * (b - a)
            f2 = _sep(kind, s, x2, d12, d23, d34, d41)
    t = 0.5 * (a + b)
    v = _sep(kind, s, t, d12, d23, d34, d41)
    if v < best:
        v = best
        t = tlo + step * ib
    return v, t
