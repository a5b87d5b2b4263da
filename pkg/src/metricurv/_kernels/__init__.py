"""Kernel dispatch: compiled extension when built, numpy fallback otherwise."""

try:
    from metricurv._kernels import _ckernels as impl
except ImportError:  # extension not built on this install
    from metricurv._kernels import _pykernels as impl

BACKEND = impl.BACKEND
KIND_EUCLIDEAN = impl.KIND_EUCLIDEAN
KIND_HYPERBOLIC = impl.KIND_HYPERBOLIC

delta_hyp = impl.delta_hyp
separation = impl.separation
sep_scan = impl.sep_scan
