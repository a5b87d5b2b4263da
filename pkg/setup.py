from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "metricurv._kernels._ckernels",
                ["src/metricurv/_kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython available: install pure-Python only; the kernel dispatch
    # falls back to the numpy implementation at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
