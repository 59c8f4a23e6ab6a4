"""Build script.  The compiled row-reduction kernel is optional: when
Cython is unavailable the package falls back to the pure-Python kernel
at import time, so installation must not fail here."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [
            Extension(
                "canoncurve.kernel._rowreduce",
                ["src/canoncurve/kernel/_rowreduce.pyx"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
