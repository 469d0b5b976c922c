"""Build script: compiles the optional fast kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile downgrades to a warning instead of
breaking the install.
"""
import warnings

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/indexdensity/kernel/_fast.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on build host
    warnings.warn(f"fast kernel not built, using pure-Python fallback: {exc}")

setup(ext_modules=ext_modules)
