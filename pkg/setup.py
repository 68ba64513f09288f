"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any build failure here should not block installation:
build with ``DJCQSL_SKIP_EXT=1 pip install -e .`` to skip it explicitly.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DJCQSL_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "djcqsl._kernels._core",
                    ["src/djcqsl/_kernels/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
