"""Build script: compiles the optional fast tape-evaluation kernel.

The package is fully functional without the extension (a pure-Python/numpy
backend is selected at import time), so a failed compile is downgraded to a
warning rather than aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "riemcheck._tapeval",
                ["src/riemcheck/_tapeval.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    sys.stderr.write(f"riemcheck: skipping compiled kernel ({exc!r}); "
                     "pure-Python backend will be used\n")

setup(ext_modules=ext_modules)
