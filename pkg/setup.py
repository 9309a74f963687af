"""Build script: compiles the scan kernel when Cython is available.

The package works without the extension (a pure-Python kernel is
selected at import time), so a failed compilation is not fatal.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("minset._scan", ["src/minset/_scan.pyx"],
                   include_dirs=[numpy.get_include()],
                   define_macros=[("NPY_NO_DEPRECATED_API",
                                   "NPY_1_7_API_VERSION")])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    sys.stderr.write(f"warning: building without compiled kernel ({exc})\n")

setup(ext_modules=ext_modules)
