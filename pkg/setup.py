"""Build script for the compiled PRNG core.

The extension is optional at run time: stagegen falls back to the pure-Python
core when the compiled module is missing (see stagegen.rand).  Building is
attempted unconditionally here; pass STAGEGEN_SKIP_EXT=1 to skip it.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("STAGEGEN_SKIP_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/stagegen/_fastrand.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
