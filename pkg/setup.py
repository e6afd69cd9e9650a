"""Build hook: compile the optional kernel extension when Cython is available.

The package is fully functional without it (nilprob.kernels falls back to
the numpy implementations), so any build failure here is non-fatal by design:
install with NILPROB_SKIP_EXT=1 to skip compilation outright.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("NILPROB_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("nilprob._kernels", ["src/nilprob/_kernels.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
