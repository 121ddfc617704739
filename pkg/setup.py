"""Build hook for the optional compiled kernels.

Metadata lives in pyproject.toml.  When Cython (or a C compiler) is missing the
package still installs and falls back to the pure-Python kernels.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SCRATCHLINT_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("scratchlint._ckernels", ["src/scratchlint/_ckernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
