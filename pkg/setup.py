"""Builds the optional compiled kernels; the package still installs without them."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SBPCODES_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("sbpcodes._kernels", ["src/sbpcodes/_kernels.pyx"], include_dirs=[np.get_include()])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
