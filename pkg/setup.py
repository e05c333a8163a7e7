import os

import numpy as np
from setuptools import Extension, setup

# The compiled kernels are optional: without Cython (or with SPINDLE_NO_EXT=1)
# the package installs with its pure-Python fallback only.
ext_modules = []
if os.environ.get("SPINDLE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension(
                "spindle._kernels._ckernels",
                ["src/spindle/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no FMA contraction: results must match the Python twin bit for bit
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )],
            language_level="3",
        )

setup(ext_modules=ext_modules)
