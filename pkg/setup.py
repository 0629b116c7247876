"""Builds the optional compiled kernels; the package works without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("K3MIRROR_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            "src/k3mirror/_ckernels.pyx",
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
