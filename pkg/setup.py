"""Build hook: compile the mod-2 sweep kernels when Cython is available.

The package works without the extension; ``fswcalc.steenrod._kernels``
falls back to the pure-Python implementation.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("FSWCALC_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            "src/fswcalc/steenrod/_ckernels.pyx",
            compiler_directives={"language_level": "3", "boundscheck": False,
                                 "wraparound": False},
            quiet=True,
        )

setup(ext_modules=ext_modules)
