"""Optionally compile the interpreter kernel with Cython.

The kernel is plain Python (src/confdebug/interp/_kernel.py). When Cython
and a C toolchain are available it is compiled to an extension module of
the same name, which Python's import machinery prefers over the source
file; otherwise the pure-Python version runs. Set CONFDEBUG_NO_EXT=1 to
skip compilation.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CONFDEBUG_NO_EXT"):
    try:
        from Cython.Build import cythonize
        ext_modules = cythonize(
            ["src/confdebug/interp/_kernel.py"],
            language_level=3,
            quiet=True,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
