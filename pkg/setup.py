"""Build the optional compiled jet kernel; the package works without it."""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        Extension("flatext._jetcore", ["src/flatext/_jetcore.pyx"],
                  include_dirs=[np.get_include()], optional=True),
        compiler_directives={"language_level": "3", "boundscheck": False,
                             "wraparound": False},
    )

setup(ext_modules=ext_modules)
