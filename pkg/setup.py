"""Build the compiled kernels; the package still works without them."""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("TESSELLA_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("tessella._kernels", ["src/tessella/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
