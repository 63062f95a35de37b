"""Build script: compiles the hot-loop extension when Cython is available.

The extension is optional; without it the package falls back to the numpy
kernels in wedgegraph._kernels_py.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "wedgegraph._kernels",
                sources=["src/wedgegraph/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
