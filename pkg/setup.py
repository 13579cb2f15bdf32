"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure NumPy/Python
fallback is selected at import time), so any failure here degrades to a
source-only install instead of aborting.
"""
from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "sombrero.kernels._core",
                ["src/sombrero/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"sombrero: skipping compiled kernels ({exc}); pure fallback will be used")

setup(ext_modules=ext_modules)
