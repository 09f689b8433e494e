"""Build the optional Cython kernels.

The package works without them: ``amccr._backend`` falls back to the
numpy implementation when the extension cannot be imported.
"""
import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

ext_modules = []
if not os.environ.get("AMCCR_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "amccr._kernels",
                    ["src/amccr/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("Cython/numpy unavailable; building pure-Python package", file=sys.stderr)


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"skipping compiled kernels: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"skipping {ext.name}: {exc}", file=sys.stderr)


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
