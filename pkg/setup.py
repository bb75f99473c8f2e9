"""Build script: compiles the Monte Carlo kernel when Cython is available.

The extension is optional; if Cython or a C compiler is missing the package
installs pure-Python and xicse._backend falls back to the numpy kernel.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        warnings.warn(f"building without the compiled MC kernel: {exc}")
        return []
    return cythonize(
        [
            Extension(
                "xicse._mc_core",
                ["src/xicse/_mc_core.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives={"language_level": "3"},
    )


class OptionalBuildExt(build_ext):
    """Carry on with the pure-Python fallback if compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"compiled MC kernel skipped: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"compiled MC kernel skipped: {exc}")


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
