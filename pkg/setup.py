import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the accelerator extension if possible, fall back to pure Python."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled core skipped ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); using pure-Python kernels")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("spikevar._core", ["src/spikevar/_core.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
