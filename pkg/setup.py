"""Build the optional compiled theta kernel.

If Cython or a C compiler is missing the package still installs and the
pure-Python enumerator is used instead.
"""
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("udtoda._theta_core", ["src/udtoda/_theta_core.pyx"])],
        compiler_directives={"language_level": 3},
        quiet=True,
    )
except ImportError:
    ext_modules = []


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover
            print(f"warning: compiled theta kernel not built ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: {ext.name} not built ({exc})")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
