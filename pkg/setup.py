"""Build script: compiles the optional Cython kernel extension.

If Cython or a C compiler is unavailable the build succeeds anyway and the
package falls back to the pure-numpy kernels at import time.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible; warn and continue if not."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        warnings.warn(
            "compiled kernels were not built (%s); dirseries will use the "
            "pure-Python backend" % (exc,),
            stacklevel=2,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "dirseries._kernels",
        ["src/dirseries/_kernels.pyx"],
        # -ffp-contract=off pins the expanded complex-product formula so the
        # compiled backend matches the numpy fallback bit for bit.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
