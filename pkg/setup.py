"""Build the optional compiled kernels.

If Cython or a C compiler is missing the package still installs and runs on
the numpy fallback in ``twofaced._fallback``.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: compiled kernels not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); using numpy fallback")


def extensions():
    try:
        from Cython.Build import cythonize
        import numpy as np
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "twofaced._kernels",
        ["src/twofaced/_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
