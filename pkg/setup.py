import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SELFSIM_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("selfsim._ckernel", ["src/selfsim/_ckernel.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "embedsignature": True,
            },
        )
    except ImportError:
        # no Cython: install pure-Python only, the kernel shim falls back
        ext_modules = []

setup(ext_modules=ext_modules)
