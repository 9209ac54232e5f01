from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # optional=True: a failed compile falls back to the pure-Python kernels
    # selected at import time by summarank.kernels.
    extensions = cythonize(
        [
            Extension(
                "summarank._alignment",
                ["src/summarank/_alignment.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
else:
    extensions = []

setup(ext_modules=extensions)
