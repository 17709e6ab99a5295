from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    # No -ffast-math / -march=native: the compiled kernel must produce the
    # same doubles as the pure-Python fallback (FMA contraction would not).
    extensions = cythonize(
        [
            Extension(
                "wiresplit._kernel",
                ["src/wiresplit/_kernel.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
else:
    extensions = []

setup(ext_modules=extensions)
