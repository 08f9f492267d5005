from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("vcut._core", ["src/vcut/_core.pyx"])],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except ImportError:
    # Pure-Python fallback (vcut._pyflow) is selected at import time.
    extensions = []

setup(ext_modules=extensions)
