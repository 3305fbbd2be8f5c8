import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

_PYX = os.path.join("src", "polydescent", "_core.pyx")

extensions = [
    Extension(
        "polydescent._core",
        [_PYX],
        extra_compile_args=["-O3"],
        optional=True,  # pure-Python lane takes over if the build fails
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    if (cythonize is not None and os.path.exists(_PYX))
    else [],
)
