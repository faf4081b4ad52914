from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

setup(
    ext_modules=cythonize(
        [
            Extension(
                "hardy_lab._backend._native",
                ["src/hardy_lab/_backend/_native.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
)
