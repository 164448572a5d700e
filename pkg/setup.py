import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "crease._kernel",
    ["src/crease/_kernel.pyx"],
    include_dirs=[numpy.get_include()],
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize([ext], language_level=3))
