from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension("nvsensor._kernels", sources=["src/nvsensor/_kernels.pyx"]),
]

setup(ext_modules=cythonize(extensions, language_level=3))
