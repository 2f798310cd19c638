from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "lieflag._ckernels",
        ["src/lieflag/_ckernels.pyx"],
        extra_compile_args=["-O3"],
        # a failed compile leaves the pure-Python kernels in charge
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
