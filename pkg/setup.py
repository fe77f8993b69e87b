from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "vhrvd.lp._kernel",
        ["src/vhrvd/lp/_kernel.pyx"],
        extra_compile_args=["-O3"],
        # the numpy kernel takes over when the build fails
        optional=True,
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
