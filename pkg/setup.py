from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "twomodebec.kernels._ql_cy",
                ["src/twomodebec/kernels/_ql_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython available: install the pure-Python fallback only.
    ext_modules = []

setup(ext_modules=ext_modules)
