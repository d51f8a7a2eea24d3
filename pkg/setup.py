from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "isoflow._kernels._flow_cy",
            ["src/isoflow/_kernels/_flow_cy.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )],
        language_level=3,
    )
except ImportError:
    # pure-python fallback kernel is selected at import time
    ext_modules = []

setup(ext_modules=ext_modules)
