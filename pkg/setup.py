"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so the build is marked optional.  No fast-math flags: the
compiled kernels must produce the same IEEE doubles as the fallback.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "bcnfchaos._kernels_cy",
                ["src/bcnfchaos/_kernels_cy.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
    for ext in extensions:
        ext.optional = True
else:
    extensions = []

setup(ext_modules=extensions)
