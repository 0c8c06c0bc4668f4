"""Build hook for the optional compiled statevector kernels."""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PALDUS_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "paldus._ckernels",
                    ["src/paldus/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
