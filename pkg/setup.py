"""Build hook: compile the optional Cython kernel core when possible.

The package is fully functional without the extension (a pure backend is
selected at import time), so any build failure here is non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/selberg_lab/_ckernels.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(np.get_include())
except Exception as exc:  # pragma: no cover - depends on toolchain
    print(f"selberg-lab: skipping compiled kernels ({exc!r}); "
          "the pure-Python backend will be used")

setup(ext_modules=ext_modules)
