"""Build script: compiles the optional fast integrator kernel.

The package is fully functional without the extension (a pure-Python twin
of the kernel is selected at import time), so a missing compiler or a
missing Cython only costs speed, not features.

-ffp-contract=off keeps the C arithmetic bit-identical to CPython floats:
FMA contraction would otherwise produce slightly different rounding than
the pure-Python fallback and break the backend equivalence tests.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/catchrig/_kernel.pyx",
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.extra_compile_args = ["-O3", "-ffp-contract=off"]
except ImportError:
    print("catchrig: Cython not available, building without the compiled kernel")

setup(ext_modules=ext_modules)
