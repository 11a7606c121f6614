from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# -ffp-contract=off keeps the C arithmetic bit-identical to the pure-Python
# kernels (no FMA contraction), so both backends can be cross-checked exactly.
extensions = [
    Extension(
        "cprdyn.kernels._ckern",
        ["src/cprdyn/kernels/_ckern.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(extensions, language_level="3") if cythonize else [],
)
