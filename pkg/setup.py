"""Builds the optional compiled evaluator.  Without Cython or a C
compiler the package still installs and runs on the pure-Python
backend."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    cythonize = None

if cythonize is not None:
    try:
        ext_modules = cythonize(
            ["src/alonzo/semantics/_fastcore.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except Exception as exc:  # pragma: no cover
        print(f"warning: not building the compiled evaluator ({exc})")

setup(ext_modules=ext_modules)
