import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    for candidate in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(candidate):
            return candidate
    raise RuntimeError("Eigen3 headers not found")


sources = sorted(
    os.path.join("src", f) for f in os.listdir("src") if f.endswith(".cpp")
) + ["bindings/pymodule.cpp"]

setup(
    ext_modules=[
        Pybind11Extension(
            "dnlab._dnlab",
            sources,
            include_dirs=["include", "vendor", eigen_include()],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
    packages=["dnlab"],
    package_dir={"dnlab": "python/dnlab"},
)
