from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "wzlq._wzlq",
    [
        "bindings/pymodule.cpp",
        "src/lattice.cpp",
        "src/sublattice.cpp",
        "src/codec.cpp",
        "src/analysis.cpp",
        "src/sources.cpp",
        "src/netsim.cpp",
    ],
    include_dirs=["include", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(
    ext_modules=[ext],
    cmdclass={"build_ext": build_ext},
    packages=["wzlq"],
    package_dir={"wzlq": "python/wzlq"},
)
