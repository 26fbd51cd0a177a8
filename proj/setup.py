import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")

ext = Pybind11Extension(
    "hyperconc._core",
    sources=["python/module.cpp"] + sorted(glob.glob("src/*.cpp")),
    include_dirs=["include", "vendor", eigen],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
