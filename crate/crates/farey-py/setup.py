"""Builds the Rust extension with cargo and installs the cdylib as the
`fareygaps` module. Used because the build backend must be plain
setuptools here; install with `pip install -e . --no-build-isolation`.
"""

import os
import shutil
import subprocess

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

CRATE_DIR = os.path.dirname(os.path.abspath(__file__))
WORKSPACE = os.path.abspath(os.path.join(CRATE_DIR, "..", ".."))


class CargoExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CargoBuildExt(build_ext):
    def build_extension(self, ext):
        subprocess.check_call(
            ["cargo", "build", "--release", "-p", "farey-py"], cwd=CRATE_DIR
        )
        for libname in ("libfareygaps.so", "libfareygaps.dylib", "fareygaps.dll"):
            built = os.path.join(WORKSPACE, "target", "release", libname)
            if os.path.exists(built):
                break
        else:
            raise RuntimeError("cargo did not produce the fareygaps cdylib")
        dest = self.get_ext_fullpath(ext.name)
        os.makedirs(os.path.dirname(dest), exist_ok=True)
        shutil.copyfile(built, dest)


setup(
    ext_modules=[CargoExtension("fareygaps")],
    cmdclass={"build_ext": CargoBuildExt},
)
