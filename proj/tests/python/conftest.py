import os
import sys

# When run from ctest the extension lives in the CMake build tree; importing
# `qpoly` resolves through the source package with the extension dir appended.
ext_dir = os.environ.get("QPOLY_EXT_DIR")
if ext_dir:
    sys.path.insert(0, ext_dir)
    bindings = os.path.join(os.path.dirname(__file__), "..", "..", "bindings")
    sys.path.insert(0, os.path.abspath(bindings))
