"""Bipartite quantum-correlation measures and polygamy chain verification."""

try:
    from ._qpoly import *  # noqa: F401,F403
except ImportError:  # development layout: extension built into the CMake tree
    from _qpoly import *  # noqa: F401,F403
