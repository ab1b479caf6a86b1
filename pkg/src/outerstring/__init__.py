"""Exact tools for outerstring graphs: arrangements, crossing levels, treewidth and solvers."""

from .errors import OuterstringError

__all__ = ["OuterstringError"]
__version__ = "0.1.0"
