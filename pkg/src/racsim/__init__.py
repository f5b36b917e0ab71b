"""Desk-scale simulations of n->1 random access codes backed by path-spin entanglement."""

from . import bell, classical, concat, mzi, qcore, qrac

__version__ = "0.1.0"

__all__ = ["bell", "classical", "concat", "mzi", "qcore", "qrac", "__version__"]
