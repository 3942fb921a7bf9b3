"""Exact kernel for pseudo-metrics, Clifford algebras, connections and
Dirac operators on wedges of lines."""

__version__ = "0.1.0"
