"""Finite model-theory toolkit: toy AECs, their relational presentation, logic topologies and G-metrics."""

__version__ = "0.1.0"
