"""QUBO solver workbench with best-solver prediction."""

__version__ = "0.1.0"
