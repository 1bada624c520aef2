"""Pants decompositions as trivalent graphs, their cubical move metric, and the bound evaluators."""

__version__ = "0.1.0"
