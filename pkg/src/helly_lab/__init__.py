"""Helly-type properties of set families and the graph extremal problems
they reduce to: checkers, constructions, bounds and exhaustive searches."""

__version__ = "0.1.0"
