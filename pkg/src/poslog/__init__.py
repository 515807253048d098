"""Finite-model workbench for coalgebraic modal logic over sets and posets."""

__version__ = "0.1.0"
