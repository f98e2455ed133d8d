"""Symmetric disjunctive list-decoding codes: rate bounds, ensembles, verification."""

__version__ = "0.1.0"
