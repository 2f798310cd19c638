"""Berwald-type Randers and Matsumoto metrics on 3-dimensional Lie groups."""

__version__ = "0.1.0"
