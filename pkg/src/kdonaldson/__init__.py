"""Exact symbolic engine for five-dimensional Nekrasov partition functions and the Euler characteristics they determine on surfaces."""

__version__ = "0.1.0"
