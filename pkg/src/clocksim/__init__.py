"""Measured quasi-ideal clock simulation toolkit."""

__version__ = "0.1.0"
