"""Exact-arithmetic engine for external tensor products of local systems."""

__version__ = "0.1.0"
