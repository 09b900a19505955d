"""Exact enumeration and evaluation of the open combinatorial formula for open intersection numbers."""

__version__ = "0.1.0"
