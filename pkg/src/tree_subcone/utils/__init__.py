"""Utility modules for tree subcone."""

from .logger import console, err_console

__all__ = ["console", "err_console"]
