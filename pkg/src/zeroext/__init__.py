"""Exact minimum 0-extension (multifacility location) on orientable modular graphs."""

__version__ = "0.1.0"
