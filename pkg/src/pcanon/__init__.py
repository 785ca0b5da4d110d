"""Executable characterizations of canonical p-henselian valuations."""

__version__ = "0.1.0"
