"""NADIA: management system for acception-based multilingual lexical databases."""

__version__ = "0.1.0"
