"""Positive logic over meet-semilattices: filter semantics, duality, correspondence."""

__version__ = "0.1.0"
