"""Command-line interface for the lab."""

from .app import build_parser, main, run

__all__ = ["build_parser", "main", "run"]
