"""Command-line front end."""

from .app import FracLayerApp, build_parser, main

__all__ = ["FracLayerApp", "build_parser", "main"]
