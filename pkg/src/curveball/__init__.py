"""Uniform sampling of graphs with fixed degrees via Curveball trades."""
__version__ = "0.1.0"
