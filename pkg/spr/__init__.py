"""Steiner point removal: terminal-preserving graph minors via noisy Voronoi clustering."""

__version__ = "0.1.0"
