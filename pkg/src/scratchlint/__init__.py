"""Static analysis of Scratch 3.0 projects: bug patterns, code smells and metrics."""

__version__ = "0.1.0"
