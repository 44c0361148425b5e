"""Static-image rendering for covprop CSV bundles."""

__version__ = "0.1.0"

from .renderer import SchemaError, render

__all__ = ["__version__", "SchemaError", "render"]
