"""Renders nhring's CSV artifacts into the reference figure panels.

Strictly a read-only consumer: numeric data is never altered or
reinterpreted, only drawn.
"""

__version__ = "0.1.0"

from .io import SchemaError, load_csv
from .figures import FIGURES, render

__all__ = ["FIGURES", "SchemaError", "load_csv", "render", "__version__"]
