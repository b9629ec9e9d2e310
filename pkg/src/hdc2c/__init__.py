"""Compile hyperdimensional-computing classifier descriptions to C.

The package has two execution routes for every description: a reference
interpreter that runs the training/inference pipeline in process, and a C
backend that emits a self-contained SIMD program whose results must match
the interpreter bit for bit.
"""

from __future__ import annotations

__version__ = "0.1.0"

from hdc2c.errors import (
    ConfigError,
    FormatError,
    IoError,
    LexError,
    ParseError,
    RangeError,
    SemanticError,
    TemplateError,
    ValidationError,
)

__all__ = [
    "ConfigError",
    "FormatError",
    "IoError",
    "LexError",
    "ParseError",
    "RangeError",
    "SemanticError",
    "TemplateError",
    "ValidationError",
    "__version__",
]
