"""Static C template fragments and their placeholder protocol.

A placeholder is ``{KEY}`` where KEY is all-caps. Fragments are scanned on
load so the set of keys each one expects is known up front; instantiation
substitutes in a single pass and never rescans replacement text, so C
braces in generated code cannot collide with the syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from ..errors import TemplateError

_PLACEHOLDER = re.compile(r"\{([A-Z][A-Z0-9_]*)\}")

RUNTIME_HEADER = "runtime.h.in"
MAIN_SEQUENTIAL = "main_seq.c.in"
MAIN_PARALLEL = "main_par.c.in"
MAKEFILE = "Makefile.in"

FRAGMENT_NAMES = (RUNTIME_HEADER, MAIN_SEQUENTIAL, MAIN_PARALLEL, MAKEFILE)


@dataclass(frozen=True)
class TemplateFragment:
    name: str
    text: str
    placeholders: frozenset[str]

    def instantiate(self, bindings: Mapping[str, str] | None = None) -> str:
        """Fill every placeholder; a missing binding is a TemplateError."""
        bound = bindings or {}

        def sub(match: re.Match[str]) -> str:
            key = match.group(1)
            if key not in bound:
                raise TemplateError(key)
            return str(bound[key])

        return _PLACEHOLDER.sub(sub, self.text)


def scan_placeholders(text: str) -> frozenset[str]:
    return frozenset(m.group(1) for m in _PLACEHOLDER.finditer(text))


def load_fragment(name: str) -> TemplateFragment:
    """Load a fragment shipped with the package by file name."""
    text = (
        resources.files(__package__)
        .joinpath("templates")
        .joinpath(name)
        .read_text(encoding="utf-8")
    )
    return TemplateFragment(name=name, text=text, placeholders=scan_placeholders(text))
