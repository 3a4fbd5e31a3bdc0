"""Prompt template loading and rendering.

Templates are plain text files with $name slots, bundled with the package
and overridable through SKILLPATH_PROMPT_DIR so deployments can edit them
without touching code. Rendering is strict: referencing a slot the caller
did not supply raises TemplateSlotMissing.
"""

from __future__ import annotations

import os
import string
from functools import lru_cache
from importlib import resources

from .errors import StorageError, TemplateSlotMissing

PROMPT_DIR_ENV = "SKILLPATH_PROMPT_DIR"


@lru_cache(maxsize=None)
def load_prompt(name: str) -> str:
    """Raw template text for prompts/<name>.txt, honoring the override dir."""
    filename = f"{name}.txt"
    override = os.environ.get(PROMPT_DIR_ENV)
    if override:
        path = os.path.join(override, filename)
        if os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    return fh.read()
            except OSError as exc:
                raise StorageError(f"cannot read prompt override {path}: {exc}") from exc
    try:
        return resources.files("skillpath").joinpath("prompts", filename).read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as exc:
        raise StorageError(f"no prompt template named {name!r}") from exc


def render_prompt(name: str, **slots: str) -> str:
    try:
        return string.Template(load_prompt(name)).substitute(**slots)
    except KeyError as exc:
        raise TemplateSlotMissing(str(exc.args[0])) from exc
