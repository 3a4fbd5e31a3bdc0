"""Access to the data files bundled with the package.

The entity pool feeds both the default tagger's gazetteer and random
template fills; the repair-cue list is the versioned configuration consumed
by retrace detection. Both are plain JSON so deployments can ship edited
copies via the override directory.
"""

from __future__ import annotations

import json
import os
from functools import lru_cache
from importlib import resources

from .errors import StorageError

DATA_DIR_ENV = "SKILLPATH_DATA_DIR"


def _read_bundled(name: str) -> str:
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        path = os.path.join(override, name)
        if os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    return fh.read()
            except OSError as exc:
                raise StorageError(f"cannot read data override {path}: {exc}") from exc
    return resources.files("skillpath").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_entity_pool() -> dict[str, list[str]]:
    """Entity candidates per type, e.g. {"place": ["Eiffel Tower", ...]}."""
    try:
        doc = json.loads(_read_bundled("entity_pool.json"))
    except json.JSONDecodeError as exc:
        raise StorageError(f"entity pool is not valid JSON: {exc}") from exc
    return {t: list(names) for t, names in doc["types"].items()}


@lru_cache(maxsize=None)
def load_repair_cues() -> list[str]:
    """Self-correction cue phrases, lowercase, from the versioned cue file."""
    try:
        doc = json.loads(_read_bundled("repair_cues.json"))
    except json.JSONDecodeError as exc:
        raise StorageError(f"repair cue file is not valid JSON: {exc}") from exc
    return [c.casefold() for c in doc["cues"]]
