"""Example collections: the Γ a question's matcher selects from.

freq_index counts example membership, not occurrences: an example whose
strategy uses the same skill three times contributes one to that skill's
frequency. That distinction feeds straight into the uniqueness weight, so
it is enforced here and re-verified whenever a stored collection is
loaded.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .errors import CorruptCollection, EmptyCollection, StorageError
from .examplegen import ConstructionMode, ReasoningStrategy, SimilarExample
from .skills import ReasoningSkill, parse_skill

COLLECTION_VERSION = 1


@dataclass
class ExampleCollection:
    examples: list[SimilarExample]
    n: int
    freq_index: dict[ReasoningSkill, int] = field(default_factory=dict)

    def freq(self, skill: ReasoningSkill) -> int:
        return self.freq_index.get(skill, 0)


def build_collection(examples: list[SimilarExample]) -> ExampleCollection:
    """Assemble a collection and its membership frequency index."""
    if not examples:
        raise EmptyCollection("cannot build a collection from zero examples")
    freq: dict[ReasoningSkill, int] = {}
    for ex in examples:
        for skill in set(ex.strategy.skills):
            freq[skill] = freq.get(skill, 0) + 1
    return ExampleCollection(examples=list(examples), n=len(examples), freq_index=freq)


def example_to_record(example: SimilarExample) -> dict:
    return {
        "question": example.question,
        "strategy": {
            "subquestions": list(example.strategy.subquestions),
            "skills": [s.canonical for s in example.strategy.skills],
        },
        "reference_docs": list(example.reference_docs),
        "answer": example.answer,
        "construction_mode": example.construction_mode.value,
    }


def example_from_record(doc: dict) -> SimilarExample:
    strategy = ReasoningStrategy(
        tuple(doc["strategy"]["subquestions"]),
        tuple(parse_skill(s) for s in doc["strategy"]["skills"]),
    )
    return SimilarExample(
        question=doc["question"],
        strategy=strategy,
        reference_docs=tuple(doc["reference_docs"]),
        answer=doc["answer"],
        construction_mode=ConstructionMode(doc["construction_mode"]),
    )


def _collection_body(collection: ExampleCollection) -> dict:
    return {
        "n": collection.n,
        "freq_index": {s.canonical: f for s, f in sorted(collection.freq_index.items())},
        "examples": [example_to_record(ex) for ex in collection.examples],
    }


def _collection_from_body(doc: dict, source: str) -> ExampleCollection:
    try:
        examples = [example_from_record(d) for d in doc["examples"]]
        stored_n = doc["n"]
        stored_freq = {parse_skill(k): int(v) for k, v in doc["freq_index"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptCollection(f"{source}: malformed collection: {exc}") from exc
    if not examples:
        raise CorruptCollection(f"{source}: collection holds zero examples")
    rebuilt = build_collection(examples)
    if stored_n != rebuilt.n:
        raise CorruptCollection(f"{source}: stored n={stored_n} but found {rebuilt.n} examples")
    if stored_freq != rebuilt.freq_index:
        raise CorruptCollection(f"{source}: stored freq_index disagrees with examples")
    return rebuilt


def _dump_json(doc: dict, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}") from exc


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.loads(fh.read())
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CorruptCollection(f"{path}: not valid JSON: {exc}") from exc


def persist_collection(
    collection: ExampleCollection,
    path: str,
    construction_mode: str | None = None,
    delta: int | None = None,
    created_at: str | None = None,
) -> None:
    """Write one collection with its provenance metadata."""
    doc = {
        "version": COLLECTION_VERSION,
        "created_at": created_at or _utc_now(),
        "construction_mode": construction_mode,
        "delta": delta,
    }
    doc.update(_collection_body(collection))
    _dump_json(doc, path)


def restore_collection(path: str) -> ExampleCollection:
    """Load a collection, re-deriving and checking n and freq_index."""
    doc = _load_json(path)
    if doc.get("version") != COLLECTION_VERSION:
        raise CorruptCollection(f"{path}: unsupported collection version {doc.get('version')!r}")
    return _collection_from_body(doc, path)


def persist_bundle(
    collections: dict[str, ExampleCollection],
    path: str,
    construction_mode: str | None = None,
    delta: int | None = None,
    created_at: str | None = None,
) -> None:
    """Write a keyed bundle of per-question collections in one file."""
    doc = {
        "version": COLLECTION_VERSION,
        "created_at": created_at or _utc_now(),
        "construction_mode": construction_mode,
        "delta": delta,
        "collections": {
            qid: _collection_body(c) for qid, c in sorted(collections.items())
        },
    }
    _dump_json(doc, path)


def restore_bundle(path: str) -> dict[str, ExampleCollection]:
    doc = _load_json(path)
    if doc.get("version") != COLLECTION_VERSION:
        raise CorruptCollection(f"{path}: unsupported collection version {doc.get('version')!r}")
    body = doc.get("collections")
    if not isinstance(body, dict):
        raise CorruptCollection(f"{path}: no collections table")
    return {
        qid: _collection_from_body(entry, f"{path}[{qid}]") for qid, entry in body.items()
    }


def _utc_now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
