from __future__ import annotations

import json

import pytest

from skillpath.collection import (
    build_collection,
    example_from_record,
    example_to_record,
    persist_bundle,
    persist_collection,
    restore_bundle,
    restore_collection,
)
from skillpath.errors import CorruptCollection, EmptyCollection
from skillpath.skills import ReasoningSkill

from conftest import make_example


def test_frequency_counts_example_membership_not_occurrences(worked_collection):
    # the third example uses inductive twice but counts once
    assert worked_collection.n == 3
    assert worked_collection.freq(ReasoningSkill.DEDUCTIVE) == 2
    assert worked_collection.freq(ReasoningSkill.INDUCTIVE) == 1
    assert worked_collection.freq(ReasoningSkill.ANALOGICAL) == 1
    assert worked_collection.freq(ReasoningSkill.ABDUCTIVE) == 0


def test_build_collection_rejects_emptiness():
    with pytest.raises(EmptyCollection):
        build_collection([])


def test_example_record_round_trip():
    example = make_example(
        [ReasoningSkill.CAUSE_EFFECT, ReasoningSkill.CRITICAL_THINKING],
        question="Why did the bridge close?",
        answer="structural repairs",
    )
    record = example_to_record(example)
    assert record["strategy"]["skills"] == ["cause & effect", "critical thinking"]
    assert example_from_record(record) == example


def test_persist_restore_round_trip(tmp_path):
    collection = build_collection(
        [
            make_example([ReasoningSkill.DEDUCTIVE]),
            make_example([ReasoningSkill.INDUCTIVE, ReasoningSkill.DEDUCTIVE]),
        ]
    )
    path = tmp_path / "c.json"
    persist_collection(collection, str(path), construction_mode="guided_fill", delta=7)
    restored = restore_collection(str(path))
    assert restored == collection

    body = json.loads(path.read_text(encoding="utf-8"))
    assert body["version"] == 1
    assert body["n"] == 2
    assert body["construction_mode"] == "guided_fill"
    assert body["delta"] == 7


def test_persist_is_deterministic(tmp_path):
    collection = build_collection([make_example([ReasoningSkill.ABDUCTIVE])])
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    persist_collection(collection, str(a), created_at="2026-01-01T00:00:00Z")
    persist_collection(collection, str(b), created_at="2026-01-01T00:00:00Z")
    assert a.read_bytes() == b.read_bytes()


def test_restore_rejects_tampered_frequency_index(tmp_path):
    collection = build_collection([make_example([ReasoningSkill.DEDUCTIVE])])
    path = tmp_path / "c.json"
    persist_collection(collection, str(path))
    body = json.loads(path.read_text(encoding="utf-8"))
    body["freq_index"]["inductive"] = 5
    path.write_text(json.dumps(body), encoding="utf-8")
    with pytest.raises(CorruptCollection):
        restore_collection(str(path))


def test_restore_rejects_wrong_size(tmp_path):
    collection = build_collection([make_example([ReasoningSkill.DEDUCTIVE])])
    path = tmp_path / "c.json"
    persist_collection(collection, str(path))
    body = json.loads(path.read_text(encoding="utf-8"))
    body["n"] = 9
    path.write_text(json.dumps(body), encoding="utf-8")
    with pytest.raises(CorruptCollection):
        restore_collection(str(path))


def test_restore_rejects_unknown_version(tmp_path):
    collection = build_collection([make_example([ReasoningSkill.DEDUCTIVE])])
    path = tmp_path / "c.json"
    persist_collection(collection, str(path))
    body = json.loads(path.read_text(encoding="utf-8"))
    body["version"] = 99
    path.write_text(json.dumps(body), encoding="utf-8")
    with pytest.raises(CorruptCollection):
        restore_collection(str(path))


def test_restore_rejects_malformed_json(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{oops", encoding="utf-8")
    with pytest.raises(CorruptCollection):
        restore_collection(str(path))


def test_bundle_round_trip_preserves_keys(tmp_path):
    bundle = {
        "q2": build_collection([make_example([ReasoningSkill.INDUCTIVE])]),
        "q1": build_collection(
            [
                make_example([ReasoningSkill.DEDUCTIVE]),
                make_example([ReasoningSkill.ANALOGICAL]),
            ]
        ),
    }
    path = tmp_path / "bundle.json"
    persist_bundle(bundle, str(path), created_at="2026-01-01T00:00:00Z")
    restored = restore_bundle(str(path))
    assert set(restored) == {"q1", "q2"}
    assert restored["q1"] == bundle["q1"]
    assert restored["q2"] == bundle["q2"]

    body = json.loads(path.read_text(encoding="utf-8"))
    assert list(body["collections"].keys()) == ["q1", "q2"]
