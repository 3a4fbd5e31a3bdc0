"""Dataset-neutral QA records: loading, validation, canonical output.

One record per line: {question_id, question, documents[], gold_answers[],
gold_sentence_ids[[d,s],...]}. Gold sentence ids are bounds-checked with
the shared sentence splitter so they always reference positions that the
answerer and the evaluator will agree on.

Converting a public dataset into this shape is a few lines per source:
a reading-comprehension file with one passage per question maps its
passage to documents[0], and a multi-document file concatenates its
titled paragraphs in order, turning each (title, sentence index) pair
into [document index, sentence index]. Converters stay outside the core.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ParseError, StorageError, ValidationError
from .textutil import split_sentences


@dataclass(frozen=True)
class QARecord:
    question_id: str
    question: str
    documents: tuple[str, ...]
    gold_answers: tuple[str, ...]
    gold_sentence_ids: frozenset[tuple[int, int]] | None = None


def _validate_record(doc: dict, path: str, line: int) -> QARecord:
    for fieldname in ("question_id", "question", "documents", "gold_answers"):
        if fieldname not in doc:
            raise ValidationError(path, line, f"missing field {fieldname!r}")

    qid = doc["question_id"]
    question = doc["question"]
    documents = doc["documents"]
    gold_answers = doc["gold_answers"]

    if not isinstance(qid, str) or not qid.strip():
        raise ValidationError(path, line, "question_id must be a non-empty string")
    if not isinstance(question, str) or not question.strip():
        raise ValidationError(path, line, "question must be a non-empty string")
    if (
        not isinstance(documents, list)
        or not documents
        or not all(isinstance(d, str) and d.strip() for d in documents)
    ):
        raise ValidationError(path, line, "documents must be a non-empty list of non-empty strings")
    if (
        not isinstance(gold_answers, list)
        or not gold_answers
        or not all(isinstance(g, str) and g.strip() for g in gold_answers)
    ):
        raise ValidationError(path, line, "gold_answers must be a non-empty list of non-empty strings")

    ids = None
    if doc.get("gold_sentence_ids") is not None:
        raw = doc["gold_sentence_ids"]
        if not isinstance(raw, list):
            raise ValidationError(path, line, "gold_sentence_ids must be a list of [d, s] pairs")
        sentence_counts = [len(split_sentences(d)) for d in documents]
        pairs = set()
        for pair in raw:
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
            ):
                raise ValidationError(path, line, f"gold_sentence_ids entry {pair!r} is not an [int, int] pair")
            d, s = pair
            if not 0 <= d < len(documents):
                raise ValidationError(
                    path, line, f"gold_sentence_ids references document {d} of {len(documents)}"
                )
            if not 0 <= s < sentence_counts[d]:
                raise ValidationError(
                    path,
                    line,
                    f"gold_sentence_ids references sentence {s} of {sentence_counts[d]} in document {d}",
                )
            pairs.add((d, s))
        ids = frozenset(pairs)

    return QARecord(
        question_id=qid,
        question=question,
        documents=tuple(documents),
        gold_answers=tuple(gold_answers),
        gold_sentence_ids=ids,
    )


def load_records(path: str) -> list[QARecord]:
    """Read and validate a line-delimited corpus file, order preserved."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise StorageError(f"cannot read corpus {path}: {exc}") from exc

    records: list[QARecord] = []
    seen: set[str] = set()
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(path, i, f"invalid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ParseError(path, i, "record is not a JSON object")
        record = _validate_record(doc, path, i)
        if record.question_id in seen:
            raise ValidationError(path, i, f"duplicate question_id {record.question_id!r}")
        seen.add(record.question_id)
        records.append(record)
    return records


def record_to_json(record: QARecord) -> str:
    """Canonical single-line form: sorted keys, explicit sentence id order."""
    doc = {
        "question_id": record.question_id,
        "question": record.question,
        "documents": list(record.documents),
        "gold_answers": list(record.gold_answers),
    }
    if record.gold_sentence_ids is not None:
        doc["gold_sentence_ids"] = [list(p) for p in sorted(record.gold_sentence_ids)]
    return json.dumps(doc, sort_keys=True, ensure_ascii=False)


def save_records(records: list[QARecord], path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(record_to_json(record) + "\n")
    except OSError as exc:
        raise StorageError(f"cannot write corpus {path}: {exc}") from exc
