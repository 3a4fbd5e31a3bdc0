"""Guided answering: apply a selected example's skill path to a document.

For each step of the chosen strategy the provider extracts the document
sentences most relevant to that step's skill; the focused segments, the
reasoning path and the worked example then frame one final completion.
The trace keeps everything downstream evaluation needs, including the
full completion text and aggregate token usage across every call.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .collection import ExampleCollection
from .errors import PipelineStageError, SegmentNotInDocument, SkillPathError
from .examplegen import ReasoningStrategy, SimilarExample
from .matcher import MatchResult, SelectionMode, select_best
from .prompts import render_prompt
from .providers import CompletionRequest, Provider, TokenUsage
from .skills import ReasoningSkill
from .textutil import sentence_key, split_sentences

_ANSWER_SPAN = re.compile(r"<answer>(.*?)</answer>", re.DOTALL | re.IGNORECASE)


@dataclass
class AnswerTrace:
    """Everything recorded about one guided answering run."""

    question: str
    focused_segments: list[str]
    prompt: str
    answer: str
    completion: str
    usage: TokenUsage
    latency_ms: float
    selected_example_id: int


class _UsageMeter:
    """Forwards to a provider while summing usage and latency."""

    def __init__(self, inner: Provider):
        self.inner = inner
        self.usage = TokenUsage.zero()
        self.latency_ms = 0.0

    def complete(self, request: CompletionRequest):
        result = self.inner.complete(request)
        self.usage = self.usage + result.usage
        self.latency_ms += result.latency_ms
        return result


def extract_relevant_segment(
    document: str,
    skill: ReasoningSkill,
    provider: Provider,
    *,
    question: str | None = None,
) -> str:
    """Have the provider pick the document sentences serving one skill.

    The reply must consist of sentences present in the document, compared
    casefolded with collapsed whitespace. A reply that fails the check is
    retried once; failing again raises SegmentNotInDocument. The returned
    text is the matching document sentences in the reply's order.
    """
    doc_sentences = split_sentences(document)
    by_key = {sentence_key(s): s for s in doc_sentences}
    question_line = f"\nOriginal question: {question}" if question else ""
    prompt = render_prompt(
        "segment_extraction",
        question_line=question_line,
        skill_name=skill.display_name,
        skill_description=skill.description,
        document=document,
    )
    last_reply = ""
    for _ in range(2):
        last_reply = provider.complete(CompletionRequest(prompt, tag="segment")).text
        picked = _match_sentences(last_reply, by_key)
        if picked is not None:
            return " ".join(picked)
    raise SegmentNotInDocument(
        f"extraction reply is not made of document sentences: {last_reply[:120]!r}"
    )


def _match_sentences(reply: str, by_key: dict[str, str]) -> list[str] | None:
    candidates = split_sentences(reply)
    if not candidates:
        return None
    picked = []
    for c in candidates:
        key = sentence_key(c)
        if key not in by_key:
            return None
        picked.append(by_key[key])
    return picked


def format_prompt(
    question: str,
    focused_segments: list[str],
    strategy: ReasoningStrategy,
    example: SimilarExample,
) -> str:
    """Assemble the final guided-answer prompt."""
    path_lines = [
        f"{i + 1}. {subq} ({skill.canonical})"
        for i, (subq, skill) in enumerate(zip(strategy.subquestions, strategy.skills))
    ]
    demo_lines = [f"Similar question: {example.question}", "Reference notes:"]
    demo_lines.extend(f"- {doc}" for doc in example.reference_docs)
    demo_lines.append(f"Answer: {example.answer}")
    return render_prompt(
        "guided_answer",
        question=question,
        documents="\n".join(focused_segments),
        reasoning_path="\n".join(path_lines),
        skills=", ".join(s.canonical for s in strategy.skills),
        demonstration="\n".join(demo_lines),
    )


def extract_answer_span(completion: str) -> str:
    """The final answer: the last <answer> span, or the whole completion."""
    spans = _ANSWER_SPAN.findall(completion)
    if spans:
        return spans[-1].strip()
    return completion.strip()


def answer(
    question: str,
    document: str,
    collection: ExampleCollection,
    mode: SelectionMode,
    provider: Provider,
    *,
    seed: int | None = None,
    example_index: int | None = None,
) -> AnswerTrace:
    """Run the full guided path for one question against one document.

    example_index bypasses selection for ablations that want an explicit
    example. Errors from selection, extraction or the final call are
    re-raised as PipelineStageError naming the stage that failed.
    """
    meter = _UsageMeter(provider)

    if example_index is not None:
        selected = example_index
    else:
        selected = _staged("select", lambda: select_best(collection, mode, seed).selected_index)
    example = collection.examples[selected]

    segments = []
    for skill in example.strategy.skills:
        segments.append(
            _staged(
                "extract",
                lambda s=skill: extract_relevant_segment(document, s, meter, question=question),
            )
        )

    prompt = _staged(
        "format", lambda: format_prompt(question, segments, example.strategy, example)
    )
    result = _staged(
        "answer", lambda: meter.complete(CompletionRequest(prompt, tag="answer"))
    )
    completion = result.text

    return AnswerTrace(
        question=question,
        focused_segments=segments,
        prompt=prompt,
        answer=extract_answer_span(completion),
        completion=completion,
        usage=meter.usage,
        latency_ms=meter.latency_ms,
        selected_example_id=selected,
    )


def select_for(
    collection: ExampleCollection, mode: SelectionMode, seed: int | None = None
) -> MatchResult:
    """Selection alone, exposed for run logs that record the breakdown."""
    return select_best(collection, mode, seed)


def _staged(stage: str, fn):
    try:
        return fn()
    except PipelineStageError:
        raise
    except (SkillPathError, ValueError) as exc:
        raise PipelineStageError(stage, exc) from exc
