"""Synthesis of similar worked examples for a question template.

Candidates come from one of three construction modes: random pool fills,
provider-guided fills, or free-form template variations. Survivors of the
similarity filter get a reasoning strategy (typed steps plus an answer
from the same reply) and one short reference document per step, forming a
SimilarExample ready for collection into a Γ.
"""

from __future__ import annotations

import dataclasses
import logging
import random
import re
from dataclasses import dataclass
from enum import Enum

from .decompose import EntityTagger, QuestionTemplate, classify_tokens, render_template
from .errors import (
    EmptyAnswer,
    LengthMismatch,
    ProviderError,
    UnknownSkill,
    UnparseableScore,
    UnparseableStrategy,
)
from .prompts import render_prompt
from .providers import CompletionRequest, Provider
from .resources import load_entity_pool
from .skills import ReasoningSkill, parse_skill, skill_catalog
from .textutil import normalize_ws, squeeze_punct

log = logging.getLogger(__name__)

SIMILARITY_MIN = 1
SIMILARITY_MAX = 10


class ConstructionMode(Enum):
    RANDOM_FILL = "random_fill"
    GUIDED_FILL = "guided_fill"
    TEMPLATE_VARIATION = "template_variation"


@dataclass(frozen=True)
class CandidateQuestion:
    text: str
    mode: ConstructionMode
    similarity_score: int | None = None


@dataclass(frozen=True)
class ReasoningStrategy:
    """Ordered subquestions with one reasoning skill per step."""

    subquestions: tuple[str, ...]
    skills: tuple[ReasoningSkill, ...]

    def __post_init__(self):
        object.__setattr__(self, "subquestions", tuple(self.subquestions))
        object.__setattr__(self, "skills", tuple(self.skills))
        if not self.skills:
            raise ValueError("a strategy needs at least one step")
        if len(self.subquestions) != len(self.skills):
            raise LengthMismatch(
                f"{len(self.subquestions)} subquestions vs {len(self.skills)} skills"
            )
        for s in self.skills:
            if not isinstance(s, ReasoningSkill):
                raise ValueError(f"not a taxonomy member: {s!r}")

    def __len__(self) -> int:
        return len(self.skills)


@dataclass(frozen=True)
class SimilarExample:
    question: str
    strategy: ReasoningStrategy
    reference_docs: tuple[str, ...]
    answer: str
    construction_mode: ConstructionMode

    def __post_init__(self):
        object.__setattr__(self, "reference_docs", tuple(self.reference_docs))
        if not self.question.strip():
            raise ValueError("example question is empty")
        if len(self.reference_docs) != len(self.strategy.subquestions):
            raise LengthMismatch(
                f"{len(self.reference_docs)} reference docs vs "
                f"{len(self.strategy.subquestions)} subquestions"
            )
        if not self.answer.strip():
            raise EmptyAnswer("example has no answer text")


_NUMBERED = re.compile(r"^\s*(\d+)[.)]\s*(.*\S)\s*$")
_STEP_WITH_SKILL = re.compile(r"^(?P<body>.*\S)\s*\((?P<skill>[^()]+)\)\s*[.:]?$")
_GENERATED_ANSWER = re.compile(r"Generated Answer:\s*(.*)", re.IGNORECASE)
_INT = re.compile(r"\d+")


def generate_candidates(
    template: QuestionTemplate,
    mode: ConstructionMode,
    count: int,
    provider: Provider | None = None,
    rng: random.Random | None = None,
    pool: dict[str, list[str]] | None = None,
) -> list[CandidateQuestion]:
    """Produce up to `count` new questions from a template.

    random_fill draws replacement entities from the bundled pool with a
    seeded RNG and needs no provider. The other two modes ask the provider
    for fills or variations. Duplicates (whitespace and punctuation
    insensitive) are removed before anything gets scored.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if mode is ConstructionMode.RANDOM_FILL:
        texts = _random_fill(template, count, rng or random.Random(0), pool)
    elif mode is ConstructionMode.GUIDED_FILL:
        texts = _guided_fill(template, count, _require_provider(provider, mode))
    else:
        texts = _template_variation(template, count, _require_provider(provider, mode))

    seen: set[str] = set()
    out: list[CandidateQuestion] = []
    for text in texts:
        key = squeeze_punct(text).casefold()
        if key and key not in seen:
            seen.add(key)
            out.append(CandidateQuestion(text=text, mode=mode))
    return out


def _require_provider(provider: Provider | None, mode: ConstructionMode) -> Provider:
    if provider is None:
        raise ValueError(f"mode {mode.value} requires a provider")
    return provider


def _random_fill(
    template: QuestionTemplate,
    count: int,
    rng: random.Random,
    pool: dict[str, list[str]] | None,
) -> list[str]:
    pool = pool if pool is not None else load_entity_pool()
    texts = []
    for _ in range(count):
        fills: dict[str, str] = {}
        for p in template.placeholders:
            options = [e for e in pool.get(p.entity_type, []) if e != p.entity_text]
            # no alternative of this type in the pool: keep the original
            entity = rng.choice(options) if options else p.entity_text
            fills[p.slot] = f"{p.article} {entity}" if p.article else entity
        texts.append(render_template(template, fills))
    return texts


def _slot_lines(template: QuestionTemplate) -> str:
    lines = []
    for p in template.placeholders:
        lines.append(f"- slot {p.slot} (type {p.entity_type}), currently: {p.entity_text}")
    return "\n".join(lines)


def _guided_fill(template: QuestionTemplate, count: int, provider: Provider) -> list[str]:
    prompt = render_prompt(
        "entity_substitution",
        template_text=template.template_text,
        slot_lines=_slot_lines(template),
        count=str(count),
    )
    reply = provider.complete(CompletionRequest(prompt, tag="substitution")).text
    slot_names = {p.slot for p in template.placeholders}
    articles = {p.slot: p.article for p in template.placeholders}
    texts = []
    for line in reply.splitlines():
        m = _NUMBERED.match(line)
        if not m:
            continue
        fills: dict[str, str] = {}
        for part in m.group(2).split(";"):
            if "=" not in part:
                continue
            key, _, value = part.partition("=")
            key = normalize_ws(key)
            value = value.strip()
            if key in slot_names and value:
                fills[key] = f"{articles[key]} {value}" if articles[key] else value
        if set(fills) == slot_names:
            texts.append(render_template(template, fills))
        else:
            log.debug("dropping malformed fill line: %r", line)
    return texts


def _template_variation(template: QuestionTemplate, count: int, provider: Provider) -> list[str]:
    prompt = render_prompt(
        "template_variation",
        question=template.original,
        template_text=template.template_text,
        count=str(count),
    )
    reply = provider.complete(CompletionRequest(prompt, tag="variation")).text
    texts = []
    for line in reply.splitlines():
        m = _NUMBERED.match(line)
        if m:
            texts.append(m.group(2).strip().strip('"'))
    return texts


def score_similarity(original: str, candidate: str, provider: Provider) -> int:
    """Ask the provider how similar a candidate is, on the 1 to 10 scale.

    The score is read as the last integer in the reply, which tolerates a
    leading explanation. A reply with no integer, or one outside the
    scale, raises UnparseableScore.
    """
    prompt = render_prompt(
        "similarity_scoring",
        original_question=original,
        candidate_question=candidate,
    )
    reply = provider.complete(CompletionRequest(prompt, tag="similarity")).text
    numbers = _INT.findall(reply)
    if not numbers:
        raise UnparseableScore(f"no integer score in reply: {reply[:120]!r}")
    score = int(numbers[-1])
    if not SIMILARITY_MIN <= score <= SIMILARITY_MAX:
        raise UnparseableScore(f"score {score} outside [1, 10]")
    return score


def score_candidates(
    original: str, candidates: list[CandidateQuestion], provider: Provider
) -> list[CandidateQuestion]:
    """Attach a similarity score to each candidate."""
    return [
        dataclasses.replace(c, similarity_score=score_similarity(original, c.text, provider))
        for c in candidates
    ]


def filter_candidates(candidates: list[CandidateQuestion], delta: int) -> list[CandidateQuestion]:
    """Keep candidates whose score meets the threshold, order preserved.

    The comparison is score >= delta. Unscored candidates are a caller
    bug and raise ValueError.
    """
    if not SIMILARITY_MIN <= delta <= SIMILARITY_MAX:
        raise ValueError(f"delta must lie in [1, 10], got {delta}")
    for c in candidates:
        if c.similarity_score is None:
            raise ValueError(f"candidate not scored: {c.text!r}")
    return [c for c in candidates if c.similarity_score >= delta]


def build_strategy(question: str, provider: Provider) -> tuple[ReasoningStrategy, str]:
    """Generate a reasoning strategy and an answer for a question.

    One provider call returns numbered steps, each ending in a
    parenthesized skill label, followed by a Generated Answer line. A
    numbered step without a recognizable skill makes the whole reply
    UnparseableStrategy; stray prose around the steps is ignored.
    """
    prompt = render_prompt(
        "strategy_generation",
        skill_catalog=skill_catalog(),
        question=question,
    )
    reply = provider.complete(CompletionRequest(prompt, tag="strategy")).text
    return parse_strategy_reply(reply)


def parse_strategy_reply(reply: str) -> tuple[ReasoningStrategy, str]:
    subquestions: list[str] = []
    skills: list[ReasoningSkill] = []
    answer = ""
    m = _GENERATED_ANSWER.search(reply)
    if m:
        answer = m.group(1).strip().strip('"').strip()
    step_region = reply[: m.start()] if m else reply
    for line in step_region.splitlines():
        numbered = _NUMBERED.match(line)
        if not numbered:
            continue
        with_skill = _STEP_WITH_SKILL.match(numbered.group(2))
        if not with_skill:
            raise UnparseableStrategy(f"step {numbered.group(1)} names no skill: {line.strip()!r}")
        try:
            skill = parse_skill(with_skill.group("skill"))
        except UnknownSkill as exc:
            raise UnparseableStrategy(f"step {numbered.group(1)}: {exc}") from exc
        subquestions.append(with_skill.group("body").strip())
        skills.append(skill)
    if not skills:
        raise UnparseableStrategy("reply contains no numbered steps")
    return ReasoningStrategy(tuple(subquestions), tuple(skills)), answer


def build_reference_docs(strategy: ReasoningStrategy, provider: Provider) -> list[str]:
    """One short reference passage per strategy step."""
    docs = []
    for subq in strategy.subquestions:
        prompt = render_prompt("reference_document", subquestion=subq)
        text = provider.complete(CompletionRequest(prompt, tag="reference")).text.strip()
        if not text:
            raise ProviderError(f"empty reference document for step {subq!r}")
        docs.append(text)
    return docs


def assemble_example(
    question: str,
    strategy: ReasoningStrategy,
    reference_docs: list[str],
    answer: str,
    mode: ConstructionMode,
) -> SimilarExample:
    """Validate the parts and build the SimilarExample."""
    return SimilarExample(
        question=question,
        strategy=strategy,
        reference_docs=tuple(reference_docs),
        answer=answer,
        construction_mode=mode,
    )


def synthesize_example(
    question: str, provider: Provider, mode: ConstructionMode
) -> SimilarExample:
    """Strategy, reference docs and assembly for one candidate question."""
    strategy, answer = build_strategy(question, provider)
    docs = build_reference_docs(strategy, provider)
    return assemble_example(question, strategy, docs, answer, mode)


def anonymize_example(example: SimilarExample, tagger: EntityTagger | None = None) -> SimilarExample:
    """Replace concrete entities with typed placeholders across an example.

    Entities are found in the example's question; each becomes an
    uppercase bracketed placeholder named by its type, with letter
    suffixes only when a type binds more than one distinct entity. A
    leading article disappears into the placeholder, and the mapping is
    applied to the question, every subquestion, every reference doc and
    the answer.
    """
    tokens = classify_tokens(example.question, tagger)
    entities: list[tuple[str, str]] = []
    seen: set[str] = set()
    for t in tokens:
        if t.entity_type is not None and t.text.casefold() not in seen:
            seen.add(t.text.casefold())
            entities.append((t.text, t.entity_type))

    per_type: dict[str, int] = {}
    for _, etype in entities:
        per_type[etype] = per_type.get(etype, 0) + 1

    letters: dict[str, int] = {}
    mapping: list[tuple[str, str]] = []
    for text, etype in entities:
        base = etype.upper().replace(" ", "_")
        if per_type[etype] > 1:
            idx = letters.get(etype, 0)
            letters[etype] = idx + 1
            placeholder = f"[{base}_{chr(ord('A') + idx)}]"
        else:
            placeholder = f"[{base}]"
        mapping.append((text, placeholder))

    mapping.sort(key=lambda pair: len(pair[0]), reverse=True)

    def scrub(text: str) -> str:
        for entity, placeholder in mapping:
            pattern = re.compile(
                r"(?:\b(?:the|a|an)\s+)?" + re.escape(entity) + r"\b", re.IGNORECASE
            )
            text = pattern.sub(placeholder, text)
        return text

    return SimilarExample(
        question=scrub(example.question),
        strategy=ReasoningStrategy(
            tuple(scrub(s) for s in example.strategy.subquestions),
            example.strategy.skills,
        ),
        reference_docs=tuple(scrub(d) for d in example.reference_docs),
        answer=scrub(example.answer),
        construction_mode=example.construction_mode,
    )
