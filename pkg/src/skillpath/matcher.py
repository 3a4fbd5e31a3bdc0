"""Strategy selection: pick the example whose skill path fits best.

Two signals combine. Coverage rewards touching many distinct skills of
the seven-skill universe. Uniqueness rewards skills that few examples in
the collection use, weighted ln((N+1)/(freq+1)) where freq counts example
membership. The total sums coverage with the uniqueness weight of every
step, so a skill repeated across steps is paid once per occurrence.

Ties are broken toward the lowest index after rounding scores to 12
decimal places, which keeps selection stable across platforms whose float
printing differs in the last bits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .collection import ExampleCollection
from .examplegen import ReasoningStrategy, SimilarExample
from .skills import ReasoningSkill, all_skills

SKILL_UNIVERSE = len(all_skills())
_TIE_DECIMALS = 12


class SelectionMode(Enum):
    FULL = "full"
    COVERAGE_ONLY = "coverage"
    UNIQUENESS_ONLY = "uniqueness"
    RANDOM = "random"


@dataclass(frozen=True)
class ScoreBreakdown:
    coverage: float
    uniqueness_sum: float
    total: float


@dataclass(frozen=True)
class MatchResult:
    selected_index: int
    per_example: tuple[ScoreBreakdown, ...]
    mode: SelectionMode

    def to_record(self) -> dict:
        return {
            "mode": self.mode.value,
            "selected_index": self.selected_index,
            "per_example": [
                {
                    "coverage": b.coverage,
                    "uniqueness_sum": b.uniqueness_sum,
                    "total": b.total,
                }
                for b in self.per_example
            ],
        }


def uniqueness(skill: ReasoningSkill, collection: ExampleCollection) -> float:
    """ln((N+1)/(freq+1)) with freq the skill's example membership count."""
    return math.log((collection.n + 1) / (collection.freq(skill) + 1))


def coverage(
    strategy: ReasoningStrategy,
    required_skills: set[ReasoningSkill] | None = None,
) -> float:
    """Distinct-skill fraction of the seven-skill universe.

    required_skills is experimental: when given, only those skills count
    and the denominator shrinks to the required set's size.
    """
    distinct = set(strategy.skills)
    if required_skills is not None:
        if not required_skills:
            raise ValueError("required_skills must be non-empty when given")
        return len(distinct & required_skills) / len(required_skills)
    return len(distinct) / SKILL_UNIVERSE


def selection_score(
    example: SimilarExample,
    collection: ExampleCollection,
    required_skills: set[ReasoningSkill] | None = None,
) -> ScoreBreakdown:
    """Coverage, summed uniqueness over all steps, and their sum."""
    cov = coverage(example.strategy, required_skills)
    uniq = sum(uniqueness(s, collection) for s in example.strategy.skills)
    return ScoreBreakdown(coverage=cov, uniqueness_sum=uniq, total=cov + uniq)


def select_best(
    collection: ExampleCollection,
    mode: SelectionMode = SelectionMode.FULL,
    seed: int | None = None,
    required_skills: set[ReasoningSkill] | None = None,
) -> MatchResult:
    """Pick one example index under the given mode.

    Full ranks by total, the single-signal modes by their component, and
    Random draws uniformly from a seeded RNG; a missing seed is an error
    because unseeded selection cannot be replayed. Every mode reports the
    full per-example breakdown.
    """
    breakdowns = tuple(
        selection_score(ex, collection, required_skills) for ex in collection.examples
    )
    if mode is SelectionMode.RANDOM:
        if seed is None:
            raise ValueError("random selection requires an explicit seed")
        index = random.Random(seed).randrange(collection.n)
        return MatchResult(index, breakdowns, mode)

    if mode is SelectionMode.FULL:
        key = [b.total for b in breakdowns]
    elif mode is SelectionMode.COVERAGE_ONLY:
        key = [b.coverage for b in breakdowns]
    elif mode is SelectionMode.UNIQUENESS_ONLY:
        key = [b.uniqueness_sum for b in breakdowns]
    else:
        raise ValueError(f"unknown selection mode: {mode!r}")

    best = 0
    best_key = round(key[0], _TIE_DECIMALS)
    for i in range(1, len(key)):
        k = round(key[i], _TIE_DECIMALS)
        if k > best_key:
            best, best_key = i, k
    return MatchResult(best, breakdowns, mode)
