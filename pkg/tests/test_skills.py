from __future__ import annotations

import pytest

from skillpath.errors import UnknownSkill
from skillpath.skills import ReasoningSkill, all_skills, parse_skill, skill_catalog


def test_taxonomy_has_seven_skills_in_fixed_order():
    skills = all_skills()
    assert len(skills) == 7
    assert [s.canonical for s in skills] == [
        "deductive",
        "inductive",
        "abductive",
        "cause & effect",
        "analogical",
        "critical thinking",
        "decompositional",
    ]


def test_parse_accepts_canonical_names():
    for s in all_skills():
        assert parse_skill(s.canonical) is s
        assert parse_skill(s.display_name) is s


def test_parse_tolerates_case_punctuation_and_aliases():
    assert parse_skill("Deduction") is ReasoningSkill.DEDUCTIVE
    assert parse_skill("cause and effect") is ReasoningSkill.CAUSE_EFFECT
    assert parse_skill("Cause & Effect.") is ReasoningSkill.CAUSE_EFFECT
    assert parse_skill("  analogical reasoning ") is ReasoningSkill.ANALOGICAL
    assert parse_skill("decomposition") is ReasoningSkill.DECOMPOSITIONAL
    assert parse_skill("Critical Thinking") is ReasoningSkill.CRITICAL_THINKING


def test_parse_rejects_unknown_labels():
    with pytest.raises(UnknownSkill):
        parse_skill("wishful thinking")
    with pytest.raises(UnknownSkill):
        parse_skill("")


def test_catalog_lists_every_skill_with_description_and_example():
    text = skill_catalog()
    for s in all_skills():
        assert s.display_name in text
        assert s.description in text
    assert text.count("Example:") == 7
