"""Acceptance gate: each test checks one pinned behavioral guarantee.

Every test here verifies the implementation against an independent
oracle written inline (brute force, closed form, or frozen constant),
never against the implementation's own helpers. A terminal summary hook
in conftest.py prints one PASS/FAIL line per test at the end of a run.
"""
from __future__ import annotations

import json
import math
import random
import re
import time

import pytest

from skillpath.cli import main
from skillpath.collection import build_collection
from skillpath.decompose import decompose_question, render_template
from skillpath.errors import ZeroDenominator
from skillpath.examplegen import CandidateQuestion, ConstructionMode, filter_candidates
from skillpath.matcher import SelectionMode, select_best, selection_score
from skillpath.metrics import (
    EvalRecord,
    TokenStats,
    detect_retrace,
    hits_and_error,
    retrace_rate,
    rouge_l,
)
from skillpath.resources import load_entity_pool
from skillpath.skills import ReasoningSkill
from skillpath.textutil import texts_match

from conftest import make_example

S = ReasoningSkill
ALL_SKILLS = list(S)


# ---------------------------------------------------------- c01: selection

def brute_force_best(skill_sets: list[list[ReasoningSkill]], mode: str) -> int:
    """Argmax over examples, recomputed from the formula definitions."""
    n = len(skill_sets)
    freq = {s: sum(1 for ss in skill_sets if s in set(ss)) for s in ALL_SKILLS}
    totals = []
    for skills in skill_sets:
        cov = len(set(skills)) / 7
        uni = sum(math.log((n + 1) / (freq[s] + 1)) for s in skills)
        totals.append(
            {"full": cov + uni, "coverage": cov, "uniqueness": uni}[mode]
        )
    best = 0
    for i in range(1, n):
        if round(totals[i], 12) > round(totals[best], 12):
            best = i
    return best


def test_c01_selection_matches_brute_force_oracle():
    rng = random.Random(20260101)
    started = time.perf_counter()
    for _ in range(1000):
        n = rng.randint(1, 50)
        skill_sets = [
            [rng.choice(ALL_SKILLS) for _ in range(rng.randint(1, 10))]
            for _ in range(n)
        ]
        collection = build_collection([make_example(ss) for ss in skill_sets])
        for mode, name in (
            (SelectionMode.FULL, "full"),
            (SelectionMode.COVERAGE_ONLY, "coverage"),
            (SelectionMode.UNIQUENESS_ONLY, "uniqueness"),
        ):
            got = select_best(collection, mode).selected_index
            want = brute_force_best(skill_sets, name)
            assert got == want, f"mode {name}: picked {got}, oracle says {want}"
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"1000 collections took {elapsed:.2f}s"


# ------------------------------------------------- c02: scoring closed forms

def test_c02_selection_closed_forms_and_worked_totals():
    # uniqueness: a skill in 4 of 19 examples scores ln((19 + 1) / (4 + 1))
    examples = [make_example([S.DEDUCTIVE]) for _ in range(4)]
    examples += [make_example([S.INDUCTIVE]) for _ in range(15)]
    nineteen = build_collection(examples)
    got = selection_score(examples[0], nineteen).uniqueness_sum
    assert got == pytest.approx(math.log(4.0), abs=1e-9)

    # coverage: two distinct skills out of the seven-skill taxonomy
    pair = make_example([S.DEDUCTIVE, S.ANALOGICAL])
    cov = selection_score(pair, build_collection([pair])).coverage
    assert cov == pytest.approx(2 / 7, abs=1e-12)

    # worked three-example collection, totals frozen from exact arithmetic:
    #   ln(4/3)/1 terms for [Ded], [Ded, Ana], [Ind, Ind]
    worked = build_collection(
        [
            make_example([S.DEDUCTIVE]),
            make_example([S.DEDUCTIVE, S.ANALOGICAL]),
            make_example([S.INDUCTIVE, S.INDUCTIVE]),
        ]
    )
    frozen = [0.430539215309, 1.266543538726, 1.529151503977]
    for example, want in zip(worked.examples, frozen):
        total = selection_score(example, worked).total
        assert total == pytest.approx(want, abs=1e-6)
    assert select_best(worked, SelectionMode.FULL).selected_index == 2


# ------------------------------------------------------------- c03: ROUGE-L

def _oracle_tokens(text: str) -> list[str]:
    return re.findall(r"[a-z0-9]+", text.lower())


def _oracle_rouge(candidate: str, reference: str) -> float:
    a, b = _oracle_tokens(candidate), _oracle_tokens(reference)
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a)):
        for j in range(len(b)):
            if a[i] == b[j]:
                table[i + 1][j + 1] = table[i][j] + 1
            else:
                table[i + 1][j + 1] = max(table[i][j + 1], table[i + 1][j])
    lcs = table[len(a)][len(b)]
    if lcs == 0:
        return 0.0
    precision = lcs / len(a)
    recall = lcs / len(b)
    return 2 * precision * recall / (precision + recall)


def test_c03_rouge_l_matches_independent_dp():
    assert rouge_l("the tower is tall", "the tower is tall") == pytest.approx(1.0, abs=1e-12)
    assert rouge_l("alpha beta", "gamma delta") == pytest.approx(0.0, abs=1e-12)
    assert rouge_l(
        "the tower was completed quite recently",
        "the tower was completed in 1889 in paris",
    ) == pytest.approx(0.571429, abs=1e-6)

    vocab = "the a tower bridge tall old was is in paris 1889 stands".split()
    rng = random.Random(20260103)
    for _ in range(200):
        candidate = " ".join(rng.choice(vocab) for _ in range(rng.randint(0, 15)))
        reference = " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 15)))
        assert rouge_l(candidate, reference) == pytest.approx(
            _oracle_rouge(candidate, reference), abs=1e-12
        ), f"candidate {candidate!r} vs reference {reference!r}"


# ------------------------------------------------------ c04: hits and error

UNIVERSE = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]


def subsets(items):
    out = [set()]
    for item in items:
        out += [s | {item} for s in out]
    return out


def oracle_hits_error(pairs):
    hit = sum(1 for p, g in pairs if p >= g)
    notsub = sum(1 for p, g in pairs if not p <= g)
    hits = hit / len(pairs)
    error = None if hit + notsub == 0 else notsub / (hit + notsub)
    return hits, error


def test_c04_hits_and_error_exhaustive_subsets():
    all_sets = subsets(UNIVERSE)
    assert len(all_sets) == 32
    for p in all_sets:
        for g in all_sets:
            record = EvalRecord("q", "x", ["x"], cited_sentences=set(p), gold_sentences=set(g))
            got = hits_and_error([record])
            want_hits, want_error = oracle_hits_error([(p, g)])
            assert got.hits == pytest.approx(want_hits, abs=1e-12)
            if want_error is None:
                assert got.error is None, f"P={sorted(p)} G={sorted(g)}: want undefined"
            else:
                assert got.error == pytest.approx(want_error, abs=1e-12)

    # batches: aggregate rates agree with the enumerating oracle
    rng = random.Random(20260104)
    for _ in range(200):
        pairs = [
            (set(rng.sample(UNIVERSE, rng.randint(0, 5))),
             set(rng.sample(UNIVERSE, rng.randint(0, 5))))
            for _ in range(rng.randint(1, 8))
        ]
        records = [
            EvalRecord(f"q{i}", "x", ["x"], cited_sentences=p, gold_sentences=g)
            for i, (p, g) in enumerate(pairs)
        ]
        got = hits_and_error(records)
        want_hits, want_error = oracle_hits_error(pairs)
        assert got.hits == pytest.approx(want_hits, abs=1e-12)
        assert (got.error is None) == (want_error is None)
        if want_error is not None:
            assert got.error == pytest.approx(want_error, abs=1e-12)

    # a proper-subset citation leaves the rate undefined, never zero
    only = [EvalRecord("q", "x", ["x"], cited_sentences={(0, 0)}, gold_sentences={(0, 0), (0, 1)})]
    assert hits_and_error(only).error is None
    with pytest.raises(ZeroDenominator) as info:
        hits_and_error(only, strict=True)
    assert info.value.hits == 0.0


# ------------------------------------------------------------- c05: retrace

CUES = ["sorry", "actually", "let me rethink", "wait"]


def test_c05_retrace_detection_patterns():
    positives = [
        "<answer>Paris</answer> hmm <answer>Lyon</answer>",
        "<answer>Paris</answer> confirmed again <answer>Paris</answer>",
        "So the answer is Paris. Wait, that is wrong. The answer is Lyon.",
        "The answer is 1889. Sorry, I misread the table. The answer is 1931.",
        "Final answer: seven. Actually, let me rethink. Final answer: nine.",
    ]
    for text in positives:
        assert detect_retrace(text, CUES) is True, text

    negatives = [
        "Reasoning first. <answer>Paris</answer>",
        "The answer is Paris. Actually, yes, the answer is Paris.",
        "The answer is Paris. We await the result. The answer is Lyon.",
        "The answer is Paris. On reflection the answer is Lyon.",
        "No stated conclusion at all, only narration.",
    ]
    for text in negatives:
        assert detect_retrace(text, CUES) is False, text

    rng = random.Random(20260105)
    clean = [
        f"Step one checks row {rng.randint(1, 99)}. "
        f"Step two checks column {rng.randint(1, 99)}. "
        f"The answer is {rng.randint(1, 99)}."
        for _ in range(50)
    ]
    for text in clean:
        assert detect_retrace(text, CUES) is False, text

    records = [EvalRecord(f"p{i}", "x", ["x"], chain_text=t) for i, t in enumerate(positives)]
    records += [EvalRecord(f"n{i}", "x", ["x"], chain_text=t) for i, t in enumerate(clean)]
    want = len(positives) / (len(positives) + len(clean))
    assert retrace_rate(records, CUES) == pytest.approx(want, abs=1e-12)


# ----------------------------------------------------- c06: token reduction

def test_c06_token_reduction_percentages():
    first = TokenStats(token_mean=1469.24, time_mean_ms=0.0).reduction_vs(1723.83) * 100
    second = TokenStats(token_mean=1547.22, time_mean_ms=0.0).reduction_vs(2068.34) * 100
    assert first == pytest.approx(14.768858, abs=1e-4)
    assert second == pytest.approx(25.195084, abs=1e-4)
    assert abs(first - 14.8) <= 0.05
    assert abs(second - 25.2) <= 0.05


# ------------------------------------------- c07: end-to-end replay pipeline

def test_c07_replay_pipeline_byte_determinism(tmp_path, fixtures_dir):
    corpus = f"{fixtures_dir}/corpus.jsonl"
    bundle = f"{fixtures_dir}/collection.json"
    transcript = f"{fixtures_dir}/transcript.jsonl"

    started = time.perf_counter()
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        out.mkdir()
        run_log = str(out / "run.jsonl")
        report = str(out / "report.json")
        code = main(
            ["answer", "--provider", "replay", "--transcript", transcript,
             "--corpus", corpus, "--collection", bundle, "--run-log", run_log]
        )
        assert code == 0
        code = main(["eval", "--corpus", corpus, "--run-log", run_log, "--report", report])
        assert code == 0
        outputs.append(out)
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0, f"two replay runs took {elapsed:.2f}s"

    for name in ("run.jsonl", "report.json", "report.json.records.tsv"):
        first = (outputs[0] / name).read_bytes()
        second = (outputs[1] / name).read_bytes()
        assert first == second, f"{name} differs between identical replay runs"

    report = json.loads((outputs[0] / "report.json").read_text(encoding="utf-8"))
    assert report["n"] == 2
    assert report["rouge_l_mean"] == pytest.approx(1.0, abs=1e-12)
    assert report["em_mean"] == pytest.approx(1.0, abs=1e-12)
    assert report["hits"] == pytest.approx(1.0, abs=1e-12)
    assert report["error"] == pytest.approx(0.0, abs=1e-12)
    assert report["retrace_rate"] == pytest.approx(0.0, abs=1e-12)


# ------------------------------------------- c08: decomposition round trips

PATTERNS = [
    "Which is {adj}, the {place} or the {place}?",
    "Who founded the {organization}?",
    "When did {person} first use the {object}?",
    "Was the {object} invented in {date}?",
    "Did {person} visit the {place} in {date}?",
    "Is {number} {adj} than {number}?",
    "Was {person} born in {place}?",
]


def test_c08_decomposition_round_trip():
    template = decompose_question("Which is taller, the Eiffel Tower or the Empire State Building?")
    assert template.template_text == "Which is [adj], [place 1] or [place 2]?"
    rebuilt = render_template(template, template.original_substitutions())
    assert rebuilt == template.original

    pool = load_entity_pool()
    rng = random.Random(20260108)
    checked = 0
    for _ in range(100):
        pattern = rng.choice(PATTERNS)
        question = re.sub(
            r"\{(\w+)\}", lambda m: rng.choice(pool[m.group(1)]), pattern
        )
        t = decompose_question(question)
        assert t.placeholders, f"no entities found in {question!r}"
        round_tripped = render_template(t, t.original_substitutions())
        assert texts_match(round_tripped, question), (
            f"{question!r} -> {t.template_text!r} -> {round_tripped!r}"
        )
        checked += 1
    assert checked == 100


# -------------------------------------------- c09: similarity filter sweep

def test_c09_similarity_filter_monotone():
    rng = random.Random(20260109)
    for _ in range(100):
        scored = [
            CandidateQuestion(f"q{i}", ConstructionMode.RANDOM_FILL, rng.randint(1, 10))
            for i in range(rng.randint(1, 30))
        ]
        previous = len(scored)
        assert len(filter_candidates(scored, 1)) == len(scored)
        for delta in range(1, 11):
            kept = filter_candidates(scored, delta)
            assert all(c.similarity_score >= delta for c in kept)
            assert len(kept) <= previous, f"delta {delta} grew the kept set"
            previous = len(kept)
