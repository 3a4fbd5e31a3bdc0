from __future__ import annotations

from skillpath.textutil import (
    detokenize,
    norm_tokens,
    normalize_answer,
    sentence_key,
    split_sentences,
    squeeze_punct,
    texts_match,
    tokenize,
)


def test_tokenize_detaches_edge_punctuation():
    assert tokenize("Which is taller, the Eiffel Tower?") == [
        "Which", "is", "taller", ",", "the", "Eiffel", "Tower", "?",
    ]


def test_tokenize_keeps_internal_apostrophes_and_hyphens():
    assert tokenize("don't use a well-known trick.") == [
        "don't", "use", "a", "well-known", "trick", ".",
    ]


def test_detokenize_round_trip():
    text = "Which is taller, the Eiffel Tower or the Empire State Building?"
    assert detokenize(tokenize(text)) == text


def test_split_sentences_on_terminators_and_newlines():
    text = "First fact here. Second fact follows!\nThird on a new line."
    assert split_sentences(text) == [
        "First fact here.",
        "Second fact follows!",
        "Third on a new line.",
    ]


def test_split_sentences_ignores_blank_lines():
    assert split_sentences("One.\n\n\nTwo.") == ["One.", "Two."]


def test_norm_tokens_strips_punct_and_lowercases():
    assert norm_tokens("The World's Fair, 1889!") == ["the", "world", "s", "fair", "1889"]


def test_normalize_answer():
    assert normalize_answer("  The Paris.  ") == "paris"
    assert normalize_answer("a dog") == "dog"
    assert normalize_answer("1889") == "1889"


def test_sentence_key_collapses_case_and_spacing():
    assert sentence_key("The  Tower\tstands.") == sentence_key("the tower stands.")


def test_squeeze_punct_and_texts_match():
    assert squeeze_punct("Which is taller , the tower ?") == "Which is taller, the tower?"
    assert texts_match("A, b?", "A , b ?")
    assert not texts_match("A, b?", "A, c?")
