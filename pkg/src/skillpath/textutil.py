"""Shared text helpers: tokenization, sentence splitting, normalization.

Sentence splitting lives here on purpose. The answerer checks extraction
replies against document sentences, the corpus loader bounds-checks gold
sentence ids, and the evaluator attributes citations; all three must see
the same sentence boundaries or the ids stop lining up.
"""

from __future__ import annotations

import re

# punctuation detached into standalone tokens at word edges
_PUNCT = set(",.?!;:\"()[]{}")

_WS = re.compile(r"\s+")
_WORD = re.compile(r"[a-z0-9]+")
# boundary after ., ? or ! (plus closing quotes/brackets) before a capital or digit
_SENT_BOUNDARY = re.compile(r"(?<=[.?!])[\)\"\']*\s+(?=[\"\'(]?[A-Z0-9])")

ARTICLES = ("a", "an", "the")


def tokenize(text: str) -> list[str]:
    """Split text on whitespace, detaching edge punctuation as its own tokens.

    Internal apostrophes and hyphens stay inside the word, so "don't" and
    "well-known" are single tokens while "Paris," becomes ["Paris", ","].
    """
    tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        tail: list[str] = []
        while chunk and chunk[0] in _PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def detokenize(tokens: list[str]) -> str:
    """Join tokens back into text with conventional punctuation spacing."""
    out: list[str] = []
    for tok in tokens:
        if out and tok in {",", ".", "?", "!", ";", ":", ")", "]", "}"}:
            out[-1] = out[-1] + tok
        elif out and out[-1] and out[-1][-1] in "([{":
            out[-1] = out[-1] + tok
        else:
            out.append(tok)
    return " ".join(out)


def split_sentences(text: str) -> list[str]:
    """Split text into sentences with a deterministic rule-based boundary.

    Blank-line and newline breaks always separate sentences; within a line a
    sentence ends at ., ? or ! followed by whitespace and a capital or digit.
    """
    sentences: list[str] = []
    for line in re.split(r"\n+", text):
        for part in _SENT_BOUNDARY.split(line):
            part = part.strip()
            if part:
                sentences.append(part)
    return sentences


def norm_tokens(text: str) -> list[str]:
    """Lowercase word tokens with punctuation stripped, for overlap metrics."""
    return _WORD.findall(text.lower())


def normalize_ws(text: str) -> str:
    return _WS.sub(" ", text).strip()


def sentence_key(text: str) -> str:
    """Casefolded, whitespace-collapsed form used for sentence matching."""
    return normalize_ws(text.casefold())


def squeeze_punct(text: str) -> str:
    """Whitespace-insensitive canonical form for round-trip comparison.

    Collapses whitespace and deletes spaces adjacent to punctuation so that
    detokenizer output compares equal to the original surface string.
    """
    text = normalize_ws(text)
    text = re.sub(r"\s*([,.?!;:)\]}])", r"\1", text)
    text = re.sub(r"([(\[{])\s*", r"\1", text)
    text = re.sub(r"\s*\"\s*", '"', text)
    return text


def texts_match(a: str, b: str) -> bool:
    """True when two strings are equal up to whitespace around punctuation."""
    return squeeze_punct(a) == squeeze_punct(b)


def normalize_answer(text: str) -> str:
    """Normalization applied to both sides of an exact-match comparison.

    Lowercases, trims, strips terminal punctuation, drops article tokens
    and collapses whitespace runs.
    """
    t = text.strip().lower()
    t = t.rstrip(".?!,;:")
    words = [w for w in t.split() if w not in ARTICLES]
    return " ".join(words)


def count_ws_tokens(text: str) -> int:
    """Whitespace token count, the accounting rule for mock completions."""
    return len(text.split())
