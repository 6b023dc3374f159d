"""Lexicon-based polarity scoring and the per-user sentiment score.

A tweet's polarity is the mean weight of lexicon tokens found in it, with a
single-token negation lookahead ("not good" scores as negated "good").  Tweets
classify as positive/neutral/negative by the sign of their polarity, and the
per-user sentiment score is the non-negative fraction:
(neutral + positive) / (neutral + positive + negative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import IO, Iterable, Mapping, Sequence, Union

from .errors import LexiconError
from .records import TweetRecord

POSITIVE = "positive"
NEUTRAL = "neutral"
NEGATIVE = "negative"

# alphanumeric runs; underscores and punctuation act as separators
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class Lexicon:
    """Token polarity weights in [-1, 1] plus sign-flipping negator tokens."""

    entries: Mapping[str, float]
    negators: frozenset[str]

    def __post_init__(self):
        for token, weight in self.entries.items():
            if token != token.lower():
                raise LexiconError(f"lexicon token {token!r} must be lowercase")
            if not -1.0 <= weight <= 1.0:
                raise LexiconError(f"weight for {token!r} out of [-1, 1]: {weight}")
        overlap = self.negators & set(self.entries)
        if overlap:
            raise LexiconError(f"negators overlap scored entries: {sorted(overlap)}")


@dataclass(frozen=True)
class SentimentCounts:
    positive: int
    neutral: int
    negative: int

    @property
    def total(self) -> int:
        return self.positive + self.neutral + self.negative


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric tokens; everything else is a separator."""
    return _TOKEN_RE.findall(text.lower())


def polarity(text: str, lexicon: Lexicon) -> float:
    """Mean weight of matched tokens, each negated after a negator; 0 if none match."""
    tokens = tokenize(text)
    matched = []
    for i, token in enumerate(tokens):
        weight = lexicon.entries.get(token)
        if weight is None:
            continue
        if i > 0 and tokens[i - 1] in lexicon.negators:
            weight = -weight
        matched.append(weight)
    if not matched:
        return 0.0
    return sum(matched) / len(matched)


def classify_tweet(text: str, lexicon: Lexicon) -> str:
    p = polarity(text, lexicon)
    if p > 0:
        return POSITIVE
    if p < 0:
        return NEGATIVE
    return NEUTRAL


def sentiment_counts(tweets: Iterable[TweetRecord], lexicon: Lexicon) -> SentimentCounts:
    tally = {POSITIVE: 0, NEUTRAL: 0, NEGATIVE: 0}
    for tweet in tweets:
        tally[classify_tweet(tweet.text, lexicon)] += 1
    return SentimentCounts(tally[POSITIVE], tally[NEUTRAL], tally[NEGATIVE])


def sentiment_score(counts: SentimentCounts) -> float:
    """Non-negative tweet fraction; 1.0 for users with no tweets at all."""
    if counts.total == 0:
        return 1.0
    return (counts.neutral + counts.positive) / counts.total


def parse_lexicon(source: Union[IO[str], Iterable[str], str]) -> Lexicon:
    """Parse the lexicon file format: ``token weight`` per line, ``! token`` for negators."""
    if isinstance(source, str):
        source = source.splitlines()
    entries: dict[str, float] = {}
    negators: set[str] = set()
    for line_no, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("!"):
            token = line[1:].strip().lower()
            if not token:
                raise LexiconError(f"line {line_no}: empty negator declaration")
            negators.add(token)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LexiconError(f"line {line_no}: expected 'token weight', got {line!r}")
        token, weight_text = parts
        try:
            weight = float(weight_text)
        except ValueError:
            raise LexiconError(f"line {line_no}: bad weight {weight_text!r}") from None
        entries[token.lower()] = weight
    return Lexicon(entries=entries, negators=frozenset(negators))


def load_lexicon(path) -> Lexicon:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_lexicon(fh)


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    """The built-in hand-picked lexicon shipped with the package."""
    text = resources.files("trustbench.data").joinpath("default_lexicon.txt").read_text("utf-8")
    return parse_lexicon(text)
