"""Synthetic corpora with rule-derived ground-truth labels.

Each generated user carries a latent quality in [0, 1] that drives follower
counts, engagement, and tweet tone.  Ground truth comes from a linear
threshold rule evaluated on the user's *actual* feature vector (not the
latent), so with zero label noise the classes are exactly separable in
feature space; the rule's default weights touch only ratio-valued features,
which survive clipping and min-max normalization as affine maps.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .dataset import FEATURE_NAMES, FeatureVector
from .records import Corpus, TweetRecord, UserRecord
from .validation import TRUSTWORTHY, UNTRUSTWORTHY

DEFAULT_RULE_WEIGHTS: Mapping[str, float] = {
    "retweet_ratio": 1.0,
    "liked_ratio": 1.0,
    "url_ratio": 0.25,
    "original_content_ratio": 0.75,
    "sentiment_score": 1.0,
    "tweet_credibility": 0.5,
}

_POSITIVE_WORDS = ("good", "great", "excellent", "wonderful", "success", "proud", "hopeful", "progress")
_NEGATIVE_WORDS = ("bad", "terrible", "awful", "disgrace", "corrupt", "failure", "crisis", "shame")
_NEUTRAL_WORDS = ("meeting", "schedule", "update", "briefing", "statement", "session", "agenda", "visit")


def _id_stream(seed: int, user_id: str) -> np.random.Generator:
    digest = hashlib.sha256(user_id.encode("utf-8")).digest()
    return np.random.default_rng(np.random.SeedSequence([seed, int.from_bytes(digest[:8], "big")]))


@dataclass(frozen=True)
class LabelRule:
    """Noisy linear threshold over named raw features."""

    weights: Mapping[str, float]
    threshold: float | None = None
    noise_rate: float = 0.0
    seed: int = 0

    def score(self, raw_by_name: Mapping[str, float]) -> float:
        return sum(w * raw_by_name[name] for name, w in self.weights.items())

    def fires(self, raw_by_name: Mapping[str, float]) -> bool:
        if self.threshold is None:
            raise ValueError("rule threshold is unresolved")
        return self.score(raw_by_name) >= self.threshold

    def label_for(self, user_id: str, raw_by_name: Mapping[str, float]) -> str:
        """Threshold label, flipped with probability ``noise_rate`` per user id."""
        fired = self.fires(raw_by_name)
        if self.noise_rate > 0 and _id_stream(self.seed, user_id).random() < self.noise_rate:
            fired = not fired
        return TRUSTWORTHY if fired else UNTRUSTWORTHY

    def label_vector(self, vector: FeatureVector, names: Sequence[str] = FEATURE_NAMES) -> str:
        return self.label_for(vector.user_id, dict(zip(names, vector.raw)))


def _make_tweet(rng: np.random.Generator, user_id: str, seq: int, quality: float) -> TweetRecord:
    is_repost = rng.random() < 0.15 + 0.55 * (1 - quality)
    retweets = 1 + int(rng.poisson(1 + 9 * quality)) if rng.random() < 0.10 + 0.75 * quality else 0
    likes = 1 + int(rng.poisson(2 + 12 * quality)) if rng.random() < 0.15 + 0.75 * quality else 0
    has_url = rng.random() < 0.10 + 0.45 * quality
    has_hashtag = rng.random() < 0.10 + 0.35 * quality
    has_mention = rng.random() < 0.25

    roll = rng.random()
    if roll < 0.15 + 0.55 * quality:
        word = _POSITIVE_WORDS[rng.integers(len(_POSITIVE_WORDS))]
    elif roll > 0.90 - 0.45 * (1 - quality):
        word = _NEGATIVE_WORDS[rng.integers(len(_NEGATIVE_WORDS))]
    else:
        word = _NEUTRAL_WORDS[rng.integers(len(_NEUTRAL_WORDS))]
    filler = _NEUTRAL_WORDS[rng.integers(len(_NEUTRAL_WORDS))]
    parts = [f"{word} {filler}"]
    if has_hashtag:
        parts.append("#topic")
    if has_mention:
        parts.append("@colleague")
    if has_url:
        parts.append("https://example.org/p")

    return TweetRecord(
        tweet_id=f"{user_id}-t{seq:03d}",
        author_id=user_id,
        text=" ".join(parts),
        retweet_count=retweets,
        like_count=likes,
        is_retweet_of_other=bool(is_repost),
        url_count=1 if has_url else 0,
        hashtag_count=1 if has_hashtag else 0,
        mention_count=1 if has_mention else 0,
    )


def generate_synthetic(
    n_users: int,
    rng_seed: int,
    rule: LabelRule | None = None,
    min_tweets: int = 8,
    max_tweets: int = 40,
) -> tuple[Corpus, dict[str, str], LabelRule]:
    """Sample a corpus and label it; returns (corpus, labels, resolved rule).

    When ``rule`` is None (or carries a None threshold) the default weights
    are used and the threshold resolves to the median rule score over the
    generated users, which keeps the classes roughly balanced.
    """
    from .scoring import score_corpus  # local import to avoid a cycle
    from .dataset import assemble

    rng = np.random.default_rng(rng_seed)
    users: list[UserRecord] = []
    tweets_by_user: dict[str, tuple[TweetRecord, ...]] = {}
    for i in range(n_users):
        user_id = f"synth-{i:06d}"
        quality = rng.random()
        followers = 1 + int(rng.lognormal(3.0 + 3.0 * quality, 1.0))
        friends = 1 + int(rng.lognormal(4.5 - 1.5 * quality, 0.8))
        statuses = 1 + int(rng.lognormal(4.0 + 1.0 * quality, 1.0))
        listed = int(rng.poisson(2 + 20 * quality))
        users.append(
            UserRecord(
                user_id=user_id,
                screen_name=f"synth_user_{i}",
                followers_count=followers,
                friends_count=friends,
                statuses_count=statuses,
                listed_count=listed,
                is_protected=False,
            )
        )
        tweets_by_user[user_id] = tuple(
            _make_tweet(rng, user_id, seq, quality)
            for seq in range(int(rng.integers(min_tweets, max_tweets + 1)))
        )

    corpus = Corpus(users=tuple(users), tweets_by_user=tweets_by_user)
    if n_users == 0:
        resolved = rule or LabelRule(DEFAULT_RULE_WEIGHTS, threshold=0.0)
        return corpus, {}, resolved

    cards = score_corpus(corpus)
    vectors = assemble(cards, users)
    raw_rows = [dict(zip(FEATURE_NAMES, v.raw)) for v in vectors]

    if rule is None:
        rule = LabelRule(DEFAULT_RULE_WEIGHTS)
    if rule.threshold is None:
        scores = sorted(rule.score(row) for row in raw_rows)
        rule = replace(rule, threshold=float(scores[len(scores) // 2]))

    labels = {v.user_id: rule.label_for(v.user_id, row) for v, row in zip(vectors, raw_rows)}
    return corpus, labels, rule
