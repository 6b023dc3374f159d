"""Per-user basic ratio features computed from a tweet list.

Each ratio counts the tweets that qualify (at least one retweet, like, URL,
hashtag, or mention) over the total number of tweets, so every value lies in
[0, 1].  An empty tweet list yields all-zero ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .records import TweetRecord


@dataclass(frozen=True)
class BasicFeatures:
    total_tweets: int
    retweet_ratio: float
    liked_ratio: float
    url_ratio: float
    hashtag_ratio: float
    mention_ratio: float
    original_content_ratio: float


def _qualifying_ratio(tweets: Sequence[TweetRecord], qualifies) -> float:
    if not tweets:
        return 0.0
    return sum(1 for t in tweets if qualifies(t)) / len(tweets)


def retweet_ratio(tweets: Sequence[TweetRecord]) -> float:
    """Fraction of tweets that received at least one retweet."""
    return _qualifying_ratio(tweets, lambda t: t.retweet_count >= 1)


def liked_ratio(tweets: Sequence[TweetRecord]) -> float:
    """Fraction of tweets that received at least one like."""
    return _qualifying_ratio(tweets, lambda t: t.like_count >= 1)


def url_ratio(tweets: Sequence[TweetRecord]) -> float:
    """Fraction of tweets containing at least one URL."""
    return _qualifying_ratio(tweets, lambda t: t.url_count >= 1)


def hashtag_ratio(tweets: Sequence[TweetRecord]) -> float:
    """Fraction of tweets containing at least one hashtag."""
    return _qualifying_ratio(tweets, lambda t: t.hashtag_count >= 1)


def mention_ratio(tweets: Sequence[TweetRecord]) -> float:
    """Fraction of tweets mentioning at least one other account."""
    return _qualifying_ratio(tweets, lambda t: t.mention_count >= 1)


def original_content_ratio(tweets: Sequence[TweetRecord]) -> float:
    """Fraction of tweets that are not reposts of another account's content."""
    return _qualifying_ratio(tweets, lambda t: not t.is_retweet_of_other)


def basic_features(tweets: Iterable[TweetRecord]) -> BasicFeatures:
    """All six ratios plus the tweet total, in one pass-consistent bundle."""
    tweets = tuple(tweets)
    return BasicFeatures(
        total_tweets=len(tweets),
        retweet_ratio=retweet_ratio(tweets),
        liked_ratio=liked_ratio(tweets),
        url_ratio=url_ratio(tweets),
        hashtag_ratio=hashtag_ratio(tweets),
        mention_ratio=mention_ratio(tweets),
        original_content_ratio=original_content_ratio(tweets),
    )
