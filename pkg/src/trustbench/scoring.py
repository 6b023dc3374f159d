"""Derived per-user scores and the composite influence score.

Social reputation is log-scaled: 2*ln(1+followers) + ln(1+statuses)
- ln(1+friends).  The engagement h-index is the largest h such that at least
h of the user's tweets each drew h or more retweets (or likes).  Tweet
credibility averages the four engagement ratios and scales by the
original-content ratio.  The influence score is the plain mean of sentiment
score, tweet credibility, social reputation, and the two h-indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .features import BasicFeatures, basic_features
from .records import Corpus, TweetRecord, UserRecord
from .sentiment import Lexicon, SentimentCounts, default_lexicon, sentiment_counts, sentiment_score


@dataclass(frozen=True)
class ScoreCard:
    """Every derived score for one user."""

    user_id: str
    basic: BasicFeatures
    counts: SentimentCounts
    sentiment_score: float
    social_reputation: float
    retweet_hindex: int
    like_hindex: int
    tweet_credibility: float
    influence_score: float


def social_reputation(followers: int, friends: int, statuses: int) -> float:
    """Reward followers (double weight) and statuses, penalize followees."""
    if min(followers, friends, statuses) < 0:
        raise ValueError("counts must be >= 0")
    return 2.0 * math.log(1 + followers) + math.log(1 + statuses) - math.log(1 + friends)


def h_index(engagements: Iterable[int]) -> int:
    """Largest h such that at least h values are >= h; 0 for empty input."""
    ranked = sorted(engagements, reverse=True)
    h = 0
    for rank, value in enumerate(ranked, start=1):
        if value < rank:
            break
        h = rank
    return h


def tweet_credibility(basic: BasicFeatures) -> float:
    """Mean of the four engagement ratios, scaled by the original-content ratio."""
    return (
        (basic.retweet_ratio + basic.liked_ratio + basic.hashtag_ratio + basic.url_ratio) / 4
    ) * basic.original_content_ratio


def influence_score(
    sentiment: float,
    credibility: float,
    reputation: float,
    retweet_h: int,
    like_h: int,
) -> float:
    """Arithmetic mean of the five component scores."""
    return (sentiment + credibility + reputation + retweet_h + like_h) / 5


def score_user(
    user: UserRecord,
    tweets: Sequence[TweetRecord],
    lexicon: Lexicon | None = None,
) -> ScoreCard:
    """Compute the full ScoreCard for one user; total on zero-tweet users."""
    lexicon = lexicon if lexicon is not None else default_lexicon()
    basic = basic_features(tweets)
    counts = sentiment_counts(tweets, lexicon)
    c_s = sentiment_score(counts)
    r_s = social_reputation(user.followers_count, user.friends_count, user.statuses_count)
    r_h = h_index(t.retweet_count for t in tweets)
    l_h = h_index(t.like_count for t in tweets)
    credibility = tweet_credibility(basic)
    return ScoreCard(
        user_id=user.user_id,
        basic=basic,
        counts=counts,
        sentiment_score=c_s,
        social_reputation=r_s,
        retweet_hindex=r_h,
        like_hindex=l_h,
        tweet_credibility=credibility,
        influence_score=influence_score(c_s, credibility, r_s, r_h, l_h),
    )


def score_corpus(corpus: Corpus, lexicon: Lexicon | None = None) -> list[ScoreCard]:
    """ScoreCards for every user in the corpus, in corpus order."""
    lexicon = lexicon if lexicon is not None else default_lexicon()
    return [score_user(u, corpus.tweets_by_user[u.user_id], lexicon) for u in corpus.users]
