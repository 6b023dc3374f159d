"""Shared fixtures: a hand-computed worked example and reusable synthetic data.

The worked-example account has every feature chosen so the expected values
can be derived by hand: 10 tweets, four with retweets (counts 5,4,3,1), six
with likes (9,8,7,6,5,1), two with urls, two with hashtags, three with
mentions, five reposts, and a 6/3/1 positive/neutral/negative tone split.
"""

from __future__ import annotations

import pytest

from trustbench import Corpus, TweetRecord, UserRecord, build_corpus

POSITIVE_TEXT = "great progress today"
NEUTRAL_TEXT = "meeting schedule update"
NEGATIVE_TEXT = "terrible failure again"


def _tweet(
    seq: int,
    *,
    retweets: int = 0,
    likes: int = 0,
    urls: int = 0,
    hashtags: int = 0,
    mentions: int = 0,
    repost: bool = False,
    text: str = NEUTRAL_TEXT,
) -> TweetRecord:
    return TweetRecord(
        tweet_id=f"t{seq:02d}",
        author_id="worked-example",
        text=text,
        retweet_count=retweets,
        like_count=likes,
        is_retweet_of_other=repost,
        url_count=urls,
        hashtag_count=hashtags,
        mention_count=mentions,
    )


@pytest.fixture(scope="session")
def worked_user() -> UserRecord:
    return UserRecord(
        user_id="worked-example",
        screen_name="worked_example",
        followers_count=100,
        friends_count=10,
        statuses_count=50,
        listed_count=3,
        is_protected=False,
    )


@pytest.fixture(scope="session")
def worked_tweets() -> tuple[TweetRecord, ...]:
    return (
        _tweet(1, retweets=5, likes=9, urls=1, mentions=1, text=POSITIVE_TEXT),
        _tweet(2, retweets=4, likes=8, urls=1, text=POSITIVE_TEXT),
        _tweet(3, retweets=3, likes=7, hashtags=1, text=POSITIVE_TEXT),
        _tweet(4, retweets=1, likes=6, hashtags=1, mentions=1, text=POSITIVE_TEXT),
        _tweet(5, likes=5, text=POSITIVE_TEXT),
        _tweet(6, likes=1, mentions=1, repost=True, text=POSITIVE_TEXT),
        _tweet(7, repost=True, text=NEUTRAL_TEXT),
        _tweet(8, repost=True, text=NEUTRAL_TEXT),
        _tweet(9, repost=True, text=NEUTRAL_TEXT),
        _tweet(10, repost=True, text=NEGATIVE_TEXT),
    )


@pytest.fixture(scope="session")
def worked_corpus(worked_user, worked_tweets) -> Corpus:
    return build_corpus([worked_user], list(worked_tweets))


# expected values for the worked example, derived by hand and frozen
WORKED_EXPECTED = {
    "total_tweets": 10,
    "retweet_ratio": 0.4,
    "liked_ratio": 0.6,
    "url_ratio": 0.2,
    "hashtag_ratio": 0.2,
    "mention_ratio": 0.3,
    "original_content_ratio": 0.5,
    "positive": 6,
    "neutral": 3,
    "negative": 1,
    "sentiment_score": 0.9,
    "retweet_hindex": 3,
    "like_hindex": 5,
    "tweet_credibility": 0.175,
    "social_reputation": 10.764171393608475,
    "influence_exact": 3.967834278721695,
}
