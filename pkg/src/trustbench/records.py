"""Corpus types and ingestion of archived user/tweet records.

Input files are line-delimited JSON: one object per line.  Unknown keys are
ignored.  Tweets may omit ``url_count``/``hashtag_count``/``mention_count``,
in which case the counts are derived by scanning the tweet text.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping, Union

from .errors import CorpusError

LineSource = Union[IO[bytes], IO[str], Iterable[Union[str, bytes]]]


@dataclass(frozen=True)
class UserRecord:
    """Account-level metadata for one user."""

    user_id: str
    screen_name: str
    followers_count: int
    friends_count: int
    statuses_count: int
    listed_count: int
    is_protected: bool

    def __post_init__(self):
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        for name in ("followers_count", "friends_count", "statuses_count", "listed_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class TweetRecord:
    """One archived tweet with its engagement counts."""

    tweet_id: str
    author_id: str
    text: str
    retweet_count: int
    like_count: int
    is_retweet_of_other: bool
    url_count: int
    hashtag_count: int
    mention_count: int

    def __post_init__(self):
        if not self.tweet_id:
            raise ValueError("tweet_id must be non-empty")
        if not self.author_id:
            raise ValueError("author_id must be non-empty")
        for name in ("retweet_count", "like_count", "url_count", "hashtag_count", "mention_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ParseFailure:
    """A rejected input line with its 1-based line number."""

    line_no: int
    reason: str


@dataclass(frozen=True)
class Corpus:
    """Referentially complete set of users and their tweets.

    Per-user tweet lists preserve ingestion order.  Users without tweets are
    retained with empty lists.
    """

    users: tuple[UserRecord, ...]
    tweets_by_user: Mapping[str, tuple[TweetRecord, ...]]

    @property
    def user_ids(self) -> tuple[str, ...]:
        return tuple(u.user_id for u in self.users)

    def user(self, user_id: str) -> UserRecord:
        for u in self.users:
            if u.user_id == user_id:
                return u
        raise KeyError(user_id)

    def tweets(self, user_id: str) -> tuple[TweetRecord, ...]:
        return self.tweets_by_user[user_id]


def count_urls(text: str) -> int:
    """Tokens with an ``http``/``https`` prefix."""
    return sum(1 for tok in text.split() if tok.lower().startswith("http"))


def count_hashtags(text: str) -> int:
    return sum(1 for tok in text.split() if len(tok) > 1 and tok.startswith("#"))


def count_mentions(text: str) -> int:
    return sum(1 for tok in text.split() if len(tok) > 1 and tok.startswith("@"))


def _iter_lines(source: LineSource) -> Iterator[str]:
    if isinstance(source, (bytes, str)):
        source = io.StringIO(source.decode("utf-8") if isinstance(source, bytes) else source)
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw


def _require(obj: dict, key: str, kind: type):
    if key not in obj:
        raise ValueError(f"missing key {key!r}")
    value = obj[key]
    if kind is int:
        # bools are ints in Python; reject them for count fields
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"key {key!r} must be an integer")
    elif not isinstance(value, kind):
        raise ValueError(f"key {key!r} must be {kind.__name__}")
    return value


def _user_from_obj(obj: dict) -> UserRecord:
    return UserRecord(
        user_id=_require(obj, "user_id", str),
        screen_name=_require(obj, "screen_name", str),
        followers_count=_require(obj, "followers_count", int),
        friends_count=_require(obj, "friends_count", int),
        statuses_count=_require(obj, "statuses_count", int),
        listed_count=_require(obj, "listed_count", int),
        is_protected=_require(obj, "is_protected", bool),
    )


def _tweet_from_obj(obj: dict) -> TweetRecord:
    text = _require(obj, "text", str)

    def optional_count(key: str, fallback) -> int:
        if key in obj:
            return _require(obj, key, int)
        return fallback(text)

    return TweetRecord(
        tweet_id=_require(obj, "tweet_id", str),
        author_id=_require(obj, "author_id", str),
        text=text,
        retweet_count=_require(obj, "retweet_count", int),
        like_count=_require(obj, "like_count", int),
        is_retweet_of_other=_require(obj, "is_retweet_of_other", bool),
        url_count=optional_count("url_count", count_urls),
        hashtag_count=optional_count("hashtag_count", count_hashtags),
        mention_count=optional_count("mention_count", count_mentions),
    )


def _parse_lines(source: LineSource, build) -> tuple[list, list[ParseFailure]]:
    records, failures = [], []
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("line is not an object")
            records.append(build(obj))
        except (ValueError, TypeError) as exc:
            failures.append(ParseFailure(line_no, str(exc)))
    return records, failures


def parse_users(source: LineSource) -> tuple[list[UserRecord], list[ParseFailure]]:
    """Parse user records, collecting per-line failures instead of raising.

    Raises :class:`CorpusError` if two valid lines share a ``user_id``.
    """
    users, failures = _parse_lines(source, _user_from_obj)
    seen = set()
    for user in users:
        if user.user_id in seen:
            raise CorpusError(f"duplicate user_id {user.user_id!r}")
        seen.add(user.user_id)
    return users, failures


def parse_tweets(source: LineSource) -> tuple[list[TweetRecord], list[ParseFailure]]:
    """Parse tweet records; referential checks happen in :func:`build_corpus`."""
    return _parse_lines(source, _tweet_from_obj)


def build_corpus(users: Iterable[UserRecord], tweets: Iterable[TweetRecord]) -> Corpus:
    """Assemble a referentially complete corpus.

    Raises :class:`CorpusError` on duplicate ids or a tweet whose author was
    never ingested.
    """
    users = tuple(users)
    seen_users = set()
    for user in users:
        if user.user_id in seen_users:
            raise CorpusError(f"duplicate user_id {user.user_id!r}")
        seen_users.add(user.user_id)

    by_user: dict[str, list[TweetRecord]] = {u.user_id: [] for u in users}
    seen_tweets = set()
    for tweet in tweets:
        if tweet.tweet_id in seen_tweets:
            raise CorpusError(f"duplicate tweet_id {tweet.tweet_id!r}")
        seen_tweets.add(tweet.tweet_id)
        if tweet.author_id not in by_user:
            raise CorpusError(
                f"tweet {tweet.tweet_id!r} references unknown author {tweet.author_id!r}"
            )
        by_user[tweet.author_id].append(tweet)

    return Corpus(users=users, tweets_by_user={uid: tuple(ts) for uid, ts in by_user.items()})


def filter_eligible(corpus: Corpus, min_tweet_count: int = 0) -> Corpus:
    """Drop protected accounts and accounts without followers or friends.

    ``min_tweet_count`` additionally drops low-activity users when set above
    zero; the default keeps zero-tweet users so the filter matches the
    public/followers/friends rule exactly.
    """
    kept = tuple(
        u
        for u in corpus.users
        if not u.is_protected
        and u.followers_count > 0
        and u.friends_count > 0
        and len(corpus.tweets_by_user[u.user_id]) >= min_tweet_count
    )
    return Corpus(
        users=kept,
        tweets_by_user={u.user_id: corpus.tweets_by_user[u.user_id] for u in kept},
    )


def load_users(path) -> tuple[list[UserRecord], list[ParseFailure]]:
    with open(path, "rb") as fh:
        return parse_users(fh)


def load_tweets(path) -> tuple[list[TweetRecord], list[ParseFailure]]:
    with open(path, "rb") as fh:
        return parse_tweets(fh)


def load_corpus(users_path, tweets_path) -> tuple[Corpus, list[ParseFailure]]:
    users, user_failures = load_users(users_path)
    tweets, tweet_failures = load_tweets(tweets_path)
    return build_corpus(users, tweets), user_failures + tweet_failures
