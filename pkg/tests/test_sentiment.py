"""Lexicon parsing, polarity with negation, and the per-user sentiment score."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trustbench import LexiconError, default_lexicon, sentiment_counts, sentiment_score
from trustbench.records import TweetRecord
from trustbench.sentiment import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    Lexicon,
    SentimentCounts,
    classify_tweet,
    parse_lexicon,
    polarity,
    tokenize,
)

from conftest import WORKED_EXPECTED

LEX = Lexicon(entries={"good": 0.8, "bad": -0.6, "fine": 0.2}, negators=frozenset({"not"}))


class TestTokenize:
    def test_lowercases_and_splits_on_punctuation(self):
        assert tokenize("Good, not BAD!") == ["good", "not", "bad"]

    def test_underscore_is_a_separator(self):
        assert tokenize("very_good") == ["very", "good"]

    def test_apostrophes_split(self):
        assert tokenize("don't") == ["don", "t"]


class TestPolarity:
    def test_mean_of_matched_weights(self):
        assert polarity("good and bad", LEX) == pytest.approx((0.8 - 0.6) / 2)

    def test_unmatched_text_is_zero(self):
        assert polarity("nothing matches here", LEX) == 0.0

    def test_negator_flips_the_next_token_only(self):
        assert polarity("not good", LEX) == -0.8
        # the negator affects "good" but not the later "fine"
        assert polarity("not good but fine", LEX) == pytest.approx((-0.8 + 0.2) / 2)

    def test_negator_must_be_adjacent(self):
        assert polarity("not so good", LEX) == 0.8


class TestClassification:
    def test_sign_buckets(self):
        assert classify_tweet("good", LEX) == POSITIVE
        assert classify_tweet("bad", LEX) == NEGATIVE
        assert classify_tweet("whatever", LEX) == NEUTRAL
        assert classify_tweet("good bad fine", LEX) == POSITIVE

    def test_exact_cancellation_is_neutral(self):
        lex = Lexicon(entries={"up": 0.5, "down": -0.5}, negators=frozenset())
        assert classify_tweet("up down", lex) == NEUTRAL


class TestSentimentScore:
    def test_six_three_one_is_point_nine_exactly(self):
        assert sentiment_score(SentimentCounts(6, 3, 1)) == 0.9

    def test_no_tweets_scores_one(self):
        assert sentiment_score(SentimentCounts(0, 0, 0)) == 1.0

    def test_all_negative_scores_zero(self):
        assert sentiment_score(SentimentCounts(0, 0, 7)) == 0.0

    @given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
    def test_score_bounds_and_negative_monotonicity(self, pos, neu, neg):
        score = sentiment_score(SentimentCounts(pos, neu, neg))
        assert 0.0 <= score <= 1.0
        if pos + neu + neg > 0:
            worse = sentiment_score(SentimentCounts(pos, neu, neg + 1))
            assert worse <= score


class TestLexiconFormat:
    def test_parse_entries_comments_and_negators(self):
        lex = parse_lexicon("# comment\ngood 0.5\n\n! not\nBAD -0.25\n")
        assert lex.entries == {"good": 0.5, "bad": -0.25}
        assert lex.negators == frozenset({"not"})

    def test_bad_weight_raises(self):
        with pytest.raises(LexiconError, match="bad weight"):
            parse_lexicon("good strong\n")

    def test_missing_weight_raises(self):
        with pytest.raises(LexiconError, match="token weight"):
            parse_lexicon("good\n")

    def test_out_of_range_weight_raises(self):
        with pytest.raises(LexiconError, match="out of"):
            parse_lexicon("good 1.5\n")

    def test_negator_overlap_raises(self):
        with pytest.raises(LexiconError, match="overlap"):
            parse_lexicon("not 0.1\n! not\n")

    def test_default_lexicon_loads_and_is_cached(self):
        lex = default_lexicon()
        assert lex is default_lexicon()
        assert len(lex.entries) > 100
        assert "not" in lex.negators
        assert all(-1.0 <= w <= 1.0 for w in lex.entries.values())


def test_worked_example_counts_and_score(worked_tweets):
    counts = sentiment_counts(worked_tweets, default_lexicon())
    assert (counts.positive, counts.neutral, counts.negative) == (
        WORKED_EXPECTED["positive"],
        WORKED_EXPECTED["neutral"],
        WORKED_EXPECTED["negative"],
    )
    assert sentiment_score(counts) == WORKED_EXPECTED["sentiment_score"]


def test_counts_total_matches_tweet_count():
    tweets = [
        TweetRecord(
            tweet_id=f"t{i}",
            author_id="u",
            text=text,
            retweet_count=0,
            like_count=0,
            is_retweet_of_other=False,
            url_count=0,
            hashtag_count=0,
            mention_count=0,
        )
        for i, text in enumerate(["good", "bad", "meh", "good good"])
    ]
    counts = sentiment_counts(tweets, LEX)
    assert counts.total == 4
    assert (counts.positive, counts.neutral, counts.negative) == (2, 1, 1)
