"""Reputation, h-index, credibility, and the composed influence score."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trustbench import (
    h_index,
    influence_score,
    score_corpus,
    score_user,
    social_reputation,
    tweet_credibility,
)
from trustbench.features import BasicFeatures, basic_features

from conftest import WORKED_EXPECTED


def brute_force_h(values) -> int:
    """Independent oracle: max h with at least h values >= h."""
    values = list(values)
    best = 0
    for h in range(len(values) + 1):
        if sum(1 for v in values if v >= h) >= h:
            best = h
    return best


class TestHIndex:
    def test_pinned_examples(self):
        assert h_index([5, 4, 3, 2, 1]) == 3
        assert h_index([0, 0, 0]) == 0
        assert h_index([10, 10, 10]) == 3
        assert h_index([]) == 0
        assert h_index([1]) == 1

    def test_matches_brute_force_on_seeded_vectors(self):
        rng = np.random.default_rng(1234)
        for _ in range(300):
            n = int(rng.integers(0, 60))
            values = rng.integers(0, 500, size=n).tolist()
            assert h_index(values) == brute_force_h(values)

    @given(st.lists(st.integers(0, 10_000), max_size=120))
    def test_matches_brute_force_property(self, values):
        assert h_index(values) == brute_force_h(values)

    def test_order_invariant(self):
        assert h_index([1, 3, 5, 2, 4]) == h_index([5, 4, 3, 2, 1])


class TestSocialReputation:
    def test_worked_value(self):
        expected = 2 * math.log(101) + math.log(51) - math.log(11)
        assert social_reputation(100, 10, 50) == pytest.approx(expected, abs=1e-12)
        assert social_reputation(100, 10, 50) == WORKED_EXPECTED["social_reputation"]

    def test_zero_activity_is_zero(self):
        assert social_reputation(0, 0, 0) == 0.0

    def test_more_followers_raise_more_friends_lower(self):
        base = social_reputation(100, 10, 50)
        assert social_reputation(200, 10, 50) > base
        assert social_reputation(100, 20, 50) < base
        assert social_reputation(100, 10, 100) > base


class TestTweetCredibility:
    def test_worked_value_exact(self):
        basic = BasicFeatures(
            total_tweets=10,
            retweet_ratio=0.4,
            liked_ratio=0.6,
            url_ratio=0.2,
            hashtag_ratio=0.2,
            mention_ratio=0.3,
            original_content_ratio=0.5,
        )
        assert tweet_credibility(basic) == 0.175

    def test_all_reposts_zero_credibility(self):
        basic = BasicFeatures(5, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0)
        assert tweet_credibility(basic) == 0.0

    def test_mention_ratio_does_not_enter(self):
        a = BasicFeatures(5, 0.4, 0.6, 0.2, 0.2, 0.0, 0.5)
        b = BasicFeatures(5, 0.4, 0.6, 0.2, 0.2, 1.0, 0.5)
        assert tweet_credibility(a) == tweet_credibility(b)


class TestInfluenceScore:
    def test_rounded_inputs_compose_to_published_value(self):
        assert influence_score(0.9, 0.175, 10.7642, 3, 5) == pytest.approx(3.96784, abs=1e-9)

    def test_mean_of_five(self):
        assert influence_score(1.0, 1.0, 1.0, 1, 1) == 1.0
        assert influence_score(0.0, 0.0, 0.0, 0, 0) == 0.0


class TestScoreUser:
    def test_worked_example_end_to_end(self, worked_user, worked_tweets):
        card = score_user(worked_user, worked_tweets)
        assert card.user_id == "worked-example"
        assert card.sentiment_score == WORKED_EXPECTED["sentiment_score"]
        assert card.tweet_credibility == WORKED_EXPECTED["tweet_credibility"]
        assert card.social_reputation == WORKED_EXPECTED["social_reputation"]
        assert card.retweet_hindex == WORKED_EXPECTED["retweet_hindex"]
        assert card.like_hindex == WORKED_EXPECTED["like_hindex"]
        assert card.influence_score == pytest.approx(WORKED_EXPECTED["influence_exact"], abs=1e-12)
        assert card.influence_score == pytest.approx(3.96784, abs=1e-5)

    def test_influence_is_mean_of_components(self, worked_user, worked_tweets):
        card = score_user(worked_user, worked_tweets)
        mean = (
            card.sentiment_score
            + card.tweet_credibility
            + card.social_reputation
            + card.retweet_hindex
            + card.like_hindex
        ) / 5
        assert card.influence_score == mean

    def test_zero_tweet_user(self, worked_user):
        card = score_user(worked_user, ())
        assert card.basic == basic_features(())
        assert card.sentiment_score == 1.0
        assert card.tweet_credibility == 0.0
        assert (card.retweet_hindex, card.like_hindex) == (0, 0)

    def test_score_corpus_order_matches_users(self, worked_corpus):
        cards = score_corpus(worked_corpus)
        assert [c.user_id for c in cards] == list(worked_corpus.user_ids)
