"""Feature-vector assembly, clipping/normalization, splitting, and persistence.

The per-user vector has exactly 19 entries in :data:`FEATURE_NAMES` order.
Unbounded features (raw counts, the h-index sum, social reputation, influence)
are percentile-clipped before min-max normalization; ratio-valued features are
already in [0, 1] and pass through the clipper untouched.

Dataset files store the *raw* table plus a JSON sidecar with the fitted clip
bounds and min/max parameters, so loading re-derives the normalized values
bit-for-bit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DatasetError, DatasetVersionError
from .records import UserRecord
from .scoring import ScoreCard
from .validation import check_matrix

SCHEMA_VERSION = 1

FEATURE_NAMES: tuple[str, ...] = (
    "followers_count",
    "friends_count",
    "statuses_count",
    "listed_count",
    "total_tweets",
    "retweet_ratio",
    "liked_ratio",
    "url_ratio",
    "hashtag_ratio",
    "mention_ratio",
    "original_content_ratio",
    "positive_count",
    "neutral_count",
    "negative_count",
    "sentiment_score",
    "tweet_credibility",
    "social_reputation",
    "retweet_hindex_plus_like_hindex",
    "influence_score",
)

# features with no defined upper limit; only these get percentile-clipped
UNBOUNDED_FEATURES: frozenset[str] = frozenset(
    {
        "followers_count",
        "friends_count",
        "statuses_count",
        "listed_count",
        "total_tweets",
        "positive_count",
        "neutral_count",
        "negative_count",
        "social_reputation",
        "retweet_hindex_plus_like_hindex",
        "influence_score",
    }
)


@dataclass(frozen=True)
class FeatureSchema:
    names: tuple[str, ...] = FEATURE_NAMES
    clip_percentiles: tuple[float, float] = (1.0, 99.0)
    unbounded_features: frozenset[str] = UNBOUNDED_FEATURES
    version: int = SCHEMA_VERSION

    def __post_init__(self):
        if len(self.names) != 19:
            raise ValueError(f"schema must have exactly 19 names, got {len(self.names)}")
        if len(set(self.names)) != len(self.names):
            raise ValueError("schema names must be unique")
        unknown = self.unbounded_features - set(self.names)
        if unknown:
            raise ValueError(f"unbounded features not in schema: {sorted(unknown)}")

    def index(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True)
class FeatureVector:
    """One user's feature row; ``values`` is normalized once a pipeline ran."""

    user_id: str
    values: tuple[float, ...]
    label: str | None = None
    raw_values: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.values) != 19:
            raise ValueError(f"expected 19 values, got {len(self.values)}")

    @property
    def raw(self) -> tuple[float, ...]:
        return self.raw_values if self.raw_values is not None else self.values


@dataclass(frozen=True)
class NormalizationParams:
    """Per-feature (clip_low, clip_high, min, max); clip bounds None when exempt."""

    clip_low: tuple[float | None, ...]
    clip_high: tuple[float | None, ...]
    minimum: tuple[float, ...]
    maximum: tuple[float, ...]
    clip_percentiles: tuple[float, float]


@dataclass
class SplitDataset:
    schema: FeatureSchema
    train_labeled: list[FeatureVector]
    test_labeled: list[FeatureVector]
    pool_unlabeled: list[FeatureVector]
    normalization_params: NormalizationParams

    def all_vectors(self) -> list[FeatureVector]:
        return [*self.train_labeled, *self.test_labeled, *self.pool_unlabeled]

    def vector(self, user_id: str) -> FeatureVector:
        for vec in self.all_vectors():
            if vec.user_id == user_id:
                return vec
        raise KeyError(user_id)


def assemble(
    scorecards: Sequence[ScoreCard],
    users: Sequence[UserRecord],
    schema: FeatureSchema | None = None,
) -> list[FeatureVector]:
    """One raw (unnormalized) vector per scorecard, in schema order."""
    schema = schema or FeatureSchema()
    by_id = {u.user_id: u for u in users}
    vectors = []
    for card in scorecards:
        user = by_id.get(card.user_id)
        if user is None:
            raise DatasetError(f"scorecard {card.user_id!r} has no matching user record")
        row = {
            "followers_count": float(user.followers_count),
            "friends_count": float(user.friends_count),
            "statuses_count": float(user.statuses_count),
            "listed_count": float(user.listed_count),
            "total_tweets": float(card.basic.total_tweets),
            "retweet_ratio": card.basic.retweet_ratio,
            "liked_ratio": card.basic.liked_ratio,
            "url_ratio": card.basic.url_ratio,
            "hashtag_ratio": card.basic.hashtag_ratio,
            "mention_ratio": card.basic.mention_ratio,
            "original_content_ratio": card.basic.original_content_ratio,
            "positive_count": float(card.counts.positive),
            "neutral_count": float(card.counts.neutral),
            "negative_count": float(card.counts.negative),
            "sentiment_score": card.sentiment_score,
            "tweet_credibility": card.tweet_credibility,
            "social_reputation": card.social_reputation,
            "retweet_hindex_plus_like_hindex": float(card.retweet_hindex + card.like_hindex),
            "influence_score": card.influence_score,
        }
        vectors.append(FeatureVector(card.user_id, tuple(row[name] for name in schema.names)))
    return vectors


def nearest_rank_bounds(column: np.ndarray, low_pct: float, high_pct: float) -> tuple[float, float]:
    """Nearest-rank percentile bounds: 1-based index ceil(p/100 * n) into the sorted column."""
    n = column.size
    if n == 0:
        raise DatasetError("cannot fit clip bounds on an empty column")
    ordered = np.sort(column)

    def bound(pct: float) -> float:
        rank = math.ceil(pct / 100.0 * n)
        rank = min(max(rank, 1), n)
        return float(ordered[rank - 1])

    return bound(low_pct), bound(high_pct)


class PercentileClipper(BaseEstimator, TransformerMixin):
    """Clips the unbounded features to fitted nearest-rank percentile bounds.

    Exempt features pass through unchanged (their fitted bounds are NaN).
    """

    def __init__(self, low=1.0, high=99.0, schema: FeatureSchema | None = None):
        self.low = low
        self.high = high
        self.schema = schema

    def fit(self, X, y=None):
        if not 0 <= self.low < self.high <= 100:
            raise ValueError(f"need 0 <= low < high <= 100, got ({self.low}, {self.high})")
        X = check_matrix(X)
        if X.shape[0] == 0:
            raise DatasetError("cannot fit clip bounds on an empty matrix")
        schema = self.schema or FeatureSchema()
        if X.shape[1] != len(schema.names):
            raise ValueError(f"expected {len(schema.names)} columns, got {X.shape[1]}")
        low_bounds = np.full(X.shape[1], np.nan)
        high_bounds = np.full(X.shape[1], np.nan)
        for j, name in enumerate(schema.names):
            if name in schema.unbounded_features:
                low_bounds[j], high_bounds[j] = nearest_rank_bounds(X[:, j], self.low, self.high)
        self.low_bounds_ = low_bounds
        self.high_bounds_ = high_bounds
        return self

    def transform(self, X):
        X = check_matrix(X).copy()
        clipped = ~np.isnan(self.low_bounds_)
        X[:, clipped] = np.clip(X[:, clipped], self.low_bounds_[clipped], self.high_bounds_[clipped])
        return X


class MinMaxNormalizer(BaseEstimator, TransformerMixin):
    """Per-feature (x - min) / (max - min); constant features map to 0."""

    def fit(self, X, y=None):
        X = check_matrix(X)
        if X.shape[0] == 0:
            raise DatasetError("cannot fit normalization on an empty matrix")
        self.min_ = X.min(axis=0)
        self.max_ = X.max(axis=0)
        return self

    def transform(self, X):
        X = check_matrix(X)
        span = self.max_ - self.min_
        out = np.zeros_like(X)
        varying = span != 0
        out[:, varying] = (X[:, varying] - self.min_[varying]) / span[varying]
        return out


def fit_pipeline(
    matrix: np.ndarray,
    schema: FeatureSchema | None = None,
    low: float | None = None,
    high: float | None = None,
) -> tuple[np.ndarray, NormalizationParams, PercentileClipper, MinMaxNormalizer]:
    """Clip + min-max normalize the full matrix; returns the fitted transformers."""
    schema = schema or FeatureSchema()
    low = schema.clip_percentiles[0] if low is None else low
    high = schema.clip_percentiles[1] if high is None else high
    clipper = PercentileClipper(low=low, high=high, schema=schema).fit(matrix)
    clipped = clipper.transform(matrix)
    normalizer = MinMaxNormalizer().fit(clipped)
    normalized = normalizer.transform(clipped)
    params = NormalizationParams(
        clip_low=tuple(None if np.isnan(v) else float(v) for v in clipper.low_bounds_),
        clip_high=tuple(None if np.isnan(v) else float(v) for v in clipper.high_bounds_),
        minimum=tuple(float(v) for v in normalizer.min_),
        maximum=tuple(float(v) for v in normalizer.max_),
        clip_percentiles=(low, high),
    )
    return normalized, params, clipper, normalizer


def transform_with_params(matrix: np.ndarray, params: NormalizationParams) -> np.ndarray:
    """Apply previously fitted clip + min-max parameters to new rows."""
    X = check_matrix(matrix).copy()
    for j in range(X.shape[1]):
        lo, hi = params.clip_low[j], params.clip_high[j]
        if lo is not None:
            X[:, j] = np.clip(X[:, j], lo, hi)
    mn = np.asarray(params.minimum)
    mx = np.asarray(params.maximum)
    span = mx - mn
    out = np.zeros_like(X)
    varying = span != 0
    out[:, varying] = (X[:, varying] - mn[varying]) / span[varying]
    return out


def split_vectors(
    vectors: Sequence[FeatureVector],
    labels: Mapping[str, str],
    test_fraction: float,
    rng_seed: int,
) -> tuple[list[FeatureVector], list[FeatureVector], list[FeatureVector]]:
    """Seeded shuffle of the labeled ids into train/test; everything else pools."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    by_id = {v.user_id: v for v in vectors}
    unknown = [uid for uid in labels if uid not in by_id]
    if unknown:
        raise DatasetError(f"labeled ids not present in vectors: {sorted(unknown)[:5]}")

    labeled_ids = sorted(labels)
    rng = np.random.default_rng(rng_seed)
    rng.shuffle(labeled_ids)
    n_test = round(len(labeled_ids) * test_fraction)
    if n_test == 0 or n_test == len(labeled_ids):
        raise DatasetError(
            f"test_fraction {test_fraction} leaves an empty partition for "
            f"{len(labeled_ids)} labeled ids"
        )
    test_ids = set(labeled_ids[:n_test])
    train, test, pool = [], [], []
    for vec in vectors:
        if vec.user_id in labels:
            labeled = replace(vec, label=labels[vec.user_id])
            (test if vec.user_id in test_ids else train).append(labeled)
        else:
            pool.append(replace(vec, label=None))
    return train, test, pool


def build_dataset(
    vectors: Sequence[FeatureVector],
    labels: Mapping[str, str],
    test_fraction: float = 0.2,
    rng_seed: int = 0,
    schema: FeatureSchema | None = None,
    low: float | None = None,
    high: float | None = None,
) -> SplitDataset:
    """Fit clip+normalize on the full raw matrix, then split into train/test/pool."""
    schema = schema or FeatureSchema()
    raw = np.array([v.raw for v in vectors], dtype=np.float64)
    normalized, params, _, _ = fit_pipeline(raw, schema, low, high)
    normalized_vectors = [
        replace(vec, values=tuple(map(float, normalized[i])), raw_values=vec.raw)
        for i, vec in enumerate(vectors)
    ]
    train, test, pool = split_vectors(normalized_vectors, labels, test_fraction, rng_seed)
    return SplitDataset(
        schema=schema,
        train_labeled=train,
        test_labeled=test,
        pool_unlabeled=pool,
        normalization_params=params,
    )


def _sidecar_path(table_path: Path) -> Path:
    return table_path.with_name(table_path.name + ".meta.json")


def save_dataset(dataset: SplitDataset, path) -> None:
    """Write the raw table (CSV) plus the JSON sidecar with params and split ids."""
    table_path = Path(path)
    header = [*dataset.schema.names, "user_id", "label"]
    with open(table_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for vec in dataset.all_vectors():
            writer.writerow([*(repr(v) for v in vec.raw), vec.user_id, vec.label or ""])
    params = dataset.normalization_params
    sidecar = {
        "version": dataset.schema.version,
        "names": list(dataset.schema.names),
        "unbounded_features": sorted(dataset.schema.unbounded_features),
        "clip_percentiles": list(params.clip_percentiles),
        "clip_low": [v for v in params.clip_low],
        "clip_high": [v for v in params.clip_high],
        "minimum": list(params.minimum),
        "maximum": list(params.maximum),
        "train_ids": [v.user_id for v in dataset.train_labeled],
        "test_ids": [v.user_id for v in dataset.test_labeled],
    }
    with open(_sidecar_path(table_path), "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1)
        fh.write("\n")


def load_dataset(path) -> SplitDataset:
    """Inverse of :func:`save_dataset`; normalized values are recomputed exactly."""
    table_path = Path(path)
    sidecar_path = _sidecar_path(table_path)
    if not table_path.exists():
        raise DatasetError(f"dataset table not found: {table_path}")
    if not sidecar_path.exists():
        raise DatasetError(f"dataset sidecar not found: {sidecar_path}")
    with open(sidecar_path, "r", encoding="utf-8") as fh:
        sidecar = json.load(fh)
    version = sidecar.get("version")
    if version != SCHEMA_VERSION:
        raise DatasetVersionError(f"unsupported dataset version {version!r}")

    schema = FeatureSchema(
        names=tuple(sidecar["names"]),
        clip_percentiles=tuple(sidecar["clip_percentiles"]),
        unbounded_features=frozenset(sidecar["unbounded_features"]),
        version=version,
    )
    params = NormalizationParams(
        clip_low=tuple(sidecar["clip_low"]),
        clip_high=tuple(sidecar["clip_high"]),
        minimum=tuple(sidecar["minimum"]),
        maximum=tuple(sidecar["maximum"]),
        clip_percentiles=tuple(sidecar["clip_percentiles"]),
    )

    ids, raws, labels = [], [], []
    with open(table_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("dataset table is empty") from None
        expected = [*schema.names, "user_id", "label"]
        if header != expected:
            raise DatasetError(f"unexpected table header: {header[:4]}...")
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(expected):
                raise DatasetError(f"row {row_no}: expected {len(expected)} fields, got {len(row)}")
            try:
                raws.append([float(v) for v in row[:19]])
            except ValueError as exc:
                raise DatasetError(f"row {row_no}: {exc}") from None
            ids.append(row[19])
            labels.append(row[20] or None)

    raw_matrix = np.array(raws, dtype=np.float64) if raws else np.empty((0, 19))
    normalized = transform_with_params(raw_matrix, params) if raws else raw_matrix
    train_ids = set(sidecar["train_ids"])
    test_ids = set(sidecar["test_ids"])
    train, test, pool = [], [], []
    for i, uid in enumerate(ids):
        vec = FeatureVector(
            user_id=uid,
            values=tuple(map(float, normalized[i])),
            label=labels[i],
            raw_values=tuple(map(float, raw_matrix[i])),
        )
        if uid in train_ids:
            train.append(vec)
        elif uid in test_ids:
            test.append(vec)
        else:
            pool.append(vec)
    missing = (train_ids | test_ids) - set(ids)
    if missing:
        raise DatasetError(f"sidecar names ids missing from the table: {sorted(missing)[:5]}")
    return SplitDataset(
        schema=schema,
        train_labeled=train,
        test_labeled=test,
        pool_unlabeled=pool,
        normalization_params=params,
    )


def as_matrix(vectors: Sequence[FeatureVector]) -> tuple[list[str], np.ndarray, list[str | None]]:
    """ids, normalized value matrix, and labels for a list of vectors."""
    ids = [v.user_id for v in vectors]
    X = np.array([v.values for v in vectors], dtype=np.float64) if vectors else np.empty((0, 19))
    labels = [v.label for v in vectors]
    return ids, X, labels
