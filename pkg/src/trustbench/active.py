"""Pool-based active learning: query strategies, batching, and the session loop.

A session owns a fixed train/test/pool partition of one dataset.  Each step
retrains the configured learner on the labeled set, records held-out
accuracy, then queries the next batch from the pool by the configured
strategy.  Labels arrive either from a simulated oracle (batch labeled
inside the step) or from a human annotator via ``submit_labels`` between
steps.  Every operation preserves the partition: an instance id lives in
exactly one of train, test, pool, or the pending batch, and once queried an
id can never be queried again.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .dataset import FeatureVector, SplitDataset
from .errors import (
    BatchPendingError,
    LabelMismatchError,
    SessionError,
)
from .learners import LEARNERS, ProbEstimate, accuracy, make_learner
from .synth import LabelRule
from .validation import encode_labels

STRATEGIES = ("uncertainty", "margin", "entropy", "random")

DEFAULT_BATCH_SIZE = 100
DEFAULT_MAX_ITERATIONS = 100
DEFAULT_STOP_THRESHOLD = 0.001
DEFAULT_PATIENCE = 5


def _as_distribution(p) -> tuple[float, ...]:
    if isinstance(p, ProbEstimate):
        return p.distribution()
    dist = tuple(float(v) for v in p)
    if not dist:
        raise ValueError("empty probability distribution")
    return dist


def uncertainty_score(p) -> float:
    """1 - max class probability; larger means less confident."""
    return 1.0 - max(_as_distribution(p))


def margin_score(p) -> float:
    """Gap between the top two class probabilities; smaller means more queryable."""
    dist = sorted(_as_distribution(p), reverse=True)
    if len(dist) < 2:
        return dist[0]
    return dist[0] - dist[1]


def entropy_score(p) -> float:
    """Shannon entropy in nats, with 0*ln(0) taken as 0."""
    return -sum(v * math.log(v) for v in _as_distribution(p) if v > 0.0)


_SCORERS = {
    "uncertainty": uncertainty_score,
    "margin": margin_score,
    "entropy": entropy_score,
}

# margin prefers small scores; the others prefer large
_ASCENDING = {"uncertainty": False, "margin": True, "entropy": False}


def rank_pool(scores: Mapping[str, float], strategy: str) -> list[str]:
    """Instance ids from most to least queryable; ties break by id ascending."""
    if strategy not in _SCORERS:
        raise ValueError(f"unknown strategy {strategy!r}")
    if _ASCENDING[strategy]:
        return sorted(scores, key=lambda i: (scores[i], i))
    return sorted(scores, key=lambda i: (-scores[i], i))


class HistoryPoint(NamedTuple):
    iteration: int
    labeled_count: int
    accuracy: float


@dataclass
class Session:
    """Mutable state of one active-learning run over a fixed dataset split."""

    dataset: SplitDataset
    learner_kind: str = "forest"
    strategy: str = "uncertainty"
    batch_size: int = DEFAULT_BATCH_SIZE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    stop_threshold: float = DEFAULT_STOP_THRESHOLD
    patience: int = DEFAULT_PATIENCE
    rng_seed: int = 0
    learner_params: dict = field(default_factory=dict)

    train_ids: list[str] = field(default_factory=list)
    labels: dict[str, str] = field(default_factory=dict)
    test_ids: tuple[str, ...] = ()
    pool_ids: list[str] = field(default_factory=list)
    pending: list[str] = field(default_factory=list)
    queried: set[str] = field(default_factory=set)
    history: list[HistoryPoint] = field(default_factory=list)
    stopped_early: bool = False
    iteration: int = -1
    model: object = None

    def __post_init__(self) -> None:
        if self.learner_kind not in LEARNERS:
            raise ValueError(f"unknown learner {self.learner_kind!r}; expected one of {sorted(LEARNERS)}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if self.patience < 1:
            raise ValueError("patience must be positive")
        if not self.train_ids:
            self.train_ids = [v.user_id for v in self.dataset.train_labeled]
            self.labels = {v.user_id: v.label for v in self.dataset.train_labeled}
            self.test_ids = tuple(v.user_id for v in self.dataset.test_labeled)
            self.pool_ids = sorted(v.user_id for v in self.dataset.pool_unlabeled)
        self._vectors = {v.user_id: v for v in self.dataset.all_vectors()}

    def partition_sizes(self) -> tuple[int, int, int, int]:
        return (len(self.train_ids), len(self.test_ids), len(self.pool_ids), len(self.pending))

    def is_complete(self) -> bool:
        """No further querying possible: stopped, budget spent, or nothing left."""
        if not self.history:
            return False
        return (
            self.stopped_early
            or self.iteration >= self.max_iterations
            or (not self.pending and not self.pool_ids)
        )

    def vector(self, instance_id: str) -> FeatureVector:
        try:
            return self._vectors[instance_id]
        except KeyError:
            raise SessionError(f"unknown instance id {instance_id!r}") from None

    def labels_for_test(self) -> dict[str, str]:
        return {v.user_id: v.label for v in self.dataset.test_labeled}

    def _matrix(self, ids: Sequence[str]) -> np.ndarray:
        return np.array([self._vectors[i].values for i in ids], dtype=np.float64)


@dataclass(frozen=True)
class SimulatedOracle:
    """Deterministic stand-in for the human annotator.

    Labels come either from a fixed id -> label mapping or from a ground
    truth rule evaluated on each instance's raw feature vector.
    """

    labels: Mapping[str, str] | None = None
    rule: LabelRule | None = None

    def __post_init__(self) -> None:
        if (self.labels is None) == (self.rule is None):
            raise ValueError("provide exactly one of labels or rule")

    @classmethod
    def from_labels(cls, labels: Mapping[str, str]) -> "SimulatedOracle":
        return cls(labels=dict(labels))

    @classmethod
    def from_rule(cls, rule: LabelRule) -> "SimulatedOracle":
        return cls(rule=rule)

    def label(self, vector: FeatureVector) -> str:
        if self.labels is not None:
            try:
                return self.labels[vector.user_id]
            except KeyError:
                raise SessionError(f"oracle has no label for {vector.user_id!r}") from None
        return self.rule.label_vector(vector)

    def label_batch(self, session: Session) -> dict[str, str]:
        return {i: self.label(session.vector(i)) for i in session.pending}


def refit_model(session: Session) -> None:
    """Train the session's learner on its current labeled set (fixed seed)."""
    X = session._matrix(session.train_ids)
    y = [session.labels[i] for i in session.train_ids]
    model = make_learner(session.learner_kind, rng_seed=session.rng_seed, **session.learner_params)
    session.model = model.fit(X, y)


def _retrain_and_record(session: Session) -> float:
    refit_model(session)
    model = session.model

    predicted = model.predict(session._matrix(session.test_ids))
    truth = encode_labels([session.labels_for_test()[i] for i in session.test_ids])
    acc = accuracy(predicted.tolist(), truth.tolist())

    session.iteration = 0 if not session.history else session.history[-1].iteration + 1
    session.history.append(HistoryPoint(session.iteration, len(session.train_ids), acc))
    return acc


def _check_plateau(session: Session) -> None:
    accs = [h.accuracy for h in session.history]
    if len(accs) > session.patience:
        recent = max(accs[-session.patience :])
        before = max(accs[: -session.patience])
        if recent - before < session.stop_threshold:
            session.stopped_early = True


def select_batch(session: Session) -> list[str]:
    """Move the top-ranked pool instances into the pending batch."""
    if session.pending:
        raise BatchPendingError("a pending batch is already awaiting labels")
    if not session.pool_ids:
        raise SessionError("pool is empty; nothing to query")
    if session.model is None:
        raise SessionError("session has no trained model; initialize first")

    pool = sorted(session.pool_ids)
    k = min(session.batch_size, len(pool))
    if session.strategy == "random":
        rng = np.random.default_rng(np.random.SeedSequence([session.rng_seed, session.iteration]))
        chosen = [pool[j] for j in rng.permutation(len(pool))[:k]]
    else:
        proba = session.model.predict_proba(session._matrix(pool))
        scorer = _SCORERS[session.strategy]
        scores = {uid: scorer(row) for uid, row in zip(pool, proba)}
        chosen = rank_pool(scores, session.strategy)[:k]

    already = session.queried.intersection(chosen)
    if already:
        raise SessionError(f"instances queried twice: {sorted(already)[:5]}")
    session.queried.update(chosen)
    remaining = set(chosen)
    session.pool_ids = [i for i in session.pool_ids if i not in remaining]
    session.pending = list(chosen)
    return list(chosen)


def submit_labels(session: Session, labels: Mapping[str, str]) -> Session:
    """Apply annotator labels to exactly the pending batch."""
    pending = set(session.pending)
    provided = set(labels)
    missing = sorted(pending - provided)
    extraneous = sorted(provided - pending)
    if missing or extraneous:
        parts = []
        if missing:
            parts.append(f"missing ids: {missing}")
        if extraneous:
            parts.append(f"ids not in the pending batch: {extraneous}")
        raise LabelMismatchError("; ".join(parts), missing=missing, extraneous=extraneous)
    encode_labels(list(labels.values()))
    for uid in session.pending:
        session.labels[uid] = labels[uid]
        session.train_ids.append(uid)
    session.pending = []
    return session


def initialize(session: Session) -> Session:
    """Train on the seed labels, record the first curve point, query batch one."""
    if session.history:
        raise SessionError("session is already initialized")
    _retrain_and_record(session)
    _check_plateau(session)
    if not session.stopped_early and session.pool_ids and session.iteration < session.max_iterations:
        select_batch(session)
    return session


def al_step(session: Session, oracle: SimulatedOracle | None = None) -> tuple[Session, float]:
    """One retrain/evaluate/query round; returns the new accuracy point."""
    if not session.history:
        raise SessionError("session is not initialized")
    if session.pending:
        if oracle is None:
            raise BatchPendingError("pending batch must be labeled before stepping")
        submit_labels(session, oracle.label_batch(session))
    acc = _retrain_and_record(session)
    _check_plateau(session)
    if not session.stopped_early and session.pool_ids and session.iteration < session.max_iterations:
        select_batch(session)
        if oracle is not None:
            submit_labels(session, oracle.label_batch(session))
    return session, acc


def al_run(session: Session, oracle: SimulatedOracle) -> Session:
    """Drive the loop to completion with a simulated oracle."""
    if not session.history:
        initialize(session)
    while not session.is_complete():
        al_step(session, oracle)
    return session


CURVE_COLUMNS = ("iteration", "labeled_count", "accuracy", "strategy", "learner", "seed")


def write_curves(path, runs: Iterable[Session]) -> None:
    """Learning-curve table: one row per history point, one group per session."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        for session in runs:
            for point in session.history:
                writer.writerow(
                    [
                        point.iteration,
                        point.labeled_count,
                        repr(point.accuracy),
                        session.strategy,
                        session.learner_kind,
                        session.rng_seed,
                    ]
                )
