"""HTTP service that lets a human annotator drive the active-learning loop.

One dataset is loaded at startup.  Annotation sessions are created over it,
each guarded by its own lock and snapshotted to disk before any response
leaves the server, so a crash after a response loses nothing.  Label
submissions carry the batch token echoed by ``GET .../batch``: replaying the
same token with the same labels returns the recorded result instead of
mutating twice, while a mismatched or reused token with different labels is
a conflict.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .active import (
    HistoryPoint,
    Session,
    al_step,
    initialize,
    refit_model,
    submit_labels,
)
from .dataset import SplitDataset
from .errors import LabelMismatchError, SessionError
from .learners import LEARNERS
from .records import Corpus
from .scoring import ScoreCard, score_corpus
from .sentiment import Lexicon

logger = logging.getLogger(__name__)

STORE_FORMAT_VERSION = 1


class SessionCreateRequest(BaseModel):
    learner: str = "forest"
    strategy: str = "uncertainty"
    batch_size: int = Field(default=100, ge=1)
    seed: int = 0
    max_iterations: int = Field(default=100, ge=0)
    stop_threshold: float = 0.001
    patience: int = Field(default=5, ge=1)
    learner_params: dict = Field(default_factory=dict)
    dataset: str | None = None


class LabelSubmission(BaseModel):
    batch_token: str
    labels: dict[str, str]


def _batch_token(session_id: str, iteration: int) -> str:
    return hashlib.sha256(f"{session_id}:{iteration}".encode("utf-8")).hexdigest()[:16]


@dataclass
class ManagedSession:
    session_id: str
    session: Session
    created_at: float
    batch_token: str | None = None
    last_batch: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Registry of annotation sessions with crash-safe JSON persistence."""

    def __init__(self, dataset: SplitDataset, dataset_name: str, data_dir: Path | None):
        self.dataset = dataset
        self.dataset_name = dataset_name
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self._sessions: dict[str, ManagedSession] = {}
        self._registry_lock = threading.Lock()
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._restore_all()

    def create(self, config: SessionCreateRequest) -> ManagedSession:
        session = Session(
            self.dataset,
            learner_kind=config.learner,
            strategy=config.strategy,
            batch_size=config.batch_size,
            max_iterations=config.max_iterations,
            stop_threshold=config.stop_threshold,
            patience=config.patience,
            rng_seed=config.seed,
            learner_params=dict(config.learner_params),
        )
        initialize(session)
        with self._registry_lock:
            session_id = f"s{len(self._sessions) + 1:06d}"
            managed = ManagedSession(session_id, session, created_at=time.time())
            self._sessions[session_id] = managed
        if session.pending:
            managed.batch_token = _batch_token(session_id, session.iteration)
        self.persist(managed)
        return managed

    def get(self, session_id: str) -> ManagedSession:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}") from None

    def persist(self, managed: ManagedSession) -> None:
        if self.data_dir is None:
            return
        snapshot = self._snapshot(managed)
        path = self.data_dir / f"{managed.session_id}.json"
        tmp = path.with_suffix(".json.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(snapshot, fh, sort_keys=True)
            fh.write("\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)

    def _snapshot(self, managed: ManagedSession) -> dict:
        s = managed.session
        return {
            "format_version": STORE_FORMAT_VERSION,
            "session_id": managed.session_id,
            "dataset": self.dataset_name,
            "created_at": managed.created_at,
            "config": {
                "learner": s.learner_kind,
                "strategy": s.strategy,
                "batch_size": s.batch_size,
                "max_iterations": s.max_iterations,
                "stop_threshold": s.stop_threshold,
                "patience": s.patience,
                "seed": s.rng_seed,
                "learner_params": s.learner_params,
            },
            "state": {
                "train_ids": list(s.train_ids),
                "labels": s.labels,
                "pool_ids": list(s.pool_ids),
                "pending": list(s.pending),
                "queried": sorted(s.queried),
                "history": [list(point) for point in s.history],
                "stopped_early": s.stopped_early,
                "iteration": s.iteration,
            },
            "batch_token": managed.batch_token,
            "last_batch": managed.last_batch,
        }

    def _restore_all(self) -> None:
        for path in sorted(self.data_dir.glob("s*.json")):
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    snapshot = json.load(fh)
                self._restore_one(snapshot)
            except (OSError, ValueError, KeyError) as exc:
                logger.warning("skipping unreadable session snapshot %s: %s", path, exc)

    def _restore_one(self, snapshot: dict) -> None:
        if snapshot.get("format_version") != STORE_FORMAT_VERSION:
            logger.warning("skipping snapshot with unsupported version: %s", snapshot.get("session_id"))
            return
        if snapshot.get("dataset") != self.dataset_name:
            logger.warning(
                "skipping session %s: built on dataset %r, serving %r",
                snapshot.get("session_id"),
                snapshot.get("dataset"),
                self.dataset_name,
            )
            return
        config = snapshot["config"]
        state = snapshot["state"]
        session = Session(
            self.dataset,
            learner_kind=config["learner"],
            strategy=config["strategy"],
            batch_size=config["batch_size"],
            max_iterations=config["max_iterations"],
            stop_threshold=config["stop_threshold"],
            patience=config["patience"],
            rng_seed=config["seed"],
            learner_params=dict(config["learner_params"]),
        )
        session.train_ids = list(state["train_ids"])
        session.labels = dict(state["labels"])
        session.pool_ids = list(state["pool_ids"])
        session.pending = list(state["pending"])
        session.queried = set(state["queried"])
        session.history = [HistoryPoint(*point) for point in state["history"]]
        session.stopped_early = bool(state["stopped_early"])
        session.iteration = int(state["iteration"])
        if session.history:
            refit_model(session)
        managed = ManagedSession(
            session_id=snapshot["session_id"],
            session=session,
            created_at=snapshot["created_at"],
            batch_token=snapshot["batch_token"],
            last_batch=snapshot["last_batch"],
        )
        self._sessions[managed.session_id] = managed


def _top_tweets(tweets, limit: int = 10) -> list[dict]:
    ranked = sorted(tweets, key=lambda t: (-(t.retweet_count + t.like_count), t.tweet_id))
    return [
        {
            "tweet_id": t.tweet_id,
            "text": t.text,
            "retweet_count": t.retweet_count,
            "like_count": t.like_count,
            "is_retweet_of_other": t.is_retweet_of_other,
        }
        for t in ranked[:limit]
    ]


def create_app(
    dataset: SplitDataset,
    *,
    dataset_name: str = "dataset",
    corpus: Corpus | None = None,
    lexicon: Lexicon | None = None,
    data_dir: str | os.PathLike | None = None,
    ui_dir: str | os.PathLike | None = None,
) -> FastAPI:
    """Wire the annotation service over one loaded dataset.

    ``corpus`` enriches batch payloads and the scorecard endpoint with
    per-user scores and sample tweets; without it those fields are null.
    """
    app = FastAPI(title="trust annotation service")
    store = SessionStore(dataset, dataset_name, data_dir)
    app.state.store = store

    scorecards: dict[str, ScoreCard] = {}
    tweets_by_user = {}
    if corpus is not None:
        scorecards = {card.user_id: card for card in score_corpus(corpus, lexicon)}
        tweets_by_user = corpus.tweets_by_user

    feature_names = dataset.schema.names

    def _instance_payload(session: Session, uid: str) -> dict:
        vec = session.vector(uid)
        card = scorecards.get(uid)
        proba = None
        if session.model is not None:
            proba = float(session.model.predict_proba([list(vec.values)])[0, 1])
        return {
            "user_id": uid,
            "features": dict(zip(feature_names, vec.values)),
            "raw_features": dict(zip(feature_names, vec.raw)),
            "scorecard": asdict(card) if card is not None else None,
            "tweets": _top_tweets(tweets_by_user.get(uid, ())) if corpus is not None else [],
            "probability_trustworthy": proba,
        }

    def _progress(session: Session) -> dict:
        train, test, pool, pending = session.partition_sizes()
        return {
            "labeled_count": train,
            "test_count": test,
            "pool_size": pool,
            "pending_size": pending,
        }

    def _curve_payload(managed: ManagedSession) -> dict:
        s = managed.session
        return {
            "session_id": managed.session_id,
            "learner": s.learner_kind,
            "strategy": s.strategy,
            "seed": s.rng_seed,
            "points": [
                {"iteration": p.iteration, "labeled_count": p.labeled_count, "accuracy": p.accuracy}
                for p in s.history
            ],
            "stopped_early": s.stopped_early,
            "completed": s.is_complete(),
        }

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "dataset": dataset_name, "sessions": len(store._sessions)}

    @app.post("/sessions", status_code=201)
    def create_session(config: SessionCreateRequest) -> dict:
        if config.dataset is not None and config.dataset != dataset_name:
            raise HTTPException(status_code=404, detail=f"unknown dataset {config.dataset!r}")
        try:
            managed = store.create(config)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session = managed.session
        return {
            "session_id": managed.session_id,
            "batch_token": managed.batch_token,
            "pending_batch_size": len(session.pending),
            "initial_accuracy": session.history[0].accuracy,
            "progress": _progress(session),
        }

    @app.get("/sessions/{session_id}/batch")
    def get_batch(session_id: str) -> dict:
        managed = store.get(session_id)
        with managed.lock:
            session = managed.session
            if not session.pending:
                if session.is_complete():
                    return {
                        "session_id": session_id,
                        "batch_token": None,
                        "completed": True,
                        "instances": [],
                        "progress": _progress(session),
                    }
                raise HTTPException(status_code=409, detail="no pending batch")
            return {
                "session_id": session_id,
                "batch_token": managed.batch_token,
                "completed": False,
                "instances": [_instance_payload(session, uid) for uid in session.pending],
                "progress": _progress(session),
            }

    @app.post("/sessions/{session_id}/labels")
    def post_labels(session_id: str, submission: LabelSubmission) -> dict:
        managed = store.get(session_id)
        with managed.lock:
            session = managed.session
            last = managed.last_batch
            if last is not None and submission.batch_token == last["token"]:
                if submission.labels == last["labels"]:
                    return {**last["result"], "replayed": True}
                raise HTTPException(
                    status_code=409,
                    detail="batch was already labeled with a different label set",
                )
            if not session.pending:
                raise HTTPException(status_code=409, detail="session has no pending batch to label")
            if submission.batch_token != managed.batch_token:
                raise HTTPException(status_code=409, detail="stale or unknown batch token")
            try:
                submit_labels(session, submission.labels)
                _, accuracy_now = al_step(session)
            except LabelMismatchError as exc:
                raise HTTPException(
                    status_code=422,
                    detail={
                        "message": str(exc),
                        "missing": list(exc.missing),
                        "extraneous": list(exc.extraneous),
                    },
                ) from exc
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            except SessionError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc

            if session.pending:
                managed.batch_token = _batch_token(session_id, session.iteration)
            else:
                managed.batch_token = None
            point = session.history[-1]
            result = {
                "session_id": session_id,
                "iteration": point.iteration,
                "labeled_count": point.labeled_count,
                "accuracy": accuracy_now,
                "completed": session.is_complete(),
                "stopped_early": session.stopped_early,
                "next_batch_token": managed.batch_token,
                "next_batch_size": len(session.pending),
                "replayed": False,
            }
            managed.last_batch = {
                "token": submission.batch_token,
                "labels": dict(submission.labels),
                "result": result,
            }
            store.persist(managed)
            return result

    @app.get("/sessions/{session_id}/curve")
    def get_curve(session_id: str) -> dict:
        managed = store.get(session_id)
        with managed.lock:
            return _curve_payload(managed)

    @app.get("/users/{user_id}/scorecard")
    def get_scorecard(user_id: str) -> dict:
        card = scorecards.get(user_id)
        if card is None:
            raise HTTPException(status_code=404, detail=f"unknown user {user_id!r}")
        return asdict(card)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
