"""Native random-forest and linear-SVM classifiers with calibrated probabilities.

Both estimators follow the scikit-learn protocol (``fit`` / ``predict`` /
``predict_proba`` / ``get_params``) but implement their algorithms from
scratch: the forest grows Gini trees on bootstrap resamples with per-split
feature subsampling, and the SVM runs Pegasos subgradient descent on the
hinge objective with a Platt-style sigmoid fitted on a held-out fold to turn
margins into probabilities.  Given the same data and seed, both produce
bit-identical models and snapshots.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .errors import ModelFormatError, TrainingError
from .tree import accumulate_leaf_fractions, build_tree_arrays, pegasos_sweep
from .validation import check_matrix, check_X_y

MODEL_FORMAT_VERSION = 1

# calibrated probabilities are kept strictly inside (0, 1)
_PROB_FLOOR = 1e-15


@dataclass(frozen=True)
class ProbEstimate:
    """Binary class distribution; the complement is derived, so it always sums to 1."""

    p_trustworthy: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_trustworthy <= 1.0:
            raise ValueError(f"probability out of range: {self.p_trustworthy!r}")

    @property
    def p_untrustworthy(self) -> float:
        return 1.0 - self.p_trustworthy

    def distribution(self) -> tuple[float, float]:
        """(p_untrustworthy, p_trustworthy), matching the 0/1 label encoding."""
        return (self.p_untrustworthy, self.p_trustworthy)


def _require_fitted(model, attr: str) -> None:
    if not hasattr(model, attr):
        raise TrainingError(f"{type(model).__name__} is not fitted")


def _check_probe(model, X) -> np.ndarray:
    X = check_matrix(X)
    if X.shape[1] != model.n_features_in_:
        raise ValueError(f"expected {model.n_features_in_} features, got {X.shape[1]}")
    return np.ascontiguousarray(X)


class ForestTrustClassifier(BaseEstimator, ClassifierMixin):
    """Random forest of axis-aligned Gini trees over bootstrap resamples.

    ``feature_subsample=None`` resolves to ceil(sqrt(n_features)) at fit
    time.  Per-tree seeds derive from ``rng_seed`` through a SeedSequence
    spawn, so trees are independent yet fully reproducible.
    """

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int = 12,
        min_samples_leaf: int = 2,
        feature_subsample: int | None = None,
        rng_seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.feature_subsample = feature_subsample
        self.rng_seed = rng_seed

    def fit(self, X, y) -> "ForestTrustClassifier":
        X, y = check_X_y(X, y)
        if self.n_trees < 1 or self.max_depth < 1 or self.min_samples_leaf < 1:
            raise ValueError("n_trees, max_depth, and min_samples_leaf must be positive")
        n, d = X.shape
        n_sub = self.feature_subsample if self.feature_subsample is not None else math.isqrt(d - 1) + 1
        if not 1 <= n_sub:
            raise ValueError("feature_subsample must be positive")
        n_sub = min(n_sub, d)

        trees = []
        for child in np.random.SeedSequence(self.rng_seed).spawn(self.n_trees):
            rng = np.random.default_rng(child)
            bootstrap = rng.integers(0, n, size=n)
            kernel_seed = int(rng.integers(0, 2**31 - 1))
            trees.append(
                build_tree_arrays(
                    np.ascontiguousarray(X[bootstrap]),
                    y[bootstrap],
                    self.max_depth,
                    self.min_samples_leaf,
                    n_sub,
                    kernel_seed,
                )
            )
        self.trees_ = trees
        self.n_features_in_ = d
        self.feature_subsample_ = n_sub
        self.classes_ = np.array([0, 1])
        return self

    def predict_proba(self, X) -> np.ndarray:
        _require_fitted(self, "trees_")
        X = _check_probe(self, X)
        acc = np.zeros(X.shape[0], dtype=np.float64)
        for tree in self.trees_:
            accumulate_leaf_fractions(X, *tree, acc)
        p1 = acc / len(self.trees_)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)

    def proba_one(self, x) -> ProbEstimate:
        return ProbEstimate(float(self.predict_proba(np.atleast_2d(x))[0, 1]))


class LinearSvmTrustClassifier(BaseEstimator, ClassifierMixin):
    """Linear soft-margin SVM trained by Pegasos, with sigmoid calibration.

    Training minimizes hinge loss with an L2 penalty on the weights (the
    bias is unregularized) using step size 1/(lam*t) and seeded per-epoch
    shuffling.  A sigmoid p = 1/(1+exp(A*m+B)) over the signed margin m is
    fitted by maximum likelihood on a stratified held-out fold, after which
    the model is refit on the full training set.
    """

    def __init__(
        self,
        lam: float = 1e-3,
        epochs: int = 200,
        calibration_fraction: float = 0.2,
        rng_seed: int = 0,
    ):
        self.lam = lam
        self.epochs = epochs
        self.calibration_fraction = calibration_fraction
        self.rng_seed = rng_seed

    def fit(self, X, y) -> "LinearSvmTrustClassifier":
        X, y = check_X_y(X, y)
        if self.lam <= 0 or self.epochs < 1 or not 0.0 < self.calibration_fraction < 1.0:
            raise ValueError("lam and epochs must be positive; calibration_fraction in (0,1)")
        ss_split, ss_fold, ss_full = np.random.SeedSequence(self.rng_seed).spawn(3)

        holdout = _stratified_holdout(y, self.calibration_fraction, ss_split)
        if holdout is None:
            # too few members of a class to hold a fold out: calibrate in-sample
            w, b = _run_pegasos(X, y, self.lam, self.epochs, ss_full)
            a_cal, b_cal = _fit_sigmoid(X @ w + b, y)
        else:
            cal_idx, fit_idx = holdout
            w_fold, b_fold = _run_pegasos(X[fit_idx], y[fit_idx], self.lam, self.epochs, ss_fold)
            a_cal, b_cal = _fit_sigmoid(X[cal_idx] @ w_fold + b_fold, y[cal_idx])
            w, b = _run_pegasos(X, y, self.lam, self.epochs, ss_full)

        self.weights_ = w
        self.bias_ = float(b)
        self.calibration_ = (float(a_cal), float(b_cal))
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X) -> np.ndarray:
        _require_fitted(self, "weights_")
        X = _check_probe(self, X)
        return X @ self.weights_ + self.bias_

    def predict_proba(self, X) -> np.ndarray:
        margins = self.decision_function(X)
        a, b = self.calibration_
        p1 = _stable_sigmoid(a * margins + b)
        p1 = np.clip(p1, _PROB_FLOOR, 1.0 - _PROB_FLOOR)
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)

    def proba_one(self, x) -> ProbEstimate:
        return ProbEstimate(float(self.predict_proba(np.atleast_2d(x))[0, 1]))


def _stratified_holdout(y, fraction, seed_seq):
    """(holdout_idx, fit_idx) keeping both classes on both sides, or None."""
    rng = np.random.default_rng(seed_seq)
    holdout_parts = []
    fit_parts = []
    for cls in (0, 1):
        members = np.flatnonzero(y == cls)
        if members.size < 2:
            return None
        members = rng.permutation(members)
        n_hold = max(1, round(fraction * members.size))
        n_hold = min(n_hold, members.size - 1)
        holdout_parts.append(members[:n_hold])
        fit_parts.append(members[n_hold:])
    return np.sort(np.concatenate(holdout_parts)), np.sort(np.concatenate(fit_parts))


def _run_pegasos(X, y, lam, epochs, seed_seq):
    rng = np.random.default_rng(seed_seq)
    n = X.shape[0]
    order = np.concatenate([rng.permutation(n) for _ in range(epochs)])
    y_signed = (2.0 * y - 1.0).astype(np.float64)
    w, b = pegasos_sweep(np.ascontiguousarray(X), y_signed, order.astype(np.int64), lam)
    if not (np.all(np.isfinite(w)) and np.isfinite(b)):
        raise TrainingError("svm training diverged to non-finite weights")
    return w, b


def _stable_sigmoid(z: np.ndarray) -> np.ndarray:
    """1/(1+exp(z)) without overflow for large |z|."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = np.exp(-z[pos]) / (1.0 + np.exp(-z[pos]))
    out[~pos] = 1.0 / (1.0 + np.exp(z[~pos]))
    return out


def _fit_sigmoid(margins: np.ndarray, y: np.ndarray, max_iter: int = 100) -> tuple[float, float]:
    """Maximum-likelihood (A, B) for p = 1/(1+exp(A*m+B)) by damped Newton."""
    margins = np.asarray(margins, dtype=np.float64)
    prior1 = int(np.sum(y == 1))
    prior0 = int(np.sum(y == 0))
    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    targets = np.where(y == 1, hi, lo)

    min_step = 1e-10
    sigma = 1e-12
    a = 0.0
    b = math.log((prior0 + 1.0) / (prior1 + 1.0))

    def objective(a_, b_):
        z = a_ * margins + b_
        # -sum t*log(p) + (1-t)*log(1-p), written to avoid catastrophic exp
        return float(
            np.sum(np.where(z >= 0, targets * z + np.log1p(np.exp(-z)), (targets - 1) * z + np.log1p(np.exp(z))))
        )

    fval = objective(a, b)
    for _ in range(max_iter):
        z = a * margins + b
        p = _stable_sigmoid(z)
        d1 = targets - p
        d2 = p * (1.0 - p)
        g1 = float(np.dot(margins, d1))
        g2 = float(np.sum(d1))
        if abs(g1) < 1e-5 and abs(g2) < 1e-5:
            break
        h11 = float(np.dot(margins * margins, d2)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h21 = float(np.dot(margins, d2))
        det = h11 * h22 - h21 * h21
        da = -(h22 * g1 - h21 * g2) / det
        db = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * da + g2 * db

        step = 1.0
        while step >= min_step:
            new_a = a + step * da
            new_b = b + step * db
            new_f = objective(new_a, new_b)
            if new_f < fval + 1e-4 * step * gd:
                a, b, fval = new_a, new_b, new_f
                break
            step /= 2.0
        else:
            break
    return a, b


def accuracy(predictions, truth) -> float:
    """Fraction of positions where the two label sequences agree."""
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise ValueError(f"length mismatch: {len(predictions)} vs {len(truth)}")
    if not predictions:
        raise ValueError("cannot score empty label lists")
    return sum(p == t for p, t in zip(predictions, truth)) / len(predictions)


LEARNERS: dict[str, type[BaseEstimator]] = {
    "forest": ForestTrustClassifier,
    "svm": LinearSvmTrustClassifier,
}


def make_learner(kind: str, rng_seed: int = 0, **overrides):
    if kind not in LEARNERS:
        raise ValueError(f"unknown learner {kind!r}; expected one of {sorted(LEARNERS)}")
    return LEARNERS[kind](rng_seed=rng_seed, **overrides)


def train_forest(X, y, rng_seed: int = 0, **hyperparams) -> ForestTrustClassifier:
    return ForestTrustClassifier(rng_seed=rng_seed, **hyperparams).fit(X, y)


def train_svm(X, y, rng_seed: int = 0, **hyperparams) -> LinearSvmTrustClassifier:
    return LinearSvmTrustClassifier(rng_seed=rng_seed, **hyperparams).fit(X, y)


def _snapshot_dict(model) -> dict:
    if isinstance(model, ForestTrustClassifier):
        _require_fitted(model, "trees_")
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "forest",
            "hyperparams": {
                "n_trees": model.n_trees,
                "max_depth": model.max_depth,
                "min_samples_leaf": model.min_samples_leaf,
                "feature_subsample": model.feature_subsample_,
                "rng_seed": model.rng_seed,
            },
            "n_features": model.n_features_in_,
            "trees": [
                {
                    "feature": t[0].tolist(),
                    "threshold": t[1].tolist(),
                    "left": t[2].tolist(),
                    "right": t[3].tolist(),
                    "count0": t[4].tolist(),
                    "count1": t[5].tolist(),
                }
                for t in model.trees_
            ],
        }
    if isinstance(model, LinearSvmTrustClassifier):
        _require_fitted(model, "weights_")
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "svm",
            "hyperparams": {
                "lam": model.lam,
                "epochs": model.epochs,
                "calibration_fraction": model.calibration_fraction,
                "rng_seed": model.rng_seed,
            },
            "n_features": model.n_features_in_,
            "weights": model.weights_.tolist(),
            "bias": model.bias_,
            "calibration": {"a": model.calibration_[0], "b": model.calibration_[1]},
        }
    raise TypeError(f"cannot snapshot {type(model).__name__}")


def save_model(model, path) -> None:
    """Write a self-describing JSON snapshot; exact round-trip, stable bytes."""
    payload = json.dumps(_snapshot_dict(model), sort_keys=True, separators=(",", ":"))
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(payload)
        fh.write("\n")
    os.replace(tmp, path)


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"unparseable model snapshot {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model snapshot version in {path}")

    kind = payload.get("kind")
    if kind == "forest":
        hp = payload["hyperparams"]
        model = ForestTrustClassifier(
            n_trees=hp["n_trees"],
            max_depth=hp["max_depth"],
            min_samples_leaf=hp["min_samples_leaf"],
            feature_subsample=hp["feature_subsample"],
            rng_seed=hp["rng_seed"],
        )
        model.trees_ = [
            (
                np.asarray(t["feature"], dtype=np.int64),
                np.asarray(t["threshold"], dtype=np.float64),
                np.asarray(t["left"], dtype=np.int64),
                np.asarray(t["right"], dtype=np.int64),
                np.asarray(t["count0"], dtype=np.int64),
                np.asarray(t["count1"], dtype=np.int64),
            )
            for t in payload["trees"]
        ]
        model.feature_subsample_ = hp["feature_subsample"]
    elif kind == "svm":
        hp = payload["hyperparams"]
        model = LinearSvmTrustClassifier(
            lam=hp["lam"],
            epochs=hp["epochs"],
            calibration_fraction=hp["calibration_fraction"],
            rng_seed=hp["rng_seed"],
        )
        model.weights_ = np.asarray(payload["weights"], dtype=np.float64)
        model.bias_ = float(payload["bias"])
        model.calibration_ = (float(payload["calibration"]["a"]), float(payload["calibration"]["b"]))
    else:
        raise ModelFormatError(f"unknown model kind {kind!r} in {path}")

    model.n_features_in_ = int(payload["n_features"])
    model.classes_ = np.array([0, 1])
    return model
