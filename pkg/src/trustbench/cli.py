"""Command-line entry points: score corpora, build datasets, run experiments, serve.

Every subcommand that takes a seed writes byte-identical output when rerun
with the same inputs.  Errors print one line to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .active import STRATEGIES, Session, SimulatedOracle, al_run, write_curves
from .dataset import FEATURE_NAMES, FeatureVector, build_dataset, load_dataset, save_dataset
from .errors import DatasetError, TrustbenchError
from .learners import LEARNERS
from .records import filter_eligible, load_corpus
from .scoring import ScoreCard, score_corpus
from .sentiment import load_lexicon
from .synth import DEFAULT_RULE_WEIGHTS, LabelRule, generate_synthetic
from .validation import LABEL_TO_INT

SCORECARD_COLUMNS = (
    "user_id",
    "screen_name",
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
    "social_reputation",
    "retweet_hindex",
    "like_hindex",
    "tweet_credibility",
    "influence_score",
)


def _scorecard_row(card: ScoreCard, screen_name: str, user) -> list:
    return [
        card.user_id,
        screen_name,
        user.followers_count,
        user.friends_count,
        user.statuses_count,
        user.listed_count,
        card.basic.total_tweets,
        repr(card.basic.retweet_ratio),
        repr(card.basic.liked_ratio),
        repr(card.basic.url_ratio),
        repr(card.basic.hashtag_ratio),
        repr(card.basic.mention_ratio),
        repr(card.basic.original_content_ratio),
        card.counts.positive,
        card.counts.neutral,
        card.counts.negative,
        repr(card.sentiment_score),
        repr(card.social_reputation),
        card.retweet_hindex,
        card.like_hindex,
        repr(card.tweet_credibility),
        repr(card.influence_score),
    ]


def cmd_score(args) -> int:
    corpus, failures = load_corpus(args.users, args.tweets)
    for failure in failures:
        print(f"warning: line {failure.line_no}: {failure.reason}", file=sys.stderr)
    eligible = filter_eligible(corpus, min_tweet_count=args.min_tweets)
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    cards = score_corpus(eligible, lexicon)
    users_by_id = {u.user_id: u for u in eligible.users}
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCORECARD_COLUMNS)
        for card in cards:
            user = users_by_id[card.user_id]
            writer.writerow(_scorecard_row(card, user.screen_name, user))
    print(f"scored {len(cards)} users -> {args.out}")
    return 0


def _read_scorecard_table(path) -> list[FeatureVector]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(SCORECARD_COLUMNS).issubset(reader.fieldnames):
            missing = sorted(set(SCORECARD_COLUMNS) - set(reader.fieldnames or ()))
            raise DatasetError(f"scorecard table {path} lacks columns: {missing}")
        vectors = []
        for row in reader:
            values = {name: float(row[name]) for name in SCORECARD_COLUMNS[2:]}
            values["retweet_hindex_plus_like_hindex"] = values["retweet_hindex"] + values["like_hindex"]
            vectors.append(
                FeatureVector(
                    user_id=row["user_id"],
                    values=tuple(values[name] for name in FEATURE_NAMES),
                )
            )
    return vectors


def _read_labels(path) -> dict[str, str]:
    labels: dict[str, str] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"user_id", "label"}.issubset(reader.fieldnames):
            raise DatasetError(f"labels file {path} needs user_id and label columns")
        for row in reader:
            label = row["label"]
            if label not in LABEL_TO_INT:
                raise DatasetError(f"unknown label {label!r} for user {row['user_id']!r}")
            labels[row["user_id"]] = label
    return labels


def cmd_build_dataset(args) -> int:
    vectors = _read_scorecard_table(args.scorecards)
    labels = _read_labels(args.labels) if args.labels else {}
    known = {v.user_id for v in vectors}
    unknown = sorted(set(labels) - known)
    if unknown:
        raise DatasetError(f"labels reference users missing from the scorecard table: {unknown[:5]}")
    dataset = build_dataset(
        vectors,
        labels,
        test_fraction=args.test_fraction,
        rng_seed=args.seed,
        low=args.clip_low,
        high=args.clip_high,
    )
    save_dataset(dataset, args.out)
    train, test, pool = (
        len(dataset.train_labeled),
        len(dataset.test_labeled),
        len(dataset.pool_unlabeled),
    )
    print(f"dataset -> {args.out} (train={train} test={test} pool={pool})")
    return 0


def cmd_al_experiment(args) -> int:
    dataset = load_dataset(args.dataset)
    oracle = SimulatedOracle.from_labels(_read_labels(args.oracle_labels))
    strategies = args.strategy or ["uncertainty"]
    seeds = args.seed or [0]
    runs = []
    for strategy in strategies:
        for seed in seeds:
            session = Session(
                dataset,
                learner_kind=args.learner,
                strategy=strategy,
                batch_size=args.batch_size,
                max_iterations=args.max_iters,
                stop_threshold=args.stop_threshold,
                patience=args.patience,
                rng_seed=seed,
            )
            al_run(session, oracle)
            runs.append(session)
            final = session.history[-1]
            print(
                f"{strategy} seed={seed}: {len(session.history)} points, "
                f"final accuracy {final.accuracy:.4f} at {final.labeled_count} labels"
            )
    write_curves(args.out, runs)
    print(f"curves -> {args.out}")
    return 0


def cmd_synth(args) -> int:
    rule = LabelRule(DEFAULT_RULE_WEIGHTS, threshold=None, noise_rate=args.noise, seed=args.seed)
    corpus, labels, resolved = generate_synthetic(args.n, rng_seed=args.seed, rule=rule)
    with open(args.users_out, "w", encoding="utf-8") as fh:
        for user in corpus.users:
            fh.write(
                json.dumps(
                    {
                        "user_id": user.user_id,
                        "screen_name": user.screen_name,
                        "followers_count": user.followers_count,
                        "friends_count": user.friends_count,
                        "statuses_count": user.statuses_count,
                        "listed_count": user.listed_count,
                        "is_protected": user.is_protected,
                    },
                    sort_keys=True,
                )
            )
            fh.write("\n")
    with open(args.tweets_out, "w", encoding="utf-8") as fh:
        for user in corpus.users:
            for t in corpus.tweets_by_user[user.user_id]:
                fh.write(
                    json.dumps(
                        {
                            "tweet_id": t.tweet_id,
                            "author_id": t.author_id,
                            "text": t.text,
                            "retweet_count": t.retweet_count,
                            "like_count": t.like_count,
                            "is_retweet_of_other": t.is_retweet_of_other,
                            "url_count": t.url_count,
                            "hashtag_count": t.hashtag_count,
                            "mention_count": t.mention_count,
                        },
                        sort_keys=True,
                    )
                )
                fh.write("\n")
    with open(args.labels_out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "label"])
        for user in corpus.users:
            writer.writerow([user.user_id, labels[user.user_id]])
    print(
        f"synthesized {args.n} users -> {args.users_out}, {args.tweets_out}, "
        f"{args.labels_out} (rule threshold {resolved.threshold:.6f})"
    )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    dataset = load_dataset(args.dataset)
    corpus = None
    if args.users and args.tweets:
        corpus, failures = load_corpus(args.users, args.tweets)
        for failure in failures:
            print(f"warning: line {failure.line_no}: {failure.reason}", file=sys.stderr)
    elif args.users or args.tweets:
        raise DatasetError("--users and --tweets must be given together")
    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"--listen must look like HOST:PORT, got {args.listen!r}")
    app = create_app(
        dataset,
        dataset_name=Path(args.dataset).stem,
        corpus=corpus,
        data_dir=args.data_dir,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=host, port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustbench",
        description="Trust scoring and human-in-the-loop active learning over archived corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="compute per-user influence scorecards")
    p_score.add_argument("--users", required=True, help="user records, one JSON object per line")
    p_score.add_argument("--tweets", required=True, help="tweet records, one JSON object per line")
    p_score.add_argument("--out", required=True, help="output scorecard table (CSV)")
    p_score.add_argument("--lexicon", default=None, help="override the built-in sentiment lexicon")
    p_score.add_argument(
        "--min-tweets",
        type=int,
        default=1,
        help="drop users with fewer archived tweets (default 1)",
    )
    p_score.set_defaults(func=cmd_score)

    p_build = sub.add_parser("build-dataset", help="normalize scorecards into a training dataset")
    p_build.add_argument("--scorecards", required=True, help="scorecard table from the score command")
    p_build.add_argument("--labels", default=None, help="CSV of user_id,label seed annotations")
    p_build.add_argument("--out", required=True, help="output dataset CSV (sidecar written alongside)")
    p_build.add_argument("--clip-low", type=float, default=1.0, help="lower clip percentile (default 1)")
    p_build.add_argument("--clip-high", type=float, default=99.0, help="upper clip percentile (default 99)")
    p_build.add_argument("--test-fraction", type=float, default=0.2, help="held-out share of labeled rows")
    p_build.add_argument("--seed", type=int, default=0, help="train/test shuffle seed")
    p_build.set_defaults(func=cmd_build_dataset)

    p_exp = sub.add_parser("al-experiment", help="run simulated active-learning experiments")
    p_exp.add_argument("--dataset", required=True, help="dataset CSV built by build-dataset")
    p_exp.add_argument("--learner", choices=sorted(LEARNERS), default="forest")
    p_exp.add_argument(
        "--strategy",
        action="append",
        choices=STRATEGIES,
        help="query strategy; repeat for several runs (default uncertainty)",
    )
    p_exp.add_argument("--seed", action="append", type=int, help="session seed; repeatable (default 0)")
    p_exp.add_argument("--batch-size", type=int, default=100)
    p_exp.add_argument("--max-iters", type=int, default=100)
    p_exp.add_argument("--stop-threshold", type=float, default=0.001)
    p_exp.add_argument("--patience", type=int, default=5)
    p_exp.add_argument(
        "--oracle-labels",
        required=True,
        help="CSV of user_id,label ground truth consulted for queried instances",
    )
    p_exp.add_argument("--out", required=True, help="output learning-curve table (CSV)")
    p_exp.set_defaults(func=cmd_al_experiment)

    p_synth = sub.add_parser("synth", help="generate a labeled synthetic corpus")
    p_synth.add_argument("--users-out", required=True)
    p_synth.add_argument("--tweets-out", required=True)
    p_synth.add_argument("--labels-out", required=True)
    p_synth.add_argument("--n", type=int, default=1000, help="number of users (default 1000)")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--noise", type=float, default=0.0, help="label flip probability")
    p_synth.set_defaults(func=cmd_synth)

    p_serve = sub.add_parser("serve", help="run the annotation HTTP service")
    p_serve.add_argument("--dataset", required=True, help="dataset CSV built by build-dataset")
    p_serve.add_argument("--users", default=None, help="user records for display payloads")
    p_serve.add_argument("--tweets", default=None, help="tweet records for display payloads")
    p_serve.add_argument("--listen", default="127.0.0.1:8000", help="HOST:PORT (default 127.0.0.1:8000)")
    p_serve.add_argument("--data-dir", default=None, help="directory for session snapshots")
    p_serve.add_argument("--ui-dir", default=None, help="static frontend bundle to host at /")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TrustbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
