"""Trust scoring and human-in-the-loop active learning for archived corpora.

The package turns archived user/tweet records into per-user influence
scorecards, assembles them into a normalized 19-feature dataset, and trains
native random-forest or linear-SVM classifiers inside a pool-based
active-learning loop where the annotator is either a simulated oracle or a
human driving the bundled HTTP service.
"""

from .active import (
    Session,
    SimulatedOracle,
    al_run,
    al_step,
    entropy_score,
    initialize,
    margin_score,
    rank_pool,
    select_batch,
    submit_labels,
    uncertainty_score,
    write_curves,
)
from .dataset import (
    FEATURE_NAMES,
    UNBOUNDED_FEATURES,
    FeatureSchema,
    FeatureVector,
    SplitDataset,
    build_dataset,
    load_dataset,
    save_dataset,
)
from .errors import (
    BatchPendingError,
    CorpusError,
    DatasetError,
    DatasetVersionError,
    LabelMismatchError,
    LexiconError,
    ModelFormatError,
    NoPendingBatchError,
    SessionError,
    StaleBatchError,
    TrainingError,
    TrustbenchError,
)
from .features import basic_features
from .learners import (
    ForestTrustClassifier,
    LinearSvmTrustClassifier,
    ProbEstimate,
    accuracy,
    load_model,
    make_learner,
    save_model,
    train_forest,
    train_svm,
)
from .records import (
    Corpus,
    TweetRecord,
    UserRecord,
    build_corpus,
    filter_eligible,
    load_corpus,
    parse_tweets,
    parse_users,
)
from .scoring import (
    ScoreCard,
    h_index,
    influence_score,
    score_corpus,
    score_user,
    social_reputation,
    tweet_credibility,
)
from .sentiment import Lexicon, default_lexicon, load_lexicon, sentiment_counts, sentiment_score
from .synth import DEFAULT_RULE_WEIGHTS, LabelRule, generate_synthetic
from .validation import TRUSTWORTHY, UNTRUSTWORTHY

__version__ = "0.1.0"

__all__ = [
    "BatchPendingError",
    "Corpus",
    "CorpusError",
    "DEFAULT_RULE_WEIGHTS",
    "DatasetError",
    "DatasetVersionError",
    "FEATURE_NAMES",
    "FeatureSchema",
    "FeatureVector",
    "ForestTrustClassifier",
    "LabelMismatchError",
    "LabelRule",
    "LexiconError",
    "Lexicon",
    "LinearSvmTrustClassifier",
    "ModelFormatError",
    "NoPendingBatchError",
    "ProbEstimate",
    "ScoreCard",
    "Session",
    "SessionError",
    "SimulatedOracle",
    "SplitDataset",
    "StaleBatchError",
    "TRUSTWORTHY",
    "TrainingError",
    "TrustbenchError",
    "TweetRecord",
    "UNBOUNDED_FEATURES",
    "UNTRUSTWORTHY",
    "UserRecord",
    "accuracy",
    "al_run",
    "al_step",
    "basic_features",
    "build_corpus",
    "build_dataset",
    "default_lexicon",
    "entropy_score",
    "filter_eligible",
    "generate_synthetic",
    "h_index",
    "influence_score",
    "initialize",
    "load_corpus",
    "load_dataset",
    "load_lexicon",
    "load_model",
    "make_learner",
    "margin_score",
    "parse_tweets",
    "parse_users",
    "rank_pool",
    "save_dataset",
    "save_model",
    "score_corpus",
    "score_user",
    "select_batch",
    "sentiment_counts",
    "sentiment_score",
    "social_reputation",
    "submit_labels",
    "train_forest",
    "train_svm",
    "tweet_credibility",
    "uncertainty_score",
    "write_curves",
]
