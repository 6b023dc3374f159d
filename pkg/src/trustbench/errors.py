"""Exception hierarchy shared across the workbench."""


class TrustbenchError(Exception):
    """Base class for all workbench errors."""


class CorpusError(TrustbenchError):
    """Referential or uniqueness violation while assembling a corpus."""


class LexiconError(TrustbenchError):
    """Invalid lexicon entry, weight, or file format."""


class DatasetError(TrustbenchError):
    """Malformed or inconsistent dataset file."""


class DatasetVersionError(DatasetError):
    """Dataset sidecar carries an unsupported schema version."""


class TrainingError(TrustbenchError):
    """Training set violates a learner precondition (empty, single class)."""


class ModelFormatError(TrustbenchError):
    """Model snapshot file is malformed or has an unsupported version."""


class SessionError(TrustbenchError):
    """Invalid operation on an active-learning session."""


class NoPendingBatchError(SessionError):
    """A label submission or batch fetch found no pending batch."""


class BatchPendingError(SessionError):
    """A new batch was requested while one is still awaiting labels."""


class LabelMismatchError(SessionError):
    """Submitted labels do not cover exactly the pending batch."""

    def __init__(self, message, missing=(), extraneous=()):
        super().__init__(message)
        self.missing = tuple(missing)
        self.extraneous = tuple(extraneous)


class StaleBatchError(SessionError):
    """Submission referenced a batch that is no longer pending."""
