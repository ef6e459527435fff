"""Exception hierarchy for the annotation toolkit.

Everything raised on purpose derives from :class:`AnnotatorError`, so callers
(notably the CLI) can map failures to exit codes without catching ``Exception``.
"""


class AnnotatorError(Exception):
    """Base class for all toolkit errors."""


# -- corpus parsing / serialization --


class MalformedLine(AnnotatorError):
    """A dialogue line does not match the ``Speaker: text`` grammar."""


class EmptyDialogue(AnnotatorError):
    """Dialogue text contains no utterance lines."""


class DuplicateId(AnnotatorError):
    """Two corpus records share an id."""


class MalformedRecord(AnnotatorError):
    """A corpus record is not valid JSON or lacks required fields."""


class IoError(AnnotatorError):
    """An input path is missing or unreadable."""


class TagGrammarError(AnnotatorError):
    """Annotated text violates the tag grammar (stray or misplaced tag)."""


# -- score bundles --


class TooShort(AnnotatorError):
    """Dialogue has fewer than two utterances; no context-response pairs exist."""


class SchemaError(AnnotatorError):
    """A score file object does not match the interchange schema."""


class SpanCoverageError(SchemaError):
    """Word spans do not partition the response subword positions."""


class DimensionMismatch(SchemaError):
    """An embedding vector has the wrong length."""


class MissingRecord(SchemaError):
    """A bundle lacks the loss record for some response index."""


class NonFiniteValue(SchemaError):
    """A loss or embedding component is NaN or infinite."""


class ZeroEmbedding(SchemaError):
    """An embedding is the zero vector; cosine similarity is undefined."""


# -- annotation --


class BundleMismatch(AnnotatorError):
    """A score bundle does not align with the dialogue it is applied to."""


class InvalidHParams(AnnotatorError):
    """A hyper-parameter is outside its validity range."""


# -- hyper-parameter tools --


class MissingSummary(AnnotatorError):
    """A corpus record lacks the reference summary required here."""


class MissingBundle(AnnotatorError):
    """No score bundle exists for a dialogue id."""


# -- baselines --


class TagCountMismatch(AnnotatorError):
    """POS tag count differs from the utterance word count."""
