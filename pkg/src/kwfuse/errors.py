"""Exception hierarchy for the decoding engine.

Every error raised by the package derives from :class:`KwfuseError` so
callers (and the CLI's exit-code mapping) can distinguish engine errors
from programming mistakes.
"""


class KwfuseError(Exception):
    """Base class for all engine errors."""


# --- vocabulary / keyword construction ---------------------------------


class UnknownCharacter(KwfuseError):
    """Text contains a span no vocabulary entry covers."""


class EmptyKeyword(KwfuseError):
    """Keyword surface is blank after trimming."""


class UntokenizableKeyword(KwfuseError):
    """Keyword surface cannot be tokenized under the active vocabulary."""


class DuplicateKeyword(KwfuseError):
    """Two keywords share an identical token-id sequence."""


# --- scorers / replay files --------------------------------------------


class BadDims(KwfuseError):
    """Scorer dimensions are out of their legal range."""


class TokenOutOfRange(KwfuseError):
    """Token id does not fall in [0, V)."""


class ReplayPathDiverged(KwfuseError):
    """Consumed prefix left the recorded forced path."""


class ReplayExhausted(KwfuseError):
    """Stepped past the last recorded position."""


class BadMagic(KwfuseError):
    """File does not start with the expected magic/version."""


class VocabularyMismatch(KwfuseError):
    """Replay header digest does not match the bound vocabulary."""


class TruncatedBody(KwfuseError):
    """File body is shorter than its header declares."""


# --- fusion math --------------------------------------------------------


class NotADistribution(KwfuseError):
    """Vector is not a probability distribution within tolerance."""


class LengthMismatch(KwfuseError):
    """Paired vectors differ in length."""


class NonFiniteInput(KwfuseError):
    """Input contains NaN or infinity."""


class DimMismatch(KwfuseError):
    """Hidden-state or weight dimensions are inconsistent."""


# --- decoding -----------------------------------------------------------


class ZeroProbabilityChoice(KwfuseError):
    """Expansion requested for a zero-probability outcome."""


class AlreadyFinished(KwfuseError):
    """Expansion requested on a finished hypothesis."""


# --- supervision / metrics ----------------------------------------------


class ZeroTargetProbability(KwfuseError):
    """A loss target was assigned probability zero."""


class EmptyReference(KwfuseError):
    """Reference has no units; error rates are undefined."""


class EmptyEvaluation(KwfuseError):
    """No utterance ids shared between hypotheses and references."""
