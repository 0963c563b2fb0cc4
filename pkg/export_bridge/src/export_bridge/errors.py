"""Exception hierarchy for the export bridge.

Every failure the package raises on purpose derives from ``ExportError``
so callers can catch one type at the boundary (the CLI maps it to exit
status 2).
"""


class ExportError(Exception):
    """Base class for all export-bridge failures."""


class TokenizerMismatch(ExportError):
    """The acoustic and language checkpoints disagree on the character vocabulary."""


class AudioLoadError(ExportError):
    """The audio file is missing, unreadable, or in an unsupported format."""


class CheckpointError(ExportError):
    """A checkpoint directory is missing files or holds invalid contents."""
