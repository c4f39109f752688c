"""Exception hierarchy shared across the package."""


class TopoeditError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedFormatError(TopoeditError):
    """Input file is not one of the supported image formats."""


class CorruptImageError(TopoeditError):
    """File looked like a supported format but could not be decoded."""


class ImageIoError(TopoeditError):
    """Reading or writing an image failed at the filesystem level."""


class DimensionMismatchError(TopoeditError):
    """Field, mask, or image dimensions do not line up."""


class MalformedTreesError(TopoeditError):
    """Join and split trees do not describe the same node set."""


class SaddleNotFoundError(TopoeditError):
    """A feature pair references a saddle that is not in the tree."""


class ScaleOutOfRangeError(TopoeditError):
    """Transfer-function scale violates its documented bound."""


class ZeroPersistenceError(TopoeditError):
    """Gamma correction needs a feature whose birth and death differ."""


class NoSelectionError(TopoeditError):
    """An edit was requested while no feature selection is active."""


class InvalidPairIdError(TopoeditError):
    """A pair id does not exist at the current revision."""


class ScriptParseError(TopoeditError):
    """Edit script is syntactically or structurally invalid."""


class StepPreconditionError(TopoeditError):
    """A script step could not run; carries the offending step index."""

    def __init__(self, step_index: int, message: str):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index
