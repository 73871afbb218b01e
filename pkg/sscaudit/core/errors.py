"""Exception hierarchy for ssc-audit.

Every error carries the process exit code the CLI reports for it.
"""

from typing import List, Optional


class SSCAuditError(Exception):
    """Base class for all harness errors."""

    exit_code: int = 1


class ConfigError(SSCAuditError):
    """Invalid flags, configuration values or parameters."""

    exit_code = 2


class UsageError(ConfigError):
    """Unknown names on the command surface (task, condition, model spec)."""

    pass


class InvalidParams(ConfigError):
    """Model or family parameters outside their domain."""

    pass


class InvalidGrid(ConfigError):
    """Scaling grid is not strictly increasing or has too few points."""

    pass


class TooFewPoints(ConfigError):
    """A scaling curve has too few rows for a divergence verdict."""

    pass


class DataValidationError(SSCAuditError):
    """Items, images or transcripts violate their contracts."""

    exit_code = 3


class ItemValidationError(DataValidationError):
    """One or more items broke an EvaluationItem invariant."""

    def __init__(self, message: str, violations: Optional[List[str]] = None):
        super().__init__(message)
        self.violations = violations or []


class MissingTranslation(DataValidationError):
    """SymV requested for an item that has not been translated."""

    pass


class MissingImage(DataValidationError):
    """Full or SymV requested for an item without a scene image."""

    pass


class UnsupportedCharacter(DataValidationError):
    """Text holds a character the bitmap font cannot render."""

    def __init__(self, char: str, position: int):
        super().__init__(
            f"unsupported character {char!r} (U+{ord(char):04X}) at position {position}"
        )
        self.char = char
        self.position = position


class UnrecognizedGlyph(DataValidationError):
    """A raster cell matches no font entry (corruption or config mismatch)."""

    pass


class Exhausted(DataValidationError):
    """A generator could not satisfy its constraints within the resample budget."""

    pass


class UnknownTaskKind(DataValidationError):
    """No oracle exists for the item's task kind."""

    pass


class MissingCondition(DataValidationError):
    """A metric needs a condition that has no scores."""

    pass


class TooFewItems(DataValidationError):
    """Too few paired items for a bootstrap."""

    pass


class NoCompleteWindow(DataValidationError):
    """The audit engine has not completed a window yet."""

    pass


class ModelError(SSCAuditError):
    """A model back-end failed to produce an answer."""

    exit_code = 4
    retryable: bool = False
    attempts: int = 0


class TransportError(ModelError):
    """Connection failure or 5xx response."""

    retryable = True


class Timeout(ModelError):
    """Request exceeded its deadline."""

    retryable = True


class RateLimited(ModelError):
    """HTTP 429."""

    retryable = True


class MalformedResponse(ModelError):
    """The endpoint answered, but not with a usable chat completion."""

    retryable = False


class IncompleteRunError(SSCAuditError):
    """Some (item, condition) pairs ended unanswered."""

    exit_code = 5

    def __init__(self, message: str, unanswered: int = 0):
        super().__init__(message)
        self.unanswered = unanswered
