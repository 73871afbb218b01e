"""Interface every model back-end satisfies."""

from typing import Protocol

from ..core.bundle import PromptBundle
from ..core.transcript import Transcript


class ModelClient(Protocol):
    """Protocol for model back-ends: M(images, text) -> raw answer."""

    @property
    def model_id(self) -> str:
        """Identifier recorded in transcripts."""
        ...

    def answer(self, bundle: PromptBundle) -> Transcript:
        """
        Answer one prompt bundle.

        The returned transcript carries raw_text, timing, attempt and cache
        fields; extraction and scoring happen in the runner.

        Raises:
            ModelError: The back-end failed (retryable subclasses were retried)
        """
        ...
