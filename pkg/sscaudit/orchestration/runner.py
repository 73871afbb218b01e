"""Evaluation runner: executes the modality protocol over a dataset."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.bundle import make_prompt_bundle
from ..core.condition import Condition
from ..core.errors import ModelError, UsageError
from ..core.item import EvaluationItem
from ..core.transcript import Transcript
from ..models.base import ModelClient
from ..scoring.extract import canonical_gold, extract_answer, score_item

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """
    Output of a run.

    Attributes:
        transcripts: One transcript per (item, condition), sorted by (item_id, condition)
        model_ids: Models that answered, by condition
    """

    transcripts: List[Transcript] = field(default_factory=list)
    model_ids: Dict[str, str] = field(default_factory=dict)

    @property
    def n_pairs(self) -> int:
        return len(self.transcripts)

    @property
    def n_unanswered(self) -> int:
        return sum(1 for t in self.transcripts if not t.answered)

    @property
    def cache_hits(self) -> int:
        return sum(1 for t in self.transcripts if t.cache_hit)

    def summary(self) -> Dict[str, int]:
        return {
            "pairs": self.n_pairs,
            "unanswered": self.n_unanswered,
            "cache_hits": self.cache_hits,
        }


class EvaluationRunner:
    """
    Runs every (item, condition) pair through a model client.

    BaseText pairs go to the base model; all other conditions go to the
    model under test. Pairs are independent and run on a thread pool of
    `parallel` workers; output order does not depend on completion order.
    """

    def __init__(
        self,
        model: ModelClient,
        base_model: Optional[ModelClient] = None,
        parallel: int = 4,
    ):
        """
        Initialize the runner.

        Args:
            model: Model under test
            base_model: Text-only base model answering BaseText pairs
            parallel: Maximum number of in-flight pairs
        """
        if parallel < 1:
            raise ValueError("parallel must be >= 1")
        self.model = model
        self.base_model = base_model
        self.parallel = parallel

    def client_for(self, condition: Condition) -> ModelClient:
        if condition == Condition.BASE_TEXT:
            if self.base_model is None:
                raise UsageError("Condition basetext needs a base model (--base-model)")
            return self.base_model
        return self.model

    def execute_pair(self, item: EvaluationItem, condition: Condition) -> Transcript:
        """
        Answer, extract and score one pair.

        Model errors do not propagate: the pair is recorded as unanswered
        and scored 0.
        """
        client = self.client_for(condition)
        bundle = make_prompt_bundle(item, condition)

        try:
            transcript = client.answer(bundle)
        except ModelError as e:
            logger.error(f"{item.id}/{condition.value}: {type(e).__name__}: {e}")
            return Transcript(
                item_id=item.id,
                condition=condition,
                model_id=client.model_id,
                attempt_count=e.attempts,
                answered=False,
                error=f"{type(e).__name__}: {e}",
            )

        extracted = extract_answer(transcript.raw_text, item)
        return replace(
            transcript,
            extracted=extracted,
            score=score_item(extracted, canonical_gold(item)),
        )

    def run(self, items: Sequence[EvaluationItem], conditions: Iterable[Condition]) -> RunResult:
        """
        Evaluate items under the conditions.

        Args:
            items: Items to evaluate (translated when SymV is requested)
            conditions: Conditions to present

        Returns:
            RunResult with sorted transcripts
        """
        conditions = list(conditions)
        pairs: List[Tuple[EvaluationItem, Condition]] = [
            (item, condition) for item in items for condition in conditions
        ]
        for condition in conditions:
            self.client_for(condition)

        logger.info(
            f"Running {len(pairs)} pairs ({len(items)} items x "
            f"{','.join(c.value for c in conditions)}) on {self.model.model_id}"
        )

        if self.parallel == 1 or len(pairs) <= 1:
            transcripts = [self.execute_pair(item, condition) for item, condition in pairs]
        else:
            with ThreadPoolExecutor(max_workers=self.parallel) as pool:
                transcripts = list(pool.map(lambda pair: self.execute_pair(*pair), pairs))

        result = RunResult(
            transcripts=sorted(transcripts, key=lambda t: t.sort_key),
            model_ids={c.value: self.client_for(c).model_id for c in conditions},
        )
        logger.info(
            f"Run finished: {result.n_pairs} pairs, {result.n_unanswered} unanswered, "
            f"{result.cache_hits} cache hits"
        )
        return result
