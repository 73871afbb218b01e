"""Mock models with analytically known behavior.

All mocks draw one latent uniform per item, shared across conditions, so
condition comparisons are paired at the item level. An answer is correct
when the latent falls below the condition's success probability.
"""

import logging
import threading
from collections import OrderedDict
from hashlib import sha256
from typing import Dict, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.bundle import PromptBundle
from ..core.condition import Condition
from ..core.errors import DataValidationError
from ..core.item import EvaluationItem
from ..core.transcript import Transcript
from ..taskgen.oracle import Insufficient, oracle_solve

logger = logging.getLogger(__name__)

UNKNOWN_ANSWER = "unknown"
ORACLE_MEMO_SIZE = 4096

MockKind = Literal[
    "oracle", "blind_prior", "lossy_encoder", "fusion_failure", "cross_modal_override"
]


class MockSpec(BaseModel):
    """
    Parameters of a mock model.

    Attributes:
        kind: Behavior family
        epsilon: Per-glyph corruption probability (lossy_encoder)
        delta: Penalty when information is split across modalities (fusion_failure)
        q_single: Success probability with single-modality input (fusion_failure)
        prior_acc: Probability that a prior guess is right (blind_prior)
        rho: Probability that text overrides the image under Full (cross_modal_override)
        seed: Seed of the latent draws
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: MockKind
    epsilon: float = Field(default=0.05, ge=0.0, le=1.0)
    delta: float = Field(default=0.2, ge=0.0, le=1.0)
    q_single: float = Field(default=0.9, ge=0.0, le=1.0)
    prior_acc: float = Field(default=0.25, ge=0.0, le=1.0)
    rho: float = Field(default=0.5, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_delta(self) -> "MockSpec":
        if self.delta > self.q_single:
            raise ValueError("delta cannot exceed q_single")
        return self

    @property
    def model_id(self) -> str:
        relevant = {
            "oracle": (),
            "blind_prior": ("prior_acc",),
            "lossy_encoder": ("epsilon",),
            "fusion_failure": ("q_single", "delta"),
            "cross_modal_override": ("rho",),
        }[self.kind]
        params = ",".join(f"{name}={getattr(self, name):g}" for name in relevant)
        return f"mock:{self.kind}" + (f":{params}" if params else "")


def _uniforms(*parts: object) -> Tuple[float, float]:
    """Two independent uniforms in [0, 1) from a hash of parts."""
    digest = sha256(":".join(str(p) for p in parts).encode("utf-8")).digest()
    return (
        int.from_bytes(digest[:8], "big") / 2.0**64,
        int.from_bytes(digest[8:16], "big") / 2.0**64,
    )


def wrong_answer(item: EvaluationItem, draw: float) -> str:
    """A deterministic incorrect answer for item, selected by draw in [0, 1)."""
    if item.choices:
        others = [c for c in item.choices if c != item.gold]
        if others:
            return others[int(draw * len(others))]
        return UNKNOWN_ANSWER
    try:
        return str(int(item.gold) + 1 + int(draw * 9))
    except ValueError:
        return UNKNOWN_ANSWER


class MockModel:
    """
    Model client realizing a MockSpec.

    Mocks read hidden item fields (gold, meta); they are measurement
    instruments with known behavior, not systems under test.
    """

    def __init__(self, spec: MockSpec, items: Mapping[str, EvaluationItem]):
        """
        Initialize mock.

        Args:
            spec: Mock parameters
            items: Items the mock may be asked about, by id
        """
        self.spec = spec
        self.items = items
        self._oracle_memo: "OrderedDict[tuple, Optional[str]]" = OrderedDict()
        self._lock = threading.Lock()

    @property
    def model_id(self) -> str:
        return self.spec.model_id

    def _item(self, item_id: str) -> EvaluationItem:
        item = self.items.get(item_id)
        if item is None:
            raise DataValidationError(f"Mock model has no item '{item_id}'")
        return item

    def _oracle(self, item: EvaluationItem, condition: Condition) -> Optional[str]:
        """Oracle answer, or None when the bundle is insufficient; LRU-memoized by content."""
        key = (
            item.task_kind,
            condition,
            item.t,
            item.v_label,
            item.v.digest() if item.v is not None else None,
            item.symv_composite.digest() if item.symv_composite is not None else None,
        )
        with self._lock:
            if key in self._oracle_memo:
                self._oracle_memo.move_to_end(key)
                return self._oracle_memo[key]
        result = oracle_solve(item, condition)
        value = None if isinstance(result, Insufficient) else result
        with self._lock:
            self._oracle_memo[key] = value
            if len(self._oracle_memo) > ORACLE_MEMO_SIZE:
                self._oracle_memo.popitem(last=False)
        return value

    def success_probability(self, item: EvaluationItem, condition: Condition) -> Optional[float]:
        """
        Probability of a correct answer, or None when the mock answers "unknown".
        """
        spec = self.spec
        if spec.kind == "blind_prior":
            if condition == Condition.SYMT and self._oracle(item, condition) is not None:
                return 1.0
            return spec.prior_acc

        if self._oracle(item, condition) is None:
            return None

        if spec.kind == "oracle":
            return 1.0
        if spec.kind == "lossy_encoder":
            critical = int(item.meta.get("critical_features", 0))
            question = int(item.meta.get("question_glyphs", 0))
            keep = 1.0 - spec.epsilon
            if condition == Condition.FULL:
                return keep**critical
            if condition == Condition.SYMV:
                return keep ** (critical + question)
            return 1.0
        if spec.kind == "fusion_failure":
            if condition == Condition.FULL:
                return spec.q_single - spec.delta
            return spec.q_single
        # cross_modal_override is decided in decide()
        return 1.0

    def decide(self, item: EvaluationItem, condition: Condition) -> str:
        """The mock's answer text for item under condition."""
        latent, draw = _uniforms(self.spec.seed, self.spec.kind, item.id)

        if self.spec.kind == "cross_modal_override":
            if self._oracle(item, condition) is None:
                return UNKNOWN_ANSWER
            if condition == Condition.FULL and latent < self.spec.rho:
                return item.choices[0] if item.choices else UNKNOWN_ANSWER
            return item.gold

        p = self.success_probability(item, condition)
        if p is None:
            return UNKNOWN_ANSWER
        return item.gold if latent < p else wrong_answer(item, draw)

    def answer(self, bundle: PromptBundle) -> Transcript:
        item = self._item(bundle.item_id)
        return Transcript(
            item_id=bundle.item_id,
            condition=bundle.condition,
            model_id=self.model_id,
            raw_text=self.decide(item, bundle.condition),
            attempt_count=1,
        )
