"""Prompt bundles: what a model actually receives for (item, condition)."""

from dataclasses import dataclass
from typing import Any, Dict, Tuple

from .condition import Condition
from .errors import MissingImage, MissingTranslation
from .item import DELIMITER_LINE, EvaluationItem
from .raster import Raster


@dataclass(frozen=True)
class PromptBundle:
    """
    Model input for one item under one condition.

    Attributes:
        item_id: ID of the item the bundle was built from
        condition: Condition the bundle realizes
        images: Ordered image payloads (empty for text-only conditions)
        text: Text payload (empty for SymV)
    """

    item_id: str
    condition: Condition
    images: Tuple[Raster, ...] = ()
    text: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """Describe the bundle; images appear by digest."""
        return {
            "item_id": self.item_id,
            "condition": self.condition.value,
            "images": [image.digest() for image in self.images],
            "text": self.text,
        }


def make_prompt_bundle(item: EvaluationItem, condition: Condition) -> PromptBundle:
    """
    Build the prompt contents of a condition.

    Full carries [V] and T; SymT carries T, the delimiter line and V_label as
    text only; SymV carries the composite only; TextOnly and BaseText carry T.

    Raises:
        MissingImage: Full or SymV requested for an item without V
        MissingTranslation: SymV requested before translation
    """
    if condition.uses_images and item.v is None:
        raise MissingImage(f"Item '{item.id}' has no scene image for condition {condition.value}")

    if condition == Condition.FULL:
        return PromptBundle(item.id, condition, (item.v,), item.t)

    if condition == Condition.SYMT:
        text = f"{item.t}\n{DELIMITER_LINE}\n{item.v_label}"
        return PromptBundle(item.id, condition, (), text)

    if condition == Condition.SYMV:
        if item.symv_composite is None:
            raise MissingTranslation(
                f"Item '{item.id}' is not translated; run `ssc-audit translate` first"
            )
        return PromptBundle(item.id, condition, (item.symv_composite,), "")

    # TextOnly and BaseText present the same bundle; they differ in which model answers.
    return PromptBundle(item.id, condition, (), item.t)
