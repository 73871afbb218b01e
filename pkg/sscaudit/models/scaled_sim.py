"""Simulated model family whose symbolic ceiling grows with scale while the
visual pathway stays a fixed fraction of it."""

import math
from typing import Dict, Mapping, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..core.bundle import PromptBundle
from ..core.condition import Condition
from ..core.errors import DataValidationError, InvalidParams
from ..core.item import EvaluationItem
from ..core.transcript import Transcript
from .mocks import UNKNOWN_ANSWER, wrong_answer


def logistic(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


class ScalingFamily(BaseModel):
    """
    Parameters of the simulated family.

    p_SymT(N) = logistic(a * ln N + b), p_Full = phi * p_SymT, p_SymV = psi * p_Full.

    Attributes:
        a: Log-scale slope of the symbolic ceiling
        b: Intercept of the symbolic ceiling
        phi: Fraction of the ceiling reached with a separate image (1 = no bottleneck)
        psi: Fraction of Full reached when everything arrives as pixels
        phi_schedule: Optional per-scale override of phi
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float = 0.35
    b: float = -6.0
    phi: float = Field(default=0.7, gt=0.0, le=1.0)
    psi: float = Field(default=1.0, gt=0.0, le=1.0)
    phi_schedule: Optional[Dict[float, float]] = None

    @field_validator("phi_schedule")
    @classmethod
    def _check_schedule(cls, value: Optional[Dict[float, float]]) -> Optional[Dict[float, float]]:
        if value is None:
            return value
        for scale, phi in value.items():
            if scale <= 0 or not 0.0 < phi <= 1.0:
                raise ValueError(f"phi_schedule entry {scale}: {phi} is out of range")
        return value

    def phi_at(self, scale: float) -> float:
        if self.phi_schedule and scale in self.phi_schedule:
            return self.phi_schedule[scale]
        return self.phi

    def probabilities(self, scale: float) -> Dict[Condition, float]:
        """Success probability per protocol condition at a scale."""
        if scale <= 0:
            raise InvalidParams(f"scale must be > 0, got {scale}")
        p_symt = logistic(self.a * math.log(scale) + self.b)
        p_full = self.phi_at(scale) * p_symt
        return {
            Condition.SYMT: p_symt,
            Condition.FULL: p_full,
            Condition.SYMV: self.psi * p_full,
        }

    def expected_tos(self, scale: float) -> float:
        p = self.probabilities(scale)
        return p[Condition.SYMT] - p[Condition.FULL]


class ScaledSimModel:
    """
    One member of the simulated family.

    Item latents are stratified: sorted item ids receive a seeded permutation
    of the n strata [j/n, (j+1)/n) plus uniform jitter, so each condition's
    measured accuracy is within 1/n of its probability. The latent is shared
    across conditions.
    """

    def __init__(
        self,
        scale: float,
        family: ScalingFamily,
        items: Mapping[str, EvaluationItem],
        seed: int = 0,
    ):
        if scale <= 0:
            raise InvalidParams(f"scale must be > 0, got {scale}")
        self.scale = scale
        self.family = family
        self.items = items
        self.probabilities = family.probabilities(scale)

        ids = sorted(items)
        rng = np.random.default_rng(seed)
        n = len(ids)
        strata = rng.permutation(n)
        jitter = rng.random(n)
        draws = rng.random(n)
        self._latent = {i: (strata[j] + jitter[j]) / n for j, i in enumerate(ids)}
        self._draw = {i: float(draws[j]) for j, i in enumerate(ids)}

    @property
    def model_id(self) -> str:
        return f"sim:{self.scale:g}"

    def answer(self, bundle: PromptBundle) -> Transcript:
        item = self.items.get(bundle.item_id)
        if item is None:
            raise DataValidationError(f"Simulated model has no item '{bundle.item_id}'")

        p = self.probabilities.get(bundle.condition)
        if p is None:
            raw = UNKNOWN_ANSWER
        elif self._latent[item.id] < p:
            raw = item.gold
        else:
            raw = wrong_answer(item, self._draw[item.id])
        return Transcript(
            item_id=bundle.item_id,
            condition=bundle.condition,
            model_id=self.model_id,
            raw_text=raw,
            attempt_count=1,
        )


def make_scaled_sim(
    scale: float,
    family: ScalingFamily,
    items: Mapping[str, EvaluationItem],
    seed: int = 0,
) -> ScaledSimModel:
    """
    Instantiate the family member at a scale.

    Raises:
        InvalidParams: scale <= 0
    """
    return ScaledSimModel(scale, family, items, seed)
