"""Per-condition scores and the seeing-cost metric suite."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from ..core.condition import PROTOCOL_CONDITIONS, Condition
from ..core.errors import DataValidationError, MissingCondition
from ..core.transcript import Transcript

logger = logging.getLogger(__name__)

# Diagnosis treats the criterion as met when SSC is this close to zero.
SSC_TOLERANCE = 1e-9

METRIC_NAMES: Tuple[str, ...] = ("tos", "cos", "fos", "ssc", "mg", "ml")

Number = Union[float, np.ndarray]


class Diagnosis(str, Enum):
    """Collapse-mode verdict of a report."""

    COMPLIANT = "compliant"
    POSITIVE_COLLAPSE = "positive_collapse"
    NEGATIVE_COLLAPSE = "negative_collapse"
    TOLL_DOMINANT = "toll_dominant"
    CURSE_DOMINANT = "curse_dominant"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True, eq=False)
class ConditionScores:
    """
    Paired 0/1 scores of one model over a common item set.

    Attributes:
        item_ids: Item ids, sorted; index i of every vector refers to item_ids[i]
        vectors: Per-condition 0/1 score vectors
        model_id: Model evaluated under the VLM conditions
        base_model_id: Model that answered BaseText, if present
        n_unanswered: Pairs that ended without an answer (scored 0)
    """

    item_ids: Tuple[str, ...]
    vectors: Mapping[Condition, np.ndarray]
    model_id: str = ""
    base_model_id: Optional[str] = None
    n_unanswered: int = 0

    def __post_init__(self) -> None:
        n = len(self.item_ids)
        frozen: Dict[Condition, np.ndarray] = {}
        for condition, vector in self.vectors.items():
            arr = np.asarray(vector, dtype=np.int8)
            if arr.shape != (n,):
                raise DataValidationError(
                    f"{condition.value} has {arr.size} scores for {n} items "
                    "(paired design required)"
                )
            arr.flags.writeable = False
            frozen[condition] = arr
        object.__setattr__(self, "item_ids", tuple(self.item_ids))
        object.__setattr__(self, "vectors", frozen)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    @property
    def conditions(self) -> List[Condition]:
        return sorted(self.vectors, key=lambda c: c.order)

    def mean(self, condition: Condition) -> Optional[float]:
        vector = self.vectors.get(condition)
        if vector is None:
            return None
        return float(vector.mean()) if vector.size else 0.0

    def require(self, *conditions: Condition) -> None:
        missing = [c.value for c in conditions if c not in self.vectors]
        if missing:
            raise MissingCondition(f"No scores for condition(s): {', '.join(missing)}")

    @classmethod
    def from_means(
        cls, means: Mapping[Condition, float], n_items: int = 100, model_id: str = "fixture"
    ) -> "ConditionScores":
        """Build scores whose condition means equal the given fractions (rounded to 1/n)."""
        vectors = {}
        for condition, mean in means.items():
            k = int(round(mean * n_items))
            vectors[condition] = np.array([1] * k + [0] * (n_items - k), dtype=np.int8)
        ids = tuple(f"item-{i:06d}" for i in range(n_items))
        return cls(item_ids=ids, vectors=vectors, model_id=model_id)


@dataclass
class MetricReport:
    """
    Metric suite of one run.

    Metric units are accuracy fractions; differences lie in [-1, 1].
    """

    s_full: float
    s_symt: float
    s_symv: float
    tos: float
    cos: float
    fos: float
    ssc: float
    n_items: int
    s_textonly: Optional[float] = None
    s_basetext: Optional[float] = None
    mg: Optional[float] = None
    ml: Optional[float] = None
    ml_raw: Optional[float] = None
    ci: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    diagnosis: Diagnosis = Diagnosis.INDETERMINATE
    bootstrap: Dict[str, int] = field(default_factory=dict)
    model_id: str = ""
    base_model_id: Optional[str] = None
    n_unanswered: int = 0
    violations: List[str] = field(default_factory=list)
    item_patterns: Dict[str, int] = field(default_factory=dict)

    def point(self, name: str) -> Optional[float]:
        return getattr(self, name)

    def to_dict(self) -> Dict[str, Any]:
        """Convert report to its JSON form."""
        return {
            "s_full": self.s_full,
            "s_symt": self.s_symt,
            "s_symv": self.s_symv,
            "s_textonly": self.s_textonly,
            "s_basetext": self.s_basetext,
            "tos": self.tos,
            "cos": self.cos,
            "fos": self.fos,
            "ssc": self.ssc,
            "mg": self.mg,
            "ml": self.ml,
            "ml_raw": self.ml_raw,
            "ci": {name: [lo, hi] for name, (lo, hi) in self.ci.items()},
            "diagnosis": self.diagnosis.value,
            "n_items": self.n_items,
            "bootstrap": dict(self.bootstrap),
            "model_id": self.model_id,
            "base_model_id": self.base_model_id,
            "n_unanswered": self.n_unanswered,
            "violations": list(self.violations),
            "item_patterns": dict(self.item_patterns),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MetricReport":
        """Create report from its JSON form."""
        return cls(
            s_full=data["s_full"],
            s_symt=data["s_symt"],
            s_symv=data["s_symv"],
            tos=data["tos"],
            cos=data["cos"],
            fos=data["fos"],
            ssc=data["ssc"],
            n_items=data["n_items"],
            s_textonly=data.get("s_textonly"),
            s_basetext=data.get("s_basetext"),
            mg=data.get("mg"),
            ml=data.get("ml"),
            ml_raw=data.get("ml_raw"),
            ci={name: (bounds[0], bounds[1]) for name, bounds in data.get("ci", {}).items()},
            diagnosis=Diagnosis(data.get("diagnosis", Diagnosis.INDETERMINATE.value)),
            bootstrap=data.get("bootstrap", {}),
            model_id=data.get("model_id", ""),
            base_model_id=data.get("base_model_id"),
            n_unanswered=data.get("n_unanswered", 0),
            violations=data.get("violations", []),
            item_patterns=data.get("item_patterns", {}),
        )


def metric_values(
    s_full: Number,
    s_symt: Number,
    s_symv: Number,
    s_textonly: Optional[Number] = None,
    s_basetext: Optional[Number] = None,
) -> Dict[str, Optional[Number]]:
    """
    The metric formulas, applied to scalars or to arrays of resampled means.

    ToS = SymT - Full, CoS = SymT - SymV, FoS = Full - SymV,
    SSC = max(ToS, CoS, |FoS|), MG = Full - TextOnly, ML = max(0, TextOnly - BaseText).
    """
    tos = s_symt - s_full
    cos = s_symt - s_symv
    fos = s_full - s_symv
    ssc = np.maximum(np.maximum(tos, cos), np.abs(fos))
    mg = s_full - s_textonly if s_textonly is not None else None
    ml_raw = None
    if s_textonly is not None and s_basetext is not None:
        ml_raw = s_textonly - s_basetext
    ml = np.maximum(0.0, ml_raw) if ml_raw is not None else None
    return {"tos": tos, "cos": cos, "fos": fos, "ssc": ssc, "mg": mg, "ml": ml, "ml_raw": ml_raw}


def _as_float(value: Optional[Number]) -> Optional[float]:
    return None if value is None else float(value)


def item_patterns(scores: ConditionScores) -> Dict[str, int]:
    """Counts of per-item (Full, SymT, SymV) correctness patterns, e.g. "101"."""
    full, symt, symv = (scores.vectors[c] for c in PROTOCOL_CONDITIONS)
    counts = Counter(f"{f}{t}{v}" for f, t, v in zip(full, symt, symv))
    return {f"{p:03b}": counts.get(f"{p:03b}", 0) for p in range(7, -1, -1)}


def compute_metrics(scores: ConditionScores) -> MetricReport:
    """
    Compute the metric suite from condition means.

    MG needs TextOnly and ML needs TextOnly and BaseText; without them those
    fields stay None.

    Raises:
        MissingCondition: Full, SymT or SymV has no scores
    """
    scores.require(*PROTOCOL_CONDITIONS)
    s_full = scores.mean(Condition.FULL)
    s_symt = scores.mean(Condition.SYMT)
    s_symv = scores.mean(Condition.SYMV)
    s_textonly = scores.mean(Condition.TEXT_ONLY)
    s_basetext = scores.mean(Condition.BASE_TEXT)
    assert s_full is not None and s_symt is not None and s_symv is not None

    values = metric_values(s_full, s_symt, s_symv, s_textonly, s_basetext)
    return MetricReport(
        s_full=s_full,
        s_symt=s_symt,
        s_symv=s_symv,
        s_textonly=s_textonly,
        s_basetext=s_basetext,
        tos=float(values["tos"]),
        cos=float(values["cos"]),
        fos=float(values["fos"]),
        ssc=float(values["ssc"]),
        mg=_as_float(values["mg"]),
        ml=_as_float(values["ml"]),
        ml_raw=_as_float(values["ml_raw"]),
        n_items=scores.n_items,
        model_id=scores.model_id,
        base_model_id=scores.base_model_id,
        n_unanswered=scores.n_unanswered,
        item_patterns=item_patterns(scores),
    )


def find_violations(report: MetricReport) -> List[str]:
    """Criterion clauses that the intervals show to be broken."""
    violations = []
    if "tos" in report.ci and report.ci["tos"][0] > 0:
        violations.append("tos>0")
    if "cos" in report.ci and report.ci["cos"][0] > 0:
        violations.append("cos>0")
    if "fos" in report.ci and (report.ci["fos"][0] > 0 or report.ci["fos"][1] < 0):
        violations.append("fos!=0")
    return violations


def diagnose(report: MetricReport) -> Diagnosis:
    """
    Collapse-mode diagnosis from interval sign tests.

    Checked in order: FoS interval above zero (positive collapse), FoS
    interval below zero (negative collapse), ToS interval above zero, CoS
    interval above zero, SSC point estimate zero (compliant); otherwise
    indeterminate.
    """
    fos_lo, fos_hi = report.ci.get("fos", (report.fos, report.fos))
    if fos_lo > 0:
        return Diagnosis.POSITIVE_COLLAPSE
    if fos_hi < 0:
        return Diagnosis.NEGATIVE_COLLAPSE
    if report.ci.get("tos", (report.tos, report.tos))[0] > 0:
        return Diagnosis.TOLL_DOMINANT
    if report.ci.get("cos", (report.cos, report.cos))[0] > 0:
        return Diagnosis.CURSE_DOMINANT
    if abs(report.ssc) <= SSC_TOLERANCE:
        return Diagnosis.COMPLIANT
    return Diagnosis.INDETERMINATE


def scores_from_transcripts(transcripts: Iterable[Transcript]) -> ConditionScores:
    """
    Assemble paired scores from scored transcripts.

    BaseText transcripts may come from a different (base) model; every other
    condition must come from one model. Items are ordered by id.

    Raises:
        DataValidationError: Duplicate pairs, mixed models, or unpaired item sets
    """
    by_condition: Dict[Condition, Dict[str, int]] = {}
    model_ids = set()
    base_ids = set()
    unanswered = 0
    for t in transcripts:
        bucket = by_condition.setdefault(t.condition, {})
        if t.item_id in bucket:
            raise DataValidationError(
                f"Duplicate transcript for ({t.item_id}, {t.condition.value})"
            )
        bucket[t.item_id] = int(t.score) if t.answered else 0
        if not t.answered:
            unanswered += 1
        (base_ids if t.condition == Condition.BASE_TEXT else model_ids).add(t.model_id)

    if len(model_ids) > 1 or len(base_ids) > 1:
        raise DataValidationError(
            f"Transcripts mix models: {sorted(model_ids)} / base {sorted(base_ids)}"
        )

    id_sets = [frozenset(bucket) for bucket in by_condition.values()]
    if id_sets and any(s != id_sets[0] for s in id_sets[1:]):
        raise DataValidationError("Conditions cover different item sets (paired design required)")

    item_ids = tuple(sorted(id_sets[0])) if id_sets else ()
    vectors = {
        condition: np.array([bucket[i] for i in item_ids], dtype=np.int8)
        for condition, bucket in by_condition.items()
    }
    return ConditionScores(
        item_ids=item_ids,
        vectors=vectors,
        model_id=next(iter(model_ids), ""),
        base_model_id=next(iter(base_ids), None),
        n_unanswered=unanswered,
    )
