"""Scale sweeps over the simulated family and the divergence verdict."""

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from scipy.stats import spearmanr

from ..core.condition import PROTOCOL_CONDITIONS
from ..core.errors import InvalidGrid, TooFewPoints
from ..core.item import EvaluationItem
from ..models.scaled_sim import ScalingFamily, make_scaled_sim
from ..orchestration.runner import EvaluationRunner
from ..scoring.bootstrap import bootstrap_ci, half_width
from ..scoring.metrics import compute_metrics, scores_from_transcripts
from ..utils.hashing import items_digest, stable_seed

logger = logging.getLogger(__name__)

MIN_GRID_POINTS = 5
RHO_THRESHOLD = 0.9
SEPARATION_FACTOR = 2.0

CURVE_COLUMNS = ("scale", "s_symt", "s_full", "s_symv", "tos", "cos", "fos", "ssc")


class Verdict(str, Enum):
    DIVERGING = "diverging"
    FLAT = "flat"
    CONVERGING = "converging"


@dataclass(frozen=True)
class CurveRow:
    """Measured metrics at one scale."""

    scale: float
    s_symt: float
    s_full: float
    s_symv: float
    tos: float
    cos: float
    fos: float
    ssc: float
    tos_ci: Tuple[float, float] = (0.0, 0.0)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {name: getattr(self, name) for name in CURVE_COLUMNS}
        data["tos_ci"] = list(self.tos_ci)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CurveRow":
        ci = data.get("tos_ci", (0.0, 0.0))
        return cls(
            **{name: float(data[name]) for name in CURVE_COLUMNS},
            tos_ci=(float(ci[0]), float(ci[1])),
        )


@dataclass
class ScalingCurve:
    """
    Metric curve of one sweep.

    Attributes:
        rows: One row per grid point, ascending scale
        family: Family parameters used
        items_hash: Digest of the item set
        seed: Sweep seed
        n_items: Items evaluated per point
    """

    rows: List[CurveRow]
    family: ScalingFamily
    items_hash: str = ""
    seed: int = 0
    n_items: int = 0

    def __post_init__(self) -> None:
        self.rows = sorted(self.rows, key=lambda r: r.scale)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": [row.to_dict() for row in self.rows],
            "family": self.family.model_dump(),
            "items_hash": self.items_hash,
            "seed": self.seed,
            "n_items": self.n_items,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScalingCurve":
        return cls(
            rows=[CurveRow.from_dict(r) for r in data["rows"]],
            family=ScalingFamily(**data.get("family", {})),
            items_hash=data.get("items_hash", ""),
            seed=int(data.get("seed", 0)),
            n_items=int(data.get("n_items", 0)),
        )


@dataclass(frozen=True)
class DivergenceResult:
    verdict: Verdict
    rho: float
    tos_change: float
    pooled_half_width: float
    thresholds: Dict[str, float] = field(
        default_factory=lambda: {"rho": RHO_THRESHOLD, "separation": SEPARATION_FACTOR}
    )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "rho": self.rho,
            "tos_change": self.tos_change,
            "pooled_half_width": self.pooled_half_width,
            "thresholds": dict(self.thresholds),
        }


def check_grid(grid: Sequence[float]) -> List[float]:
    """
    Validate a scale grid.

    Raises:
        InvalidGrid: Fewer than 5 points, non-positive, or not strictly increasing
    """
    points = [float(n) for n in grid]
    if len(points) < MIN_GRID_POINTS:
        raise InvalidGrid(f"Grid needs at least {MIN_GRID_POINTS} points, got {len(points)}")
    if any(n <= 0 for n in points):
        raise InvalidGrid("Grid scales must be > 0")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise InvalidGrid(f"Grid must be strictly increasing: {points}")
    return points


def run_point(
    scale: float,
    family: ScalingFamily,
    items: Sequence[EvaluationItem],
    seed: int,
    b: int = 1000,
    parallel: int = 1,
) -> CurveRow:
    """Evaluate the family member at one scale over the protocol conditions."""
    point_seed = stable_seed(seed, f"{scale:.17g}")
    model = make_scaled_sim(scale, family, {item.id: item for item in items}, point_seed)
    result = EvaluationRunner(model, parallel=parallel).run(items, PROTOCOL_CONDITIONS)
    scores = scores_from_transcripts(result.transcripts)
    report = compute_metrics(scores)
    ci = bootstrap_ci(scores, b=b, seed=point_seed, point={"tos": report.tos})
    logger.info(f"scale={scale:g}: s_symt={report.s_symt:.4f} tos={report.tos:.4f}")
    return CurveRow(
        scale=scale,
        s_symt=report.s_symt,
        s_full=report.s_full,
        s_symv=report.s_symv,
        tos=report.tos,
        cos=report.cos,
        fos=report.fos,
        ssc=report.ssc,
        tos_ci=ci["tos"],
    )


def run_scaling(
    grid: Sequence[float],
    family: ScalingFamily,
    items: Sequence[EvaluationItem],
    seed: int = 0,
    b: int = 1000,
    parallel: int = 1,
) -> ScalingCurve:
    """
    Sweep the simulated family over a scale grid.

    Each grid point gets its own seed derived from (seed, scale), so a point
    measures the same regardless of the rest of the grid.

    Raises:
        InvalidGrid: Grid not strictly increasing or shorter than 5 points
    """
    points = check_grid(grid)
    rows = [run_point(n, family, items, seed, b=b, parallel=parallel) for n in points]
    return ScalingCurve(
        rows=rows,
        family=family,
        items_hash=items_digest(items),
        seed=seed,
        n_items=len(items),
    )


def check_divergence(curve: ScalingCurve) -> DivergenceResult:
    """
    Verdict on whether ToS widens with scale.

    Diverging iff Spearman rho(scale, tos) >= 0.9 and tos rises from the
    first to the last row by more than twice the pooled interval half-width
    (mean of the first and last rows' half-widths); converging is the mirror
    image; anything else is flat.

    Raises:
        TooFewPoints: Fewer than 5 rows
    """
    rows = sorted(curve.rows, key=lambda r: r.scale)
    if len(rows) < MIN_GRID_POINTS:
        raise TooFewPoints(f"Divergence check needs {MIN_GRID_POINTS} rows, got {len(rows)}")

    rho_value = spearmanr([r.scale for r in rows], [r.tos for r in rows])[0]
    rho = 0.0 if rho_value is None or math.isnan(rho_value) else float(rho_value)

    change = rows[-1].tos - rows[0].tos
    pooled = (half_width(rows[0].tos_ci) + half_width(rows[-1].tos_ci)) / 2.0
    margin = SEPARATION_FACTOR * pooled

    if rho >= RHO_THRESHOLD and change > margin:
        verdict = Verdict.DIVERGING
    elif rho <= -RHO_THRESHOLD and -change > margin:
        verdict = Verdict.CONVERGING
    else:
        verdict = Verdict.FLAT
    return DivergenceResult(verdict=verdict, rho=rho, tos_change=change, pooled_half_width=pooled)


def curve_csv(curve: ScalingCurve) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for row in curve.rows:
        writer.writerow([f"{getattr(row, name):.10g}" for name in CURVE_COLUMNS])
    return buffer.getvalue()


def write_curve(
    curve: ScalingCurve,
    out_dir: Union[str, Path],
    divergence: Optional[DivergenceResult] = None,
    manifest: Optional[str] = None,
) -> Tuple[Path, Path]:
    """Write curve.csv and curve.json into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "curve.csv"
    csv_path.write_text(curve_csv(curve), encoding="utf-8")

    data = curve.to_dict()
    if divergence is not None:
        data["divergence"] = divergence.to_dict()
    if manifest is not None:
        data["manifest"] = manifest
    json_path = out / "curve.json"
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    return csv_path, json_path
