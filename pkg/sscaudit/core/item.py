"""Evaluation items: one isomorphic (V, V_label, T, T_img) tuple each."""

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from .errors import ItemValidationError
from .raster import Raster

logger = logging.getLogger(__name__)

# Separates the question from the symbolic scene text in SymT prompts.
DELIMITER_LINE = "---VISUAL FACTS---"

IMAGES_DIR = "images"


@dataclass(frozen=True)
class EvaluationItem:
    """
    A single evaluation item.

    Attributes:
        id: Identifier, unique within a dataset
        task_kind: Tag of the generator that produced the item
        t: The question text
        gold: Canonical answer string
        v: Scene image (None for text-only items)
        v_label: Exhaustive symbolic text representation of v
        t_img: Question rendered as an image (set by the translator)
        symv_composite: Scene with the rendered question attached (set by the translator)
        choices: Ordered answer options, when the task is multiple choice
        seed: Generator seed of this item
        meta: Generator parameters and documented geometry
    """

    id: str
    task_kind: str
    t: str
    gold: str
    v: Optional[Raster] = None
    v_label: str = ""
    t_img: Optional[Raster] = None
    symv_composite: Optional[Raster] = None
    choices: Optional[List[str]] = None
    seed: int = 0
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate identity fields."""
        if not self.id:
            raise ValueError("Item id cannot be empty")
        if not self.task_kind:
            raise ValueError("Item task_kind cannot be empty")
        if self.choices is not None:
            object.__setattr__(self, "choices", list(self.choices))

    @property
    def is_translated(self) -> bool:
        return self.t_img is not None and self.symv_composite is not None

    def image_paths(self) -> Dict[str, Optional[str]]:
        """Relative PNG paths used when the item is serialized."""
        return {
            "v_path": f"{IMAGES_DIR}/{self.id}_v.png" if self.v is not None else None,
            "t_img_path": f"{IMAGES_DIR}/{self.id}_timg.png" if self.t_img is not None else None,
            "symv_path": (
                f"{IMAGES_DIR}/{self.id}_symv.png" if self.symv_composite is not None else None
            ),
        }

    def to_dict(self) -> Dict[str, Any]:
        """Convert item to its JSONL record (images referenced by path)."""
        paths = self.image_paths()
        return {
            "id": self.id,
            "task_kind": self.task_kind,
            "v_path": paths["v_path"],
            "v_label": self.v_label,
            "t": self.t,
            "t_img_path": paths["t_img_path"],
            "symv_path": paths["symv_path"],
            "gold": self.gold,
            "choices": self.choices,
            "seed": self.seed,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: Optional[Path] = None) -> "EvaluationItem":
        """Create item from a JSONL record, loading images relative to base_dir."""
        base = base_dir or Path(".")

        def load(key: str) -> Optional[Raster]:
            rel = data.get(key)
            if not rel:
                return None
            return Raster.from_png_bytes((base / rel).read_bytes())

        return cls(
            id=data["id"],
            task_kind=data["task_kind"],
            t=data.get("t", ""),
            gold=str(data["gold"]),
            v=load("v_path"),
            v_label=data.get("v_label") or "",
            t_img=load("t_img_path"),
            symv_composite=load("symv_path"),
            choices=data.get("choices"),
            seed=int(data.get("seed", 0)),
            meta=data.get("meta") or {},
        )

    def __repr__(self) -> str:
        return (
            f"EvaluationItem(id='{self.id}', task_kind='{self.task_kind}', "
            f"translated={self.is_translated})"
        )


def validate_item(item: EvaluationItem) -> List[str]:
    """
    Check an item against the EvaluationItem invariants.

    Returns:
        List of violations, each "field: rule"; empty when the item is valid
    """
    violations: List[str] = []

    if item.choices is not None:
        if not item.choices:
            violations.append("choices: empty-choices")
        elif item.gold not in item.choices:
            violations.append("gold: gold-not-in-choices")
        if len(set(item.choices)) != len(item.choices):
            violations.append("choices: duplicate-choices")

    if item.v is not None and not item.v_label:
        violations.append("v_label: empty-V_label")

    if (item.t_img is None) != (item.symv_composite is None):
        violations.append("t_img: partial-translation")

    if DELIMITER_LINE in item.t:
        violations.append("t: delimiter-in-text")
    if DELIMITER_LINE in item.v_label:
        violations.append("v_label: delimiter-in-text")

    return violations


def _violation_report(items: Iterable[EvaluationItem]) -> List[str]:
    report: List[str] = []
    seen: set = set()
    for item in items:
        if item.id in seen:
            report.append(f"{item.id}: id: duplicate-id")
        seen.add(item.id)
        report.extend(f"{item.id}: {v}" for v in validate_item(item))
    return report


def _atomic_write_bytes(path: Path, data: bytes) -> None:
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def write_items(items: List[EvaluationItem], path: Union[str, Path]) -> Path:
    """
    Write items as JSON Lines with PNG images next to it.

    Args:
        items: Items to write (validated first)
        path: Target JSONL path; images go to <dir>/images/

    Returns:
        Path of the written JSONL file
    """
    report = _violation_report(items)
    if report:
        raise ItemValidationError(f"{len(report)} item violation(s): {report[0]}", report)

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    images_dir = target.parent / IMAGES_DIR
    if any(i.v is not None or i.t_img is not None for i in items):
        images_dir.mkdir(parents=True, exist_ok=True)

    lines = []
    for item in items:
        paths = item.image_paths()
        for key, raster in (
            ("v_path", item.v),
            ("t_img_path", item.t_img),
            ("symv_path", item.symv_composite),
        ):
            rel = paths[key]
            if raster is not None and rel is not None:
                _atomic_write_bytes(target.parent / rel, raster.to_png_bytes())
        lines.append(json.dumps(item.to_dict(), ensure_ascii=True, separators=(",", ":")))

    payload = "".join(line + "\n" for line in lines)
    _atomic_write_bytes(target, payload.encode("utf-8"))
    logger.info(f"Wrote {len(items)} items to {target}")
    return target


def iter_item_records(lines: Iterable[str], base_dir: Path) -> Iterator[EvaluationItem]:
    """Parse JSONL lines lazily (used by streaming consumers)."""
    for line_num, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            yield EvaluationItem.from_dict(record, base_dir)
        except (json.JSONDecodeError, KeyError, ValueError, OSError) as e:
            raise ItemValidationError(f"Line {line_num}: {e}", [f"line {line_num}: {e}"]) from e


def read_items(path: Union[str, Path]) -> List[EvaluationItem]:
    """
    Read and validate a JSONL item file.

    Raises:
        ItemValidationError: If a record is malformed or breaks an invariant
    """
    source = Path(path)
    if not source.exists():
        raise ItemValidationError(f"Item file not found: {source}")

    with open(source, "r", encoding="utf-8") as f:
        items = list(iter_item_records(f, source.parent))

    report = _violation_report(items)
    if report:
        raise ItemValidationError(f"{len(report)} item violation(s): {report[0]}", report)
    return items


def dataset_hash(path: Union[str, Path]) -> str:
    """SHA-256 over the JSONL bytes followed by every referenced PNG in item order."""
    source = Path(path)
    digest = hashlib.sha256()
    raw = source.read_bytes()
    digest.update(raw)
    for line in raw.decode("utf-8").splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        for key in ("v_path", "t_img_path", "symv_path"):
            rel = record.get(key)
            if rel:
                digest.update((source.parent / rel).read_bytes())
    return digest.hexdigest()
