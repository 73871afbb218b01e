"""Metric reports: assembly and JSON / Markdown writers."""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.condition import Condition
from .bootstrap import CI_LEVEL, bootstrap_ci
from .metrics import (
    METRIC_NAMES,
    SSC_TOLERANCE,
    ConditionScores,
    MetricReport,
    compute_metrics,
    diagnose,
    find_violations,
)

logger = logging.getLogger(__name__)

METRIC_TITLES = {
    "tos": "Toll of Seeing (SymT - Full)",
    "cos": "Curse of Seeing (SymT - SymV)",
    "fos": "Fallacy of Seeing (Full - SymV)",
    "ssc": "SSC = max(ToS, CoS, |FoS|)",
    "mg": "Multimodal Gain (Full - TextOnly)",
    "ml": "Multimodal Leakage max(0, TextOnly - BaseText)",
}


def build_report(scores: ConditionScores, b: int = 1000, seed: int = 0) -> MetricReport:
    """
    Point estimates, bootstrap intervals, violations and diagnosis for one run.

    Raises:
        MissingCondition: Full, SymT or SymV missing
        TooFewItems: Fewer than 10 paired items
    """
    report = compute_metrics(scores)
    points = {name: report.point(name) for name in METRIC_NAMES}
    report.ci = bootstrap_ci(scores, b=b, seed=seed, point=points)
    report.bootstrap = {"b": b, "seed": seed}
    report.violations = find_violations(report)
    report.diagnosis = diagnose(report)
    logger.info(
        f"{report.model_id}: ssc={report.ssc:.4f} tos={report.tos:.4f} "
        f"cos={report.cos:.4f} fos={report.fos:.4f} -> {report.diagnosis.value}"
    )
    return report


def report_json(report: MetricReport, manifest: Optional[str] = None) -> Dict[str, Any]:
    data = report.to_dict()
    if manifest is not None:
        data["manifest"] = manifest
    return data


def write_report_json(
    report: MetricReport, path: Union[str, Path], manifest: Optional[str] = None
) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", encoding="utf-8") as f:
        json.dump(report_json(report, manifest), f, indent=2, sort_keys=False)
        f.write("\n")
    return target


def _pp(value: float) -> str:
    return f"{100.0 * value:+.1f} pp"


def render_markdown(report: MetricReport) -> str:
    """Markdown mirror of the JSON report."""
    lines: List[str] = [
        f"# Seeing-cost report: {report.model_id or 'unnamed model'}",
        "",
        f"- Items: {report.n_items}",
        f"- Unanswered pairs (scored 0): {report.n_unanswered}",
    ]
    if report.base_model_id:
        lines.append(f"- Base model (BaseText): {report.base_model_id}")
    lines += ["", "## Conditions", "", "| Condition | Accuracy | Percent |", "|---|---|---|"]

    accuracies = [
        (Condition.FULL, report.s_full),
        (Condition.SYMT, report.s_symt),
        (Condition.SYMV, report.s_symv),
        (Condition.TEXT_ONLY, report.s_textonly),
        (Condition.BASE_TEXT, report.s_basetext),
    ]
    for condition, value in accuracies:
        if value is not None:
            lines.append(f"| {condition.value} | {value:.4f} | {100.0 * value:.1f}% |")

    level = int(round(CI_LEVEL * 100))
    lines += [
        "",
        "## Metrics",
        "",
        f"| Metric | Value | Points | {level}% CI |",
        "|---|---|---|---|",
    ]
    for name in METRIC_NAMES:
        value = report.point(name)
        if value is None:
            continue
        ci = report.ci.get(name)
        ci_text = f"[{ci[0]:+.4f}, {ci[1]:+.4f}]" if ci else "n/a"
        lines.append(f"| {METRIC_TITLES[name]} | {value:+.4f} | {_pp(value)} | {ci_text} |")
    if report.ml_raw is not None:
        raw = report.ml_raw
        title = "ML before clamping (TextOnly - BaseText)"
        lines.append(f"| {title} | {raw:+.4f} | {_pp(raw)} | n/a |")

    lines += ["", "## Diagnosis", "", f"**{report.diagnosis.value}**", ""]
    if report.violations:
        lines.append("Violated by interval: " + ", ".join(report.violations))
    else:
        lines.append("No criterion clause is violated by its interval.")

    if report.item_patterns:
        lines += ["", "## Item patterns (Full, SymT, SymV)", "", "| Pattern | Items |", "|---|---|"]
        lines += [f"| {p} | {n} |" for p, n in report.item_patterns.items()]

    bootstrap = report.bootstrap
    lines += [
        "",
        "## Thresholds",
        "",
        f"- Bootstrap: paired, b={bootstrap.get('b')}, seed={bootstrap.get('seed')}, "
        f"percentile {level}% intervals",
        "- Violation: ToS or CoS interval above 0; FoS interval excluding 0",
        f"- Compliance: SSC point estimate within {SSC_TOLERANCE:g} of 0",
        "",
    ]
    return "\n".join(lines)


def write_report_markdown(report: MetricReport, path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render_markdown(report), encoding="utf-8")
    return target
