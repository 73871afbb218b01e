"""Unit tests for report assembly, writers and run manifests."""

import json

from sscaudit.core.condition import Condition
from sscaudit.manifest import RunManifest, manifest_path, read_manifest
from sscaudit.scoring.metrics import ConditionScores, Diagnosis
from sscaudit.scoring.report import (
    build_report,
    render_markdown,
    write_report_json,
    write_report_markdown,
)

FULL, SYMT, SYMV = Condition.FULL, Condition.SYMT, Condition.SYMV


def test_build_report_toll_dominant():
    """Test a clear SymT advantage with equal image conditions is toll dominant."""
    scores = ConditionScores.from_means({FULL: 0.60, SYMT: 0.95, SYMV: 0.60}, n_items=200)

    report = build_report(scores, b=500, seed=1)

    assert report.diagnosis == Diagnosis.TOLL_DOMINANT
    assert report.violations == ["tos>0", "cos>0"]
    assert report.bootstrap == {"b": 500, "seed": 1}
    assert report.ci["tos"][0] <= report.tos <= report.ci["tos"][1]


def test_build_report_is_reproducible():
    """Test the same scores, b and seed give the same report."""
    scores = ConditionScores.from_means({FULL: 0.7, SYMT: 0.8, SYMV: 0.5}, n_items=50)

    assert build_report(scores, seed=3).to_dict() == build_report(scores, seed=3).to_dict()


def test_report_writers(tmp_path):
    """Test the JSON and Markdown renderings of one report."""
    means = {FULL: 0.9, SYMT: 0.9, SYMV: 0.9, Condition.TEXT_ONLY: 0.4, Condition.BASE_TEXT: 0.5}
    report = build_report(ConditionScores.from_means(means, model_id="vlm-x"), b=100)

    json_path = write_report_json(report, tmp_path / "r" / "report.json", manifest="m.json")
    md_path = write_report_markdown(report, tmp_path / "r" / "report.md")

    data = json.loads(json_path.read_text())
    assert data["ml"] == 0.0
    assert data["ml_raw"] < 0
    assert data["manifest"] == "m.json"
    markdown = md_path.read_text()
    assert markdown == render_markdown(report)
    assert "# Seeing-cost report: vlm-x" in markdown
    assert "| textonly | 0.4000 | 40.0% |" in markdown
    assert "ML before clamping" in markdown
    assert "**compliant**" in markdown


def test_manifest_lifecycle(tmp_path):
    """Test a manifest is written before work and completed afterwards."""
    artifact = tmp_path / "out" / "transcripts.jsonl"
    manifest = RunManifest(command="run", argv=["ssc-audit", "run"], seeds={"seed": 3})

    sidecar = manifest.write(artifact)
    assert sidecar == manifest_path(artifact)
    assert sidecar.name == "transcripts.jsonl.manifest.json"
    assert read_manifest(sidecar).finished_at is None

    manifest.add_output(artifact)
    manifest.add_output(artifact)
    manifest.finish(artifact)

    loaded = read_manifest(sidecar)
    assert loaded.finished_at is not None
    assert loaded.outputs == ["transcripts.jsonl"]
    assert loaded.seeds == {"seed": 3}
    assert loaded.version
