"""Command-line interface: ssc-audit <command> [options]."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, TextIO

from dotenv import load_dotenv

from .audit.engine import AuditEngine, WindowSummary
from .config import HarnessSettings
from .core.condition import PROTOCOL_CONDITIONS, Condition
from .core.errors import IncompleteRunError, ModelError, SSCAuditError, UsageError
from .core.item import EvaluationItem, dataset_hash, iter_item_records, read_items, write_items
from .core.transcript import Transcript, read_transcripts, write_transcripts
from .manifest import RunManifest, manifest_path
from .models.resolve import MODEL_SPEC_HELP, resolve_model
from .orchestration.runner import EvaluationRunner, RunResult
from .parser.config_parser import load_settings
from .scaling.lab import check_divergence, run_scaling, write_curve
from .scoring.metrics import scores_from_transcripts
from .scoring.report import build_report, write_report_json, write_report_markdown
from .taskgen.generators import generate
from .taskgen.spec import GeneratorSpec, TaskKind
from .translator.render import translate_item

logger = logging.getLogger(__name__)

ITEMS_FILE = "items.jsonl"
DEFAULT_GRID = "1e8,1e9,1e10,1e11,1e12"


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )
    logging.getLogger("httpx").setLevel(logging.WARNING)


def settings_from_args(args: argparse.Namespace) -> HarnessSettings:
    """Defaults, then --config, then explicitly given flags."""

    def flag(name: str) -> Any:
        return getattr(args, name, None)

    overrides: Dict[str, Any] = {
        "parallel": flag("parallel"),
        "cache_dir": flag("cache_dir"),
        "bootstrap_b": flag("bootstrap_b"),
        "seed": flag("seed"),
        "base_url": flag("base_url"),
        "max_tokens": flag("max_tokens"),
        "audit": {
            "sample_rate": flag("sample_rate"),
            "window": flag("window"),
            "threshold": flag("threshold"),
            "consecutive": flag("consecutive"),
            "seed": flag("seed"),
        },
        "family": {
            "a": flag("a"),
            "b": flag("b"),
            "phi": flag("phi"),
            "psi": flag("psi"),
            "phi_schedule": parse_schedule(flag("phi_schedule")),
        },
    }
    return load_settings(flag("config"), overrides)


def parse_schedule(text: Optional[str]) -> Optional[Dict[float, float]]:
    """Parse "1e8=0.5,1e9=0.7" into {scale: phi}."""
    if not text:
        return None
    schedule: Dict[float, float] = {}
    for part in text.split(","):
        scale, sep, phi = part.partition("=")
        try:
            schedule[float(scale)] = float(phi)
        except ValueError as e:
            raise UsageError(f"Bad --phi-schedule entry '{part}' (expected SCALE=PHI)") from e
        if not sep:
            raise UsageError(f"Bad --phi-schedule entry '{part}' (expected SCALE=PHI)")
    return schedule


def parse_grid(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise UsageError(f"Bad --grid '{text}': {e}") from e


def _close(*models: Any) -> None:
    for model in models:
        close = getattr(model, "close", None)
        if callable(close):
            close()


# gen / translate


def cmd_gen(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    spec = GeneratorSpec.from_cli(args.task, args.n, settings.seed, args.param)
    out = Path(args.out) / ITEMS_FILE
    manifest = RunManifest(command="gen", config=settings.model_dump(), seeds={"seed": spec.seed})
    manifest.write(out)

    items = generate(spec)
    if args.translate:
        items = [translate_item(item, settings.render) for item in items]
    write_items(items, out)

    manifest.dataset_hash = dataset_hash(out)
    manifest.add_output(out)
    manifest.finish(out)
    print(manifest.dataset_hash)
    return 0


def cmd_translate(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    source = Path(args.items)
    out = Path(args.out) / ITEMS_FILE if args.out else source
    items = read_items(source)
    manifest = RunManifest(
        command="translate", config=settings.model_dump(), dataset_hash=dataset_hash(source)
    )
    manifest.write(out)

    translated = [translate_item(item, settings.render) for item in items]
    write_items(translated, out)
    logger.info(f"Translated {len(translated)} items")

    manifest.dataset_hash = dataset_hash(out)
    manifest.add_output(out)
    manifest.finish(out)
    print(manifest.dataset_hash)
    return 0


# run / metrics / baseline


def _check_completion(result: RunResult) -> None:
    if result.n_pairs and result.n_unanswered == result.n_pairs:
        raise ModelError(f"All {result.n_pairs} pairs failed; see transcript errors")
    if result.n_unanswered:
        raise IncompleteRunError(
            f"{result.n_unanswered} of {result.n_pairs} pairs unanswered (scored 0)",
            unanswered=result.n_unanswered,
        )


def _execute(
    args: argparse.Namespace,
    settings: HarnessSettings,
    command: str,
    model_spec: str,
    conditions: List[Condition],
    out: Path,
    base_spec: Optional[str] = None,
) -> RunResult:
    items = read_items(args.items)
    registry = {item.id: item for item in items}
    model = resolve_model(model_spec, registry, settings)
    base = resolve_model(base_spec, registry, settings) if base_spec else None
    if Condition.BASE_TEXT in conditions and base is None:
        raise UsageError("Condition basetext needs --base-model")

    manifest = RunManifest(
        command=command,
        config=settings.model_dump(),
        dataset_hash=dataset_hash(args.items),
        model_ids={"model": model.model_id, **({"base": base.model_id} if base else {})},
        seeds={"seed": settings.seed},
    )
    manifest.write(out)

    try:
        runner = EvaluationRunner(model, base_model=base, parallel=settings.parallel)
        result = runner.run(items, conditions)
    finally:
        _close(model, base)

    write_transcripts(result.transcripts, out)
    manifest.add_output(out)
    manifest.finish(out)
    return result


def cmd_run(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    conditions = Condition.parse_list(args.conditions)
    out = Path(args.out)
    result = _execute(args, settings, "run", args.model, conditions, out, args.base_model)
    print(json.dumps(result.summary()))
    _check_completion(result)
    return 0


def _write_report(
    transcripts: List[Transcript], out_dir: Path, settings: HarnessSettings, command: str
) -> Dict[str, Any]:
    scores = scores_from_transcripts(transcripts)
    model_ids = {"model": scores.model_id}
    if scores.base_model_id:
        model_ids["base"] = scores.base_model_id
    json_path = out_dir / "report.json"
    manifest = RunManifest(
        command=command,
        config=settings.model_dump(),
        model_ids=model_ids,
        seeds={"bootstrap": settings.seed},
    )
    manifest.write(json_path)

    report = build_report(scores, b=settings.bootstrap_b, seed=settings.seed)
    write_report_json(report, json_path, manifest=manifest_path(json_path).name)
    md_path = write_report_markdown(report, out_dir / "report.md")
    manifest.add_output(json_path)
    manifest.add_output(md_path)
    manifest.finish(json_path)
    return report.to_dict()


def cmd_metrics(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    transcripts: List[Transcript] = []
    for path in args.transcripts:
        transcripts.extend(read_transcripts(path))
    summary = _write_report(transcripts, Path(args.out_dir), settings, "metrics")
    print(json.dumps({k: summary[k] for k in ("ssc", "tos", "cos", "fos", "diagnosis")}))
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    out_dir = Path(args.out_dir)
    conditions = [*PROTOCOL_CONDITIONS, Condition.TEXT_ONLY, Condition.BASE_TEXT]
    result = _execute(
        args,
        settings,
        "baseline",
        args.vlm,
        conditions,
        out_dir / "transcripts.jsonl",
        base_spec=args.base_model,
    )
    summary = _write_report(result.transcripts, out_dir, settings, "baseline")
    print(json.dumps({k: summary[k] for k in ("mg", "ml", "ml_raw", "diagnosis")}))
    _check_completion(result)
    return 0


# scaling / audit


def cmd_scaling(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    grid = parse_grid(args.grid)
    out_dir = Path(args.out_dir)
    csv_path = out_dir / "curve.csv"

    manifest = RunManifest(
        command="scaling",
        config=settings.model_dump(),
        model_ids={"family": "sim"},
        seeds={"seed": settings.seed},
    )
    manifest.write(csv_path)

    spec = GeneratorSpec(TaskKind.parse(args.task), args.n_items, settings.seed)
    items = [translate_item(item, settings.render) for item in generate(spec)]
    curve = run_scaling(grid, settings.family, items, seed=settings.seed, b=settings.bootstrap_b)
    divergence = check_divergence(curve)
    csv_path, json_path = write_curve(
        curve, out_dir, divergence, manifest=manifest_path(csv_path).name
    )

    manifest.dataset_hash = curve.items_hash
    manifest.add_output(csv_path)
    manifest.add_output(json_path)
    manifest.finish(csv_path)
    print(json.dumps(divergence.to_dict()))
    return 0


def _stream_items(source: str) -> Iterator[EvaluationItem]:
    if source == "-":
        yield from iter_item_records(sys.stdin, Path("."))
        return
    path = Path(source)
    with open(path, "r", encoding="utf-8") as f:
        yield from iter_item_records(f, path.parent)


def _emit(out: TextIO, event: Dict[str, Any]) -> None:
    out.write(json.dumps(event, separators=(",", ":")) + "\n")
    out.flush()


def cmd_audit(args: argparse.Namespace) -> int:
    settings = settings_from_args(args)
    registry: Dict[str, EvaluationItem] = {}
    model = resolve_model(args.model, registry, settings)

    to_stdout = args.out == "-"
    out_path = Path(args.out)
    manifest = RunManifest(
        command="audit",
        config=settings.model_dump(),
        model_ids={"model": model.model_id},
        seeds={"sampling": settings.audit.seed},
    )
    if not to_stdout:
        manifest.write(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)

    stream = sys.stdout if to_stdout else open(out_path, "w", encoding="utf-8")
    try:

        def on_window(summary: WindowSummary) -> None:
            _emit(stream, summary.to_dict())

        engine = AuditEngine(
            model,
            settings.audit,
            render_cfg=settings.render,
            on_window=on_window,
            registry=registry,
        )
        for item in _stream_items(args.items):
            alarm = engine.ingest(item)
            if alarm is not None:
                _emit(stream, alarm.to_dict())
    finally:
        _close(model)
        if not to_stdout:
            stream.close()

    logger.info(f"Audit finished: {engine.stats()}")
    if not to_stdout:
        manifest.add_output(out_path)
        manifest.finish(out_path)
    return 0


# parser


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML or JSON settings file (flags override it)")
    parser.add_argument("--parallel", type=int, help="Maximum concurrent model calls (default 4)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")


def _model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cache-dir", help="Response cache directory (default .ssc_cache)")
    parser.add_argument("--base-url", help="Chat-completions endpoint base URL")
    parser.add_argument("--max-tokens", type=int, help="Completion token limit (default 64)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssc-audit",
        description="Measure what a vision-language model loses by seeing.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  ssc-audit gen --task barmax --n 500 --seed 7 --out data --translate
  ssc-audit run --items data/items.jsonl --model mock:oracle --out runs/oracle.jsonl
  ssc-audit metrics --transcripts runs/oracle.jsonl --out-dir reports/oracle
  ssc-audit scaling --phi 0.7 --out-dir scaling
  ssc-audit audit --items data/items.jsonl --model mock:lossy_encoder:epsilon=0.1
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    tasks = ", ".join(t.value for t in TaskKind)

    gen = sub.add_parser("gen", help="Generate an item dataset")
    _common(gen)
    gen.add_argument("--task", required=True, help=f"Generator ({tasks})")
    gen.add_argument("--n", type=int, required=True, help="Number of items")
    gen.add_argument("--seed", type=int, help="Dataset seed (default 0)")
    gen.add_argument("--param", action="append", default=[], help="Generator parameter k=v")
    gen.add_argument("--out", default=".", help="Output directory (default .)")
    gen.add_argument("--translate", action="store_true", help="Also render T_img and SymV")
    gen.set_defaults(func=cmd_gen)

    tr = sub.add_parser("translate", help="Render T_img and the SymV composite of items")
    _common(tr)
    tr.add_argument("--items", required=True, help="Item JSONL file")
    tr.add_argument("--out", help="Output directory (default: rewrite in place)")
    tr.set_defaults(func=cmd_translate)

    run = sub.add_parser("run", help="Evaluate a model under modality conditions")
    _common(run)
    _model_flags(run)
    run.add_argument("--items", required=True, help="Translated item JSONL file")
    run.add_argument("--model", required=True, help=MODEL_SPEC_HELP)
    run.add_argument("--base-model", help=f"Base LLM for basetext ({MODEL_SPEC_HELP})")
    run.add_argument(
        "--conditions",
        default=",".join(c.value for c in PROTOCOL_CONDITIONS),
        help="Comma-separated conditions (full,symt,symv,textonly,basetext)",
    )
    run.add_argument("--seed", type=int, help="Seed for mock and simulated models")
    run.add_argument("--out", default="transcripts.jsonl", help="Transcript JSONL output")
    run.set_defaults(func=cmd_run)

    metrics = sub.add_parser("metrics", help="Metric report from transcripts")
    _common(metrics)
    metrics.add_argument("--transcripts", nargs="+", required=True, help="Transcript JSONL files")
    metrics.add_argument("--out-dir", default="report", help="Report directory")
    metrics.add_argument("--bootstrap-b", type=int, help="Bootstrap resamples (default 1000)")
    metrics.add_argument("--seed", type=int, help="Bootstrap seed (default 0)")
    metrics.set_defaults(func=cmd_metrics)

    scaling = sub.add_parser("scaling", help="Sweep the simulated family over model scale")
    _common(scaling)
    scaling.add_argument("--grid", default=DEFAULT_GRID, help=f"Scales (default {DEFAULT_GRID})")
    scaling.add_argument("--a", type=float, help="Log-scale slope (default 0.35)")
    scaling.add_argument("--b", type=float, help="Intercept (default -6)")
    scaling.add_argument("--phi", type=float, help="Full / SymT ratio (default 0.7)")
    scaling.add_argument("--psi", type=float, help="SymV / Full ratio (default 1)")
    scaling.add_argument("--phi-schedule", help="Per-scale phi, e.g. 1e8=0.5,1e9=0.7")
    scaling.add_argument("--task", default=TaskKind.BARMAX.value, help=f"Item generator ({tasks})")
    scaling.add_argument("--n-items", type=int, default=2000, help="Items per grid point")
    scaling.add_argument("--bootstrap-b", type=int, help="Bootstrap resamples (default 1000)")
    scaling.add_argument("--seed", type=int, help="Sweep seed (default 0)")
    scaling.add_argument("--out-dir", default="scaling", help="Output directory")
    scaling.set_defaults(func=cmd_scaling)

    audit = sub.add_parser("audit", help="Audit a model over an item stream")
    _common(audit)
    _model_flags(audit)
    audit.add_argument("--items", default="-", help="Item JSONL file, or - for stdin")
    audit.add_argument("--model", required=True, help=MODEL_SPEC_HELP)
    audit.add_argument("--sample-rate", type=float, help="Sampling probability (default 0.2)")
    audit.add_argument("--window", type=int, help="Sampled items per window (default 200)")
    audit.add_argument("--threshold", type=float, help="SSC alarm level (default 0.05)")
    audit.add_argument("--consecutive", type=int, help="Windows over threshold (default 2)")
    audit.add_argument("--seed", type=int, help="Sampling seed (default 0)")
    audit.add_argument("--out", default="-", help="Event JSONL output, or - for stdout")
    audit.set_defaults(func=cmd_audit)

    base = sub.add_parser("baseline", help="MG and ML against a base LLM")
    _common(base)
    _model_flags(base)
    base.add_argument("--items", required=True, help="Translated item JSONL file")
    base.add_argument("--vlm", required=True, help=f"Vision-language model ({MODEL_SPEC_HELP})")
    base.add_argument("--base-model", required=True, help=f"Base LLM ({MODEL_SPEC_HELP})")
    base.add_argument("--bootstrap-b", type=int, help="Bootstrap resamples (default 1000)")
    base.add_argument("--seed", type=int, help="Seed (default 0)")
    base.add_argument("--out-dir", default="baseline", help="Output directory")
    base.set_defaults(func=cmd_baseline)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose, args.quiet)

    try:
        return int(args.func(args))
    except SSCAuditError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
