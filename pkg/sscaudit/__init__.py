"""
ssc-audit: measure the cost of seeing in vision-language models.

Every item is presented under isomorphic modality conditions (image plus
text, all text, all pixels) so that accuracy gaps between conditions
isolate losses in the visual pathway rather than missing information.
"""

from .core.condition import Condition
from .core.errors import SSCAuditError
from .core.item import EvaluationItem, read_items, write_items
from .core.raster import Raster
from .core.transcript import Transcript, read_transcripts, write_transcripts
from .models.mocks import MockModel, MockSpec
from .models.resolve import resolve_model
from .models.scaled_sim import ScalingFamily, make_scaled_sim
from .orchestration.runner import EvaluationRunner, RunResult
from .parser.config_parser import ConfigFileParser, load_settings
from .scoring.metrics import ConditionScores, Diagnosis, MetricReport, compute_metrics
from .scoring.report import build_report
from .taskgen.generators import generate
from .taskgen.oracle import Insufficient, oracle_solve
from .taskgen.spec import GeneratorSpec, TaskKind
from .translator.render import RenderConfig, decode_text_image, render_text_image, translate_item

__version__ = "0.1.0"

__all__ = [
    # Data model
    "Condition",
    "EvaluationItem",
    "Raster",
    "Transcript",
    "read_items",
    "write_items",
    "read_transcripts",
    "write_transcripts",
    "SSCAuditError",
    # Generation and translation
    "GeneratorSpec",
    "TaskKind",
    "generate",
    "oracle_solve",
    "Insufficient",
    "RenderConfig",
    "render_text_image",
    "decode_text_image",
    "translate_item",
    # Models and runs
    "MockModel",
    "MockSpec",
    "ScalingFamily",
    "make_scaled_sim",
    "resolve_model",
    "EvaluationRunner",
    "RunResult",
    # Scoring
    "ConditionScores",
    "MetricReport",
    "Diagnosis",
    "compute_metrics",
    "build_report",
    # Configuration
    "ConfigFileParser",
    "load_settings",
]
