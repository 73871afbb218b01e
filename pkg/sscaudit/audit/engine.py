"""Streaming audit: sampled, windowed seeing-cost monitoring with alarms."""

import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, MutableMapping, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.condition import PROTOCOL_CONDITIONS
from ..core.errors import NoCompleteWindow
from ..core.item import EvaluationItem
from ..core.transcript import Transcript
from ..models.base import ModelClient
from ..orchestration.runner import EvaluationRunner
from ..scoring.metrics import Diagnosis, MetricReport, scores_from_transcripts
from ..scoring.report import build_report
from ..translator.render import RenderConfig, translate_item

logger = logging.getLogger(__name__)


class AuditConfig(BaseModel):
    """
    Audit parameters.

    Attributes:
        sample_rate: Probability that a stream item is evaluated
        window: Sampled items per (tumbling) window
        threshold: SSC level above which a window counts toward an alarm
        consecutive: Windows over threshold required to alarm
        seed: Seed of the sampling draws; window w bootstraps with seed + w
        bootstrap_b: Resamples per window
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    sample_rate: float = Field(default=0.2, gt=0.0, le=1.0)
    window: int = Field(default=200, ge=50)
    threshold: float = Field(default=0.05, ge=0.0)
    consecutive: int = Field(default=2, ge=1)
    seed: int = Field(default=0, ge=0)
    bootstrap_b: int = Field(default=200, ge=100)


@dataclass(frozen=True)
class WindowSummary:
    """Metrics of one completed window."""

    window_index: int
    report: MetricReport
    first_item_id: str
    last_item_id: str
    stream_position: int
    n_errors: int
    over_threshold: bool

    event_type = "window"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "event_type": self.event_type,
            "window_index": self.window_index,
            "first_item_id": self.first_item_id,
            "last_item_id": self.last_item_id,
            "stream_position": self.stream_position,
            "n_errors": self.n_errors,
            "over_threshold": self.over_threshold,
            "diagnosis": self.report.diagnosis.value,
            "report": self.report.to_dict(),
        }


@dataclass(frozen=True)
class AlarmEvent:
    """Raised when SSC stayed above threshold for the configured run of windows."""

    window_index: int
    report: MetricReport
    diagnosis: Diagnosis
    first_item_id: str
    last_item_id: str
    stream_position: int
    consecutive: int

    event_type = "alarm"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "event_type": self.event_type,
            "window_index": self.window_index,
            "diagnosis": self.diagnosis.value,
            "first_item_id": self.first_item_id,
            "last_item_id": self.last_item_id,
            "stream_position": self.stream_position,
            "consecutive": self.consecutive,
            "report": self.report.to_dict(),
        }


class AuditEngine:
    """
    Consumes an item stream and audits a model on a sample of it.

    Each ingested item takes one seeded Bernoulli draw; sampled items are
    translated if needed, answered under Full, SymT and SymV, and scored.
    A window closes after `window` sampled items; its report is computed
    with the window's bootstrap seed and compared with the threshold.

    Items must already carry V_label. Back-ends that read hidden item fields
    (mocks) see sampled items through `registry` until their window closes.
    """

    def __init__(
        self,
        model: ModelClient,
        config: Optional[AuditConfig] = None,
        render_cfg: Optional[RenderConfig] = None,
        on_window: Optional[Callable[[WindowSummary], None]] = None,
        registry: Optional[MutableMapping[str, EvaluationItem]] = None,
    ):
        """
        Initialize the engine.

        Args:
            model: Model under audit
            config: Audit parameters
            render_cfg: Render config for on-the-fly translation
            on_window: Callback receiving every window summary
            registry: Item mapping shared with the model back-end
        """
        self.model = model
        self.config = config or AuditConfig()
        self.render_cfg = render_cfg or RenderConfig()
        self.on_window = on_window
        self.registry = registry
        self.runner = EvaluationRunner(model, parallel=1)

        self._rng = np.random.default_rng(self.config.seed)
        self._lock = threading.Lock()
        self._window_items: List[EvaluationItem] = []
        self._window_transcripts: List[Transcript] = []
        self._streak = 0
        self._last: Optional[WindowSummary] = None

        self.items_seen = 0
        self.items_sampled = 0
        self.windows_completed = 0
        self.n_errors = 0
        self.alarms: List[AlarmEvent] = []

    def _evaluate(self, item: EvaluationItem) -> List[Transcript]:
        if not item.is_translated:
            item = translate_item(item, self.render_cfg)
        if self.registry is not None:
            self.registry[item.id] = item
        self._window_items.append(item)
        return [self.runner.execute_pair(item, c) for c in PROTOCOL_CONDITIONS]

    def ingest(self, item: EvaluationItem) -> Optional[AlarmEvent]:
        """
        Feed one stream item.

        Returns:
            AlarmEvent when this item completed a window that triggers an alarm
        """
        with self._lock:
            self.items_seen += 1
            if self._rng.random() >= self.config.sample_rate:
                return None

            self.items_sampled += 1
            transcripts = self._evaluate(item)
            self.n_errors += sum(1 for t in transcripts if not t.answered)
            self._window_transcripts.extend(transcripts)

            if len(self._window_items) < self.config.window:
                return None
            return self._close_window()

    def _close_window(self) -> Optional[AlarmEvent]:
        index = self.windows_completed
        scores = scores_from_transcripts(self._window_transcripts)
        report = build_report(scores, b=self.config.bootstrap_b, seed=self.config.seed + index)
        over = report.ssc > self.config.threshold
        self._streak = self._streak + 1 if over else 0

        summary = WindowSummary(
            window_index=index,
            report=report,
            first_item_id=self._window_items[0].id,
            last_item_id=self._window_items[-1].id,
            stream_position=self.items_seen,
            n_errors=scores.n_unanswered,
            over_threshold=over,
        )
        self._last = summary
        self.windows_completed += 1
        if self.registry is not None:
            for item in self._window_items:
                self.registry.pop(item.id, None)
        self._window_items = []
        self._window_transcripts = []

        logger.info(
            f"Window {index} (stream item {self.items_seen}): ssc={report.ssc:.4f} "
            f"{report.diagnosis.value}, streak={self._streak}"
        )
        if self.on_window is not None:
            self.on_window(summary)

        if self._streak < self.config.consecutive:
            return None

        alarm = AlarmEvent(
            window_index=index,
            report=report,
            diagnosis=report.diagnosis,
            first_item_id=summary.first_item_id,
            last_item_id=summary.last_item_id,
            stream_position=self.items_seen,
            consecutive=self._streak,
        )
        self.alarms.append(alarm)
        logger.warning(
            f"ALARM at window {index}: ssc={report.ssc:.4f} > {self.config.threshold} "
            f"for {self._streak} windows ({report.diagnosis.value})"
        )
        return alarm

    def snapshot(self) -> MetricReport:
        """
        Report of the most recent completed window.

        Raises:
            NoCompleteWindow: No window has completed yet
        """
        if self._last is None:
            raise NoCompleteWindow(
                f"No complete window yet ({len(self._window_items)}/{self.config.window} sampled)"
            )
        return self._last.report

    def stats(self) -> Dict[str, int]:
        return {
            "items_seen": self.items_seen,
            "items_sampled": self.items_sampled,
            "windows_completed": self.windows_completed,
            "alarms": len(self.alarms),
            "errors": self.n_errors,
        }
