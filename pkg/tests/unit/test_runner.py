"""Unit tests for the evaluation runner."""

import pytest

from sscaudit.core.condition import PROTOCOL_CONDITIONS, Condition
from sscaudit.core.errors import Timeout, UsageError
from sscaudit.core.transcript import Transcript
from sscaudit.models.mocks import MockModel, MockSpec
from sscaudit.orchestration.runner import EvaluationRunner
from sscaudit.scoring.metrics import compute_metrics, scores_from_transcripts
from tests.conftest import by_id


class FailingOnSymV:
    """Answers gold except under SymV, where it times out."""

    model_id = "failing"

    def __init__(self, items):
        self.items = items

    def answer(self, bundle):
        if bundle.condition == Condition.SYMV:
            error = Timeout("deadline exceeded")
            error.attempts = 4
            raise error
        item = self.items[bundle.item_id]
        return Transcript(bundle.item_id, bundle.condition, self.model_id, raw_text=item.gold)


def test_oracle_run_scores_all_correct(barmax_items):
    """Test the oracle mock scores 1 on every protocol pair."""
    runner = EvaluationRunner(MockModel(MockSpec(kind="oracle"), by_id(barmax_items)))

    result = runner.run(barmax_items, PROTOCOL_CONDITIONS)

    assert result.n_pairs == 3 * len(barmax_items)
    assert all(t.score == 1 for t in result.transcripts)
    assert result.model_ids == {"full": "mock:oracle", "symt": "mock:oracle", "symv": "mock:oracle"}
    report = compute_metrics(scores_from_transcripts(result.transcripts))
    assert report.ssc == 0.0


def test_output_order_is_independent_of_parallelism(barmax_items):
    """Test sequential and threaded runs give identical sorted transcripts."""
    model = MockModel(MockSpec(kind="lossy_encoder", epsilon=0.05), by_id(barmax_items))

    sequential = EvaluationRunner(model, parallel=1).run(barmax_items, PROTOCOL_CONDITIONS)
    threaded = EvaluationRunner(model, parallel=8).run(barmax_items, PROTOCOL_CONDITIONS)

    assert sequential.transcripts == threaded.transcripts
    keys = [t.sort_key for t in sequential.transcripts]
    assert keys == sorted(keys)


def test_model_errors_become_unanswered_pairs(barmax_items):
    """Test a failing pair is recorded with its error and scored 0."""
    runner = EvaluationRunner(FailingOnSymV(by_id(barmax_items)), parallel=2)

    result = runner.run(barmax_items[:5], PROTOCOL_CONDITIONS)

    failed = [t for t in result.transcripts if not t.answered]
    assert len(failed) == 5
    assert result.n_unanswered == 5
    assert all(t.condition == Condition.SYMV for t in failed)
    assert failed[0].error == "Timeout: deadline exceeded"
    assert failed[0].attempt_count == 4
    assert all(t.score == 0 for t in failed)


def test_extraction_and_scoring_applied(barmax_items):
    """Test raw answers are extracted and compared with the canonical gold."""
    runner = EvaluationRunner(FailingOnSymV(by_id(barmax_items)), parallel=1)

    result = runner.run(barmax_items[:3], [Condition.FULL])

    for transcript, item in zip(result.transcripts, sorted(barmax_items[:3], key=lambda i: i.id)):
        assert transcript.extracted == item.gold.lower()
        assert transcript.score == 1


def test_basetext_requires_base_model(barmax_items):
    """Test BaseText cannot run without a base model."""
    runner = EvaluationRunner(MockModel(MockSpec(kind="oracle"), by_id(barmax_items)))

    with pytest.raises(UsageError, match="base model"):
        runner.run(barmax_items, [Condition.BASE_TEXT])


def test_basetext_uses_base_model(barmax_items):
    """Test BaseText pairs are answered by the base model."""
    items = by_id(barmax_items)
    runner = EvaluationRunner(
        MockModel(MockSpec(kind="oracle"), items),
        base_model=MockModel(MockSpec(kind="blind_prior"), items),
    )

    result = runner.run(barmax_items[:4], [Condition.TEXT_ONLY, Condition.BASE_TEXT])

    base = [t for t in result.transcripts if t.condition == Condition.BASE_TEXT]
    assert {t.model_id for t in base} == {"mock:blind_prior:prior_acc=0.25"}
    assert result.model_ids["basetext"] == "mock:blind_prior:prior_acc=0.25"


def test_parallel_must_be_positive(barmax_items):
    """Test the worker count is validated."""
    with pytest.raises(ValueError, match="parallel"):
        EvaluationRunner(MockModel(MockSpec(kind="oracle"), {}), parallel=0)
