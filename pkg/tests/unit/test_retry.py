"""Unit tests for the retry decorator."""

import pytest

from sscaudit.utils.retry import RetryError, retry


@pytest.fixture(autouse=True)
def no_sleep(monkeypatch):
    delays = []
    monkeypatch.setattr("sscaudit.utils.retry.time.sleep", delays.append)
    return delays


def test_retry_success_after_failures(no_sleep):
    """Test a call that fails twice then succeeds."""
    calls = []

    @retry(max_attempts=3, delay=0.5, backoff=3.0)
    def flaky():
        calls.append(1)
        if len(calls) < 3:
            raise ValueError("not yet")
        return "done"

    assert flaky() == "done"
    assert len(calls) == 3
    assert no_sleep == [0.5, 1.5]


def test_retry_exhausted():
    """Test RetryError carries the attempts and the last error."""

    @retry(max_attempts=2)
    def always_fails():
        raise ValueError("broken")

    with pytest.raises(RetryError) as exc:
        always_fails()

    assert exc.value.attempts == 2
    assert isinstance(exc.value.last_error, ValueError)


def test_should_retry_rejects(no_sleep):
    """Test errors rejected by the predicate propagate unchanged."""
    calls = []

    @retry(max_attempts=5, should_retry=lambda e: not isinstance(e, KeyError))
    def fails():
        calls.append(1)
        raise KeyError("fatal")

    with pytest.raises(KeyError):
        fails()
    assert len(calls) == 1
    assert no_sleep == []


def test_uncaught_exception_types_propagate():
    """Test exception types outside `exceptions` are not retried."""

    @retry(max_attempts=3, exceptions=(ValueError,))
    def fails():
        raise TypeError("wrong type")

    with pytest.raises(TypeError):
        fails()


def test_on_retry_callback():
    """Test the callback sees each failed attempt number."""
    seen = []

    @retry(max_attempts=3, on_retry=lambda e, attempt: seen.append(attempt))
    def fails():
        raise ValueError("x")

    with pytest.raises(RetryError):
        fails()
    assert seen == [1, 2]
