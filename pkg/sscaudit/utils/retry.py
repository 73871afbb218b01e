"""Retry utilities for ssc-audit."""

import logging
import time
from functools import wraps
from typing import Any, Callable, Optional, Tuple, Type

logger = logging.getLogger(__name__)


class RetryError(Exception):
    """Raised when retry attempts are exhausted."""

    def __init__(self, message: str, attempts: int, last_error: Exception):
        super().__init__(message)
        self.attempts = attempts
        self.last_error = last_error


def retry(
    max_attempts: int = 4,
    delay: float = 1.0,
    backoff: float = 2.0,
    exceptions: Tuple[Type[Exception], ...] = (Exception,),
    should_retry: Optional[Callable[[Exception], bool]] = None,
    on_retry: Optional[Callable[[Exception, int], None]] = None,
) -> Callable:
    """
    Retry decorator with exponential backoff.

    With the defaults a call is tried four times, sleeping 1s, 2s and 4s
    between attempts.

    Args:
        max_attempts: Maximum number of attempts, the first call included
        delay: Initial delay between retries (seconds)
        backoff: Backoff multiplier for exponential backoff
        exceptions: Tuple of exceptions to catch
        should_retry: Predicate deciding whether a caught exception is retried;
            rejected exceptions propagate unchanged
        on_retry: Optional callback called on each retry attempt

    Raises:
        RetryError: All attempts failed with retryable errors

    Example:
        @retry(max_attempts=4, delay=1.0, backoff=2.0)
        def flaky_call():
            ...
    """

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            attempt = 1
            current_delay = delay

            while True:
                try:
                    return func(*args, **kwargs)
                except exceptions as e:
                    if should_retry is not None and not should_retry(e):
                        raise
                    if attempt >= max_attempts:
                        logger.error(
                            f"Function {func.__name__} failed after {max_attempts} attempts: {e}"
                        )
                        raise RetryError(
                            f"Failed after {max_attempts} attempts: {e}", attempt, e
                        ) from e

                    logger.warning(
                        f"Attempt {attempt}/{max_attempts} failed for {func.__name__}: {e}. "
                        f"Retrying in {current_delay}s..."
                    )

                    if on_retry:
                        on_retry(e, attempt)

                    time.sleep(current_delay)
                    current_delay *= backoff
                    attempt += 1

        return wrapper

    return decorator
