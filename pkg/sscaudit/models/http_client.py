"""Remote chat-completions back-end."""

import base64
import json
import logging
import time
from typing import Any, Dict, List, Optional

import httpx
from pydantic import BaseModel, ConfigDict, Field

from ..core.bundle import PromptBundle
from ..core.errors import MalformedResponse, ModelError, RateLimited, Timeout, TransportError
from ..core.transcript import Transcript
from ..utils.retry import RetryError, retry
from .cache import ResponseCache

logger = logging.getLogger(__name__)
logging.getLogger("httpx").setLevel(logging.WARNING)

API_KEY_ENV = "SSC_AUDIT_API_KEY"


class EndpointConfig(BaseModel):
    """Connection settings of an OpenAI-compatible endpoint."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    base_url: str = "http://localhost:8000/v1"
    model_id: str
    api_key: Optional[str] = Field(default=None, repr=False)
    max_tokens: int = Field(default=64, ge=1)
    timeout_s: float = Field(default=60.0, gt=0)
    max_attempts: int = Field(default=4, ge=1)
    retry_delay_s: float = Field(default=1.0, ge=0)
    backoff: float = Field(default=2.0, ge=1)


def png_data_url(png: bytes) -> str:
    return "data:image/png;base64," + base64.b64encode(png).decode("ascii")


def build_request(bundle: PromptBundle, config: EndpointConfig) -> Dict[str, Any]:
    """
    Chat-completions body for a bundle: text part first, then one image part
    per image. The text part is omitted when the bundle has no text.
    """
    content: List[Dict[str, Any]] = []
    if bundle.text:
        content.append({"type": "text", "text": bundle.text})
    for image in bundle.images:
        content.append(
            {"type": "image_url", "image_url": {"url": png_data_url(image.to_png_bytes())}}
        )
    return {
        "model": config.model_id,
        "temperature": 0,
        "max_tokens": config.max_tokens,
        "messages": [{"role": "user", "content": content}],
    }


def canonical_bytes(payload: Dict[str, Any]) -> bytes:
    return json.dumps(payload, sort_keys=True, ensure_ascii=True, separators=(",", ":")).encode(
        "utf-8"
    )


class HTTPModelClient:
    """
    Model client for a remote chat-completions endpoint.

    Retries transport failures, timeouts and 429s with exponential backoff
    (1s, 2s, 4s by default) and consults the response cache before any call.
    """

    def __init__(
        self,
        config: EndpointConfig,
        cache: Optional[ResponseCache] = None,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        """
        Initialize client.

        Args:
            config: Endpoint settings
            cache: Optional response cache
            transport: Optional httpx transport (tests pass httpx.MockTransport)
        """
        self.config = config
        self.cache = cache
        headers = {"Content-Type": "application/json"}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        self._client = httpx.Client(
            base_url=config.base_url.rstrip("/"),
            headers=headers,
            timeout=config.timeout_s,
            transport=transport,
        )

    @property
    def model_id(self) -> str:
        return self.config.model_id

    def close(self) -> None:
        self._client.close()

    def _post(self, body: bytes) -> str:
        try:
            response = self._client.post("/chat/completions", content=body)
        except httpx.TimeoutException as e:
            raise Timeout(f"Request timed out after {self.config.timeout_s}s: {e}") from e
        except httpx.TransportError as e:
            raise TransportError(f"Transport failure: {e}") from e

        if response.status_code == 429:
            raise RateLimited("HTTP 429 Too Many Requests")
        if response.status_code >= 500:
            raise TransportError(f"HTTP {response.status_code} from endpoint")
        if response.status_code >= 400:
            raise MalformedResponse(f"HTTP {response.status_code}: {response.text[:200]}")

        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise MalformedResponse(f"Unexpected response shape: {e}") from e
        if not isinstance(content, str):
            raise MalformedResponse("choices[0].message.content is not a string")
        return content

    def answer(self, bundle: PromptBundle) -> Transcript:
        """
        Answer a bundle via the endpoint.

        Raises:
            ModelError: Permanent failure; `attempts` holds the number of calls made
        """
        body = canonical_bytes(build_request(bundle, self.config))
        key = ResponseCache.make_key(self.model_id, bundle.condition.value, body)

        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                return Transcript(
                    item_id=bundle.item_id,
                    condition=bundle.condition,
                    model_id=self.model_id,
                    raw_text=cached["raw_text"],
                    cache_hit=True,
                )

        attempts = 0

        @retry(
            max_attempts=self.config.max_attempts,
            delay=self.config.retry_delay_s,
            backoff=self.config.backoff,
            exceptions=(ModelError,),
            should_retry=lambda e: getattr(e, "retryable", False),
        )
        def call() -> str:
            nonlocal attempts
            attempts += 1
            return self._post(body)

        started = time.perf_counter()
        try:
            raw_text = call()
        except RetryError as e:
            error = e.last_error
            if isinstance(error, ModelError):
                error.attempts = attempts
                raise error from e
            raise
        except ModelError as e:
            e.attempts = attempts
            raise
        latency_ms = (time.perf_counter() - started) * 1000.0

        if self.cache is not None:
            self.cache.set(
                key,
                {
                    "model_id": self.model_id,
                    "condition": bundle.condition.value,
                    "item_id": bundle.item_id,
                    "raw_text": raw_text,
                },
            )
        return Transcript(
            item_id=bundle.item_id,
            condition=bundle.condition,
            model_id=self.model_id,
            raw_text=raw_text,
            latency_ms=latency_ms,
            attempt_count=attempts,
        )
