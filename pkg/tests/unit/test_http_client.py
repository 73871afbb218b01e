"""Unit tests for the chat-completions client, its cache and retry policy."""

import json

import httpx
import numpy as np
import pytest

from sscaudit.core.bundle import PromptBundle
from sscaudit.core.condition import Condition
from sscaudit.core.errors import MalformedResponse, RateLimited, TransportError
from sscaudit.core.raster import Raster
from sscaudit.models.cache import ResponseCache
from sscaudit.models.http_client import EndpointConfig, HTTPModelClient, build_request

IMAGE = Raster(np.full((4, 6), 200, dtype=np.uint8))


@pytest.fixture
def sleeps(monkeypatch):
    """Record backoff sleeps instead of waiting."""
    recorded = []
    monkeypatch.setattr("sscaudit.utils.retry.time.sleep", recorded.append)
    return recorded


def completion(text):
    return httpx.Response(200, json={"choices": [{"message": {"content": text}}]})


def make_client(handler, cache=None, **config):
    transport = httpx.MockTransport(handler)
    endpoint = EndpointConfig(model_id="vlm-test", **config)
    return HTTPModelClient(endpoint, cache=cache, transport=transport)


def full_bundle():
    return PromptBundle("item-1", Condition.FULL, (IMAGE,), "Which bar?")


def test_request_body_shape():
    """Test text comes first, then one image part per image."""
    body = build_request(full_bundle(), EndpointConfig(model_id="vlm-test", max_tokens=16))

    assert body["model"] == "vlm-test"
    assert body["temperature"] == 0
    assert body["max_tokens"] == 16
    content = body["messages"][0]["content"]
    assert content[0] == {"type": "text", "text": "Which bar?"}
    assert content[1]["type"] == "image_url"
    assert content[1]["image_url"]["url"].startswith("data:image/png;base64,")


def test_symv_request_has_no_text_part():
    """Test pixel-only bundles send a single image part."""
    bundle = PromptBundle("item-1", Condition.SYMV, (IMAGE,), "")

    content = build_request(bundle, EndpointConfig(model_id="m"))["messages"][0]["content"]

    assert [part["type"] for part in content] == ["image_url"]


def test_successful_answer(sleeps):
    """Test a 200 response becomes a transcript with one attempt."""
    seen = []

    def handler(request):
        seen.append(json.loads(request.content))
        return completion("B")

    transcript = make_client(handler).answer(full_bundle())

    assert transcript.raw_text == "B"
    assert transcript.attempt_count == 1
    assert transcript.cache_hit is False
    assert transcript.model_id == "vlm-test"
    assert seen[0]["model"] == "vlm-test"
    assert sleeps == []


def test_rate_limit_exhausts_retries(sleeps):
    """Test four 429 responses fail with RateLimited after 1s, 2s, 4s backoff."""
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(429)

    with pytest.raises(RateLimited) as exc:
        make_client(handler).answer(full_bundle())

    assert exc.value.attempts == 4
    assert len(calls) == 4
    assert sleeps == [1.0, 2.0, 4.0]


def test_transient_failure_then_success(sleeps):
    """Test a 5xx followed by success returns after two attempts."""
    responses = iter([httpx.Response(503), completion("yes")])

    transcript = make_client(lambda request: next(responses)).answer(full_bundle())

    assert transcript.raw_text == "yes"
    assert transcript.attempt_count == 2
    assert sleeps == [1.0]


def test_connection_error_is_transport_error(sleeps):
    """Test connection failures are retried and surface as TransportError."""

    def handler(request):
        raise httpx.ConnectError("refused", request=request)

    with pytest.raises(TransportError) as exc:
        make_client(handler, max_attempts=2).answer(full_bundle())

    assert exc.value.attempts == 2


def test_client_error_is_not_retried(sleeps):
    """Test 4xx responses other than 429 fail at once."""
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(400, text="bad request")

    with pytest.raises(MalformedResponse, match="HTTP 400") as exc:
        make_client(handler).answer(full_bundle())

    assert len(calls) == 1
    assert exc.value.attempts == 1
    assert sleeps == []


def test_malformed_body(sleeps):
    """Test a 200 without choices is a malformed response."""
    with pytest.raises(MalformedResponse, match="response shape"):
        make_client(lambda request: httpx.Response(200, json={"id": "x"})).answer(full_bundle())


def test_cache_hit_skips_network(tmp_path, sleeps):
    """Test a cached request makes no call and reports zero attempts."""
    calls = []

    def handler(request):
        calls.append(request)
        return completion("C")

    cache = ResponseCache(tmp_path / "cache")
    first = make_client(handler, cache=cache).answer(full_bundle())
    second = make_client(handler, cache=cache).answer(full_bundle())

    assert len(calls) == 1
    assert first.cache_hit is False
    assert second.cache_hit is True
    assert second.attempt_count == 0
    assert second.raw_text == "C"
    assert len(list((tmp_path / "cache").glob("*.json"))) == 1


def test_cache_keys_separate_models_and_conditions():
    """Test the key covers model id, condition and request bytes."""
    key = ResponseCache.make_key("m", "full", b"{}")

    assert key == ResponseCache.make_key("m", "full", b"{}")
    assert key != ResponseCache.make_key("n", "full", b"{}")
    assert key != ResponseCache.make_key("m", "symv", b"{}")
    assert key != ResponseCache.make_key("m", "full", b"{ }")


def test_cache_ignores_corrupt_entries(tmp_path):
    """Test unreadable entries count as misses."""
    cache = ResponseCache(tmp_path)
    (tmp_path / "abc.json").write_text("{truncated")

    assert cache.get("abc") is None
    assert cache.misses == 1
    cache.set("abc", {"raw_text": "ok"})
    assert cache.get("abc") == {"raw_text": "ok"}
    assert cache.hit_rate() == 0.5
