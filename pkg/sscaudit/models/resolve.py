"""Turn a model spec string into a model client."""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import ValidationError

from ..config import HarnessSettings
from ..core.errors import InvalidParams, UsageError
from ..core.item import EvaluationItem
from .base import ModelClient
from .cache import ResponseCache
from .http_client import API_KEY_ENV, EndpointConfig, HTTPModelClient
from .mocks import MockModel, MockSpec
from .scaled_sim import make_scaled_sim

logger = logging.getLogger(__name__)

MODEL_SPEC_HELP = "mock:NAME[:key=value,...] | http:MODEL_ID | sim:N"


def _parse_kv(text: str) -> Dict[str, Any]:
    params: Dict[str, Any] = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise UsageError(f"Model parameter '{part}' is not of the form key=value")
        params[key.strip()] = value.strip()
    return params


def resolve_model(
    spec: str,
    items: Mapping[str, EvaluationItem],
    settings: Optional[HarnessSettings] = None,
    cache_dir: Optional[Path] = None,
) -> ModelClient:
    """
    Build the model client named by spec.

    Args:
        spec: One of mock:NAME[:k=v,...], http:MODEL_ID, sim:N
        items: Items by id (mocks and the simulator consult them)
        settings: Harness settings (seed, endpoint, family)
        cache_dir: Response cache directory for http models (default settings.cache_dir)

    Raises:
        UsageError: Unrecognized spec
        InvalidParams: Parameters out of range
    """
    settings = settings or HarnessSettings()
    kind, _, rest = spec.partition(":")

    if kind == "mock":
        name, _, param_text = rest.partition(":")
        params = {"seed": settings.seed, **_parse_kv(param_text)}
        try:
            mock_spec = MockSpec(kind=name, **params)
        except ValidationError as e:
            raise InvalidParams(f"Invalid mock spec '{spec}': {e}") from e
        return MockModel(mock_spec, items)

    if kind == "http":
        if not rest:
            raise UsageError(f"Model spec '{spec}' needs a model id ({MODEL_SPEC_HELP})")
        config = EndpointConfig(
            base_url=settings.base_url,
            model_id=rest,
            api_key=os.environ.get(API_KEY_ENV),
            max_tokens=settings.max_tokens,
            timeout_s=settings.timeout_s,
        )
        cache = ResponseCache(cache_dir or Path(settings.cache_dir))
        logger.info(f"Using endpoint {config.base_url} for {rest} (cache: {cache.cache_dir})")
        return HTTPModelClient(config, cache=cache)

    if kind == "sim":
        try:
            scale = float(rest)
        except ValueError as e:
            raise UsageError(f"Model spec '{spec}' needs a numeric scale") from e
        return make_scaled_sim(scale, settings.family, items, settings.seed)

    raise UsageError(f"Unrecognized model spec '{spec}' (expected {MODEL_SPEC_HELP})")
