"""Chat-completion transport with retries, plus a mock for offline runs.

The wire protocol is the generic JSON ``{model, messages}`` chat-completion
shape over HTTPS; any compatible endpoint slots in. The API key is read from
an environment variable, never from config files.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone

import requests

from ..errors import ParseError, PickSegError, TransportError
from .formats import parse_segments
from .prompts import PromptBundle, bundle_messages


@dataclass(frozen=True)
class LlmClientConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4-turbo"
    api_key_env: str = "PICKSEG_API_KEY"
    timeout: float = 60.0
    max_retries: int = 3
    backoff_base: float = 0.5
    temperature: float = 0.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


class ChatCompletionClient:
    """Blocking HTTPS client for a chat-completion endpoint."""

    def __init__(self, config: LlmClientConfig | None = None):
        self.config = config or LlmClientConfig()

    def complete(self, messages) -> str:
        cfg = self.config
        payload = {"model": cfg.model, "messages": list(messages),
                   "temperature": cfg.temperature}
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(cfg.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        try:
            resp = requests.post(cfg.endpoint, json=payload, headers=headers,
                                 timeout=cfg.timeout)
            resp.raise_for_status()
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        except requests.RequestException as exc:
            raise TransportError(f"chat endpoint request failed: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise TransportError(f"malformed chat response: {exc}") from exc


class MockChatClient:
    """Scripted client for tests and offline CLI runs.

    ``replies`` is a sequence of strings (returned in order) and/or exception
    instances (raised in order). All received message lists are recorded.
    """

    def __init__(self, replies):
        self._replies = list(replies)
        self.calls = []

    def complete(self, messages) -> str:
        self.calls.append(list(messages))
        if not self._replies:
            raise TransportError("mock client ran out of scripted replies")
        reply = self._replies.pop(0)
        if isinstance(reply, BaseException):
            raise reply
        return str(reply)


def _request_hash(messages) -> str:
    blob = json.dumps(messages, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(blob.encode()).hexdigest()


def _audit(audit_log, record):
    if audit_log is None:
        return
    line = json.dumps(record, ensure_ascii=False)
    if hasattr(audit_log, "write"):
        audit_log.write(line + "\n")
    else:
        with open(audit_log, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")


def run_inference(bundle: PromptBundle, client, *, max_retries=None,
                  backoff_base=0.5, sleep=time.sleep, audit_log=None,
                  sequence_id=None, approach=None):
    """Send a bundle, retry transient failures, parse the reply.

    The result is exactly the parse of the raw reply; the raw reply is
    logged verbatim for audit. ``max_retries`` counts additional attempts
    after the first (defaults to the client's config when it has one).
    """
    if max_retries is None:
        cfg = getattr(client, "config", None)
        max_retries = cfg.max_retries if cfg is not None else 3
        backoff_base = cfg.backoff_base if cfg is not None else backoff_base
    messages = bundle_messages(bundle)
    attempts = max_retries + 1
    last_exc = None
    raw = None
    for attempt in range(attempts):
        try:
            raw = client.complete(messages)
            break
        except TransportError as exc:
            last_exc = exc
            if attempt + 1 < attempts:
                sleep(backoff_base * (2.0 ** attempt))
    else:
        raise TransportError(
            f"chat call failed after {attempts} attempts: {last_exc}"
        ) from last_exc
    _audit(audit_log, {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "approach": approach,
        "sequence_id": sequence_id,
        "request_hash": _request_hash(messages),
        "raw_reply": raw,
    })
    try:
        return parse_segments(raw)
    except PickSegError as exc:
        raise ParseError(f"could not parse model reply: {exc}",
                         raw_reply=raw) from exc
