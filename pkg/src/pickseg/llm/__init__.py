"""Prompt construction, chat-completion client, and output parsing."""

from .client import ChatCompletionClient, LlmClientConfig, MockChatClient, \
    run_inference
from .formats import format_segments, parse_segments, parse_series_table, \
    serialize_series
from .prompts import (Approach, PromptBundle, RULE_PHRASES, build_feedback_notes,
                      build_prompt, bundle_messages)

__all__ = [
    "Approach", "PromptBundle", "RULE_PHRASES", "build_feedback_notes",
    "build_prompt", "bundle_messages", "ChatCompletionClient",
    "LlmClientConfig", "MockChatClient", "run_inference", "format_segments",
    "parse_segments", "parse_series_table", "serialize_series",
]
