"""Run configuration: every tunable constant with its default, serializable
to a flat key=value file so runs are reproducible from a single artifact."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .llm.client import LlmClientConfig
from .resample import KernelConfig
from .segmenter import DetectionConfig


@dataclass
class RunConfig:
    # pre-processing
    sigma: float = 0.05
    output_rate: float = 20.0
    # rule engine
    theta: float = 0.25
    min_segment_len: int = 10
    window: int = 5
    persistence: int = 5
    lam: float = 0.5
    grammar: bool = False
    # LLM endpoint
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4-turbo"
    api_key_env: str = "PICKSEG_API_KEY"
    timeout: float = 60.0
    max_retries: int = 3
    # generation
    seed: int = 0

    def kernel_config(self) -> KernelConfig:
        return KernelConfig(sigma=self.sigma, output_rate=self.output_rate)

    def detection_config(self) -> DetectionConfig:
        return DetectionConfig(theta=self.theta,
                               min_segment_len=self.min_segment_len,
                               window=self.window,
                               persistence=self.persistence,
                               lam=self.lam, grammar=self.grammar)

    def client_config(self) -> LlmClientConfig:
        return LlmClientConfig(endpoint=self.endpoint, model=self.model,
                               api_key_env=self.api_key_env,
                               timeout=self.timeout,
                               max_retries=self.max_retries)

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with non-None overrides applied."""
        values = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **values)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in types:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = _coerce(raw, types[key])
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
        return cls(**values)

    def to_file(self, path):
        lines = [f"{f.name}={getattr(self, f.name)}"
                 for f in dataclasses.fields(self)]
        Path(path).write_text("\n".join(lines) + "\n")


def _coerce(raw, type_name):
    if type_name in ("bool", bool):
        lowered = raw.lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if type_name in ("int", int):
        return int(raw)
    if type_name in ("float", float):
        return float(raw)
    return raw
