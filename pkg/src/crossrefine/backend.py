"""Chat-completion backends: a real HTTP client and a scripted test double.

Both speak the same contract: ``complete(prompt, params) -> Completion``.
Transient failures are retried with exponential backoff; a scripted backend
resolves prompts by fingerprint and never falls back silently.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field

import requests

from .analysis.text import tokenize
from .errors import CrossRefineError

API_KEY_ENV = "CROSSREFINE_API_KEY"
SCRIPTED_SCHEME = "scripted://"


class BackendUnavailable(CrossRefineError):
    """The model service failed permanently or retries were exhausted."""


class ContextOverflow(CrossRefineError):
    """Prompt plus generation budget exceed the context window (strict mode)."""


class EmptyCompletion(CrossRefineError):
    """The service returned empty text."""


class ScriptMiss(CrossRefineError):
    def __init__(self, fingerprint: str):
        super().__init__(f"no script entry for prompt fingerprint {fingerprint}")
        self.fingerprint = fingerprint


class _TransientFailure(Exception):
    """Internal marker for failures worth retrying."""


def prompt_fingerprint(prompt: str) -> str:
    """Stable identifier of a prompt's exact text."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.0
    max_new_tokens: int = 512
    stop_sequences: tuple[str, ...] = ()
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_new_tokens <= 0:
            raise ValueError("max_new_tokens must be positive")


@dataclass(frozen=True)
class BackendConfig:
    model_id: str
    endpoint: str
    timeout_ms: int = 120_000
    max_retries: int = 2
    context_budget_tokens: int = 8_000

    def __post_init__(self) -> None:
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class Completion:
    text: str
    finish_reason: str  # stop | length | error
    latency_ms: int
    attempt_count: int


def backoff_delays(max_retries: int, base_s: float = 0.5) -> list[float]:
    """Sleep before retry i is base * 2**i; delays never decrease."""
    return [base_s * (2**i) for i in range(max_retries)]


def _complete_with_retries(attempt_fn, config: BackendConfig, sleeper) -> Completion:
    delays = backoff_delays(config.max_retries)
    last_failure: Exception | None = None
    for attempt_index in range(config.max_retries + 1):
        try:
            text, finish_reason, latency_ms = attempt_fn(attempt_index)
        except _TransientFailure as exc:
            last_failure = exc
            if attempt_index < config.max_retries and sleeper is not None:
                sleeper(delays[attempt_index])
            continue
        if not text:
            raise EmptyCompletion(f"{config.model_id} returned empty text")
        return Completion(
            text=text,
            finish_reason=finish_reason,
            latency_ms=latency_ms,
            attempt_count=attempt_index + 1,
        )
    raise BackendUnavailable(
        f"{config.model_id} failed after {config.max_retries + 1} attempts: {last_failure}"
    ) from last_failure


def check_context(prompt: str, params: GenerationParams, config: BackendConfig, strict: bool) -> bool:
    """True when the prompt plus generation budget fit the context window.

    Token counts use the package tokenizer; model-exact counting is out of
    scope, so the budget should carry a safety margin. In strict mode an
    overflowing prompt raises ContextOverflow.
    """
    total = len(tokenize(prompt)) + params.max_new_tokens
    if total <= config.context_budget_tokens:
        return True
    if strict:
        raise ContextOverflow(
            f"prompt ({total} tokens with generation budget) exceeds "
            f"context budget {config.context_budget_tokens}"
        )
    return False


class HttpBackend:
    """Chat-completion client over HTTP with retry, backoff and an in-flight cap.

    Wire format: POST {model, messages:[{role:"user", content}], temperature,
    max_tokens, stop, seed} -> {choices:[{message:{content}, finish_reason}]}.
    The API key, when present in CROSSREFINE_API_KEY, travels as a bearer token.
    """

    def __init__(
        self,
        config: BackendConfig,
        max_in_flight: int = 4,
        strict_context: bool = False,
        sleeper=time.sleep,
        session: requests.Session | None = None,
    ):
        self.config = config
        self.strict_context = strict_context
        self._sleeper = sleeper
        self._semaphore = threading.Semaphore(max_in_flight)
        self._session = session or requests.Session()

    def _request_body(self, prompt: str, params: GenerationParams) -> dict:
        body = {
            "model": self.config.model_id,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "max_tokens": params.max_new_tokens,
            "stop": list(params.stop_sequences),
        }
        if params.seed is not None:
            body["seed"] = params.seed
        return body

    def _attempt(self, prompt: str, params: GenerationParams):
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(API_KEY_ENV)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        started = time.monotonic()
        try:
            response = self._session.post(
                self.config.endpoint,
                json=self._request_body(prompt, params),
                headers=headers,
                timeout=self.config.timeout_ms / 1000.0,
            )
        except requests.RequestException as exc:
            raise _TransientFailure(str(exc)) from exc
        latency_ms = int((time.monotonic() - started) * 1000)
        if response.status_code >= 500 or response.status_code == 429:
            raise _TransientFailure(f"HTTP {response.status_code}")
        if response.status_code != 200:
            raise BackendUnavailable(
                f"{self.config.model_id}: HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            choice = response.json()["choices"][0]
            text = choice["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise BackendUnavailable(f"malformed completion response: {exc}") from exc
        finish_reason = choice.get("finish_reason", "stop")
        if finish_reason not in ("stop", "length"):
            finish_reason = "error"
        return text or "", finish_reason, latency_ms

    def complete(self, prompt: str, params: GenerationParams) -> Completion:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        check_context(prompt, params, self.config, self.strict_context)
        with self._semaphore:
            return _complete_with_retries(
                lambda _i: self._attempt(prompt, params), self.config, self._sleeper
            )


@dataclass(frozen=True)
class ScriptEntry:
    """Scripted outcome for one prompt: optional transient failures, then text.

    ``text=None`` means the prompt fails on every attempt.
    """

    text: str | None = None
    fail_times: int = 0
    latency_ms: int = 0
    finish_reason: str = "stop"


class ScriptedBackend:
    """Deterministic backend resolving prompts via a fingerprint-keyed script.

    An unknown fingerprint raises ScriptMiss; there is no silent fallback.
    Failure counting restarts on every complete() call, so replaying a run
    reproduces it exactly.
    """

    def __init__(self, script: dict[str, ScriptEntry], config: BackendConfig, sleeper=None):
        if not script:
            raise ValueError("script must be non-empty")
        self.script = dict(script)
        self.config = config
        self._sleeper = sleeper

    @classmethod
    def from_prompts(cls, outcomes: dict[str, ScriptEntry], config: BackendConfig, **kwargs):
        """Build a backend from full prompt texts instead of fingerprints."""
        return cls(
            {prompt_fingerprint(p): entry for p, entry in outcomes.items()}, config, **kwargs
        )

    @classmethod
    def from_file(cls, path, config: BackendConfig, **kwargs):
        """Load a script file: {"entries": {fingerprint: {text, fail_times, ...}}}.

        Entries may also carry a "prompt" key instead of being keyed by
        fingerprint, in which case the fingerprint is computed on load.
        """
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        script: dict[str, ScriptEntry] = {}
        for key, raw in data["entries"].items():
            entry = ScriptEntry(
                text=raw.get("text"),
                fail_times=int(raw.get("fail_times", 0)),
                latency_ms=int(raw.get("latency_ms", 0)),
                finish_reason=raw.get("finish_reason", "stop"),
            )
            fingerprint = prompt_fingerprint(raw["prompt"]) if "prompt" in raw else key
            script[fingerprint] = entry
        return cls(script, config, **kwargs)

    def complete(self, prompt: str, params: GenerationParams) -> Completion:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        fingerprint = prompt_fingerprint(prompt)
        if fingerprint not in self.script:
            raise ScriptMiss(fingerprint)
        entry = self.script[fingerprint]

        def attempt(attempt_index: int):
            if entry.text is None or attempt_index < entry.fail_times:
                raise _TransientFailure("scripted failure")
            return entry.text, entry.finish_reason, entry.latency_ms

        return _complete_with_retries(attempt, self.config, self._sleeper)


def build_backend(config: BackendConfig, **kwargs):
    """Create the backend a config points at.

    Endpoints with the ``scripted://`` scheme name a script file on disk;
    anything else is treated as an HTTP chat-completion endpoint.
    """
    if config.endpoint.startswith(SCRIPTED_SCHEME):
        path = config.endpoint[len(SCRIPTED_SCHEME):]
        return ScriptedBackend.from_file(path, config, **kwargs)
    return HttpBackend(config, **kwargs)
