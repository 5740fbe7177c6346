"""Chat-completion gateway: wire client, scripted mock, retries, accounting.

Every agent in the pipeline talks through :func:`complete`, which works
against any backend exposing ``send(config, messages)``. Three backends are
provided: an HTTP client for OpenAI-compatible endpoints, a scripted replay
backend that makes batch runs fully deterministic in tests, and a callable
backend for content-aware fakes.
"""

from __future__ import annotations

import os
import random
import threading
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import requests

from .errors import (
    ProtocolError,
    ScriptExhaustedError,
    SynthPipeError,
    TransportError,
    ValidationError,
)

API_KEY_ENV = "SYNTHPIPE_API_KEY"

ROLES = ("system", "user", "assistant")

AGENT_ROLES = (
    "scenario_provider",
    "scenario_judge",
    "note_writer",
    "note_polisher",
    "dialogue_generator",
    "dialogue_polisher",
)


@dataclass(frozen=True)
class AgentConfig:
    """Sampling parameters sent with every request for one agent."""

    model_id: str
    temperature: float = 0.0
    max_tokens: int = 4000
    top_p: float = 1.0
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0

    def __post_init__(self):
        if not self.model_id:
            raise ValidationError("model_id must be non-empty")
        if self.temperature < 0:
            raise ValidationError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise ValidationError(f"max_tokens must be >= 1, got {self.max_tokens}")
        if not 0 < self.top_p <= 1:
            raise ValidationError(f"top_p must be in (0, 1], got {self.top_p}")


def default_agent_configs(model_id: str = "gpt-4o") -> dict[str, AgentConfig]:
    """The shipped per-agent sampling defaults, keyed by agent role."""
    return {
        "scenario_provider": AgentConfig(model_id, temperature=1.0, max_tokens=4000),
        "scenario_judge": AgentConfig(model_id, temperature=0.0, max_tokens=4000),
        "note_writer": AgentConfig(model_id, temperature=0.9, max_tokens=4000),
        "note_polisher": AgentConfig(model_id, temperature=0.0, max_tokens=4000),
        "dialogue_generator": AgentConfig(model_id, temperature=0.7, max_tokens=4095),
        "dialogue_polisher": AgentConfig(model_id, temperature=0.5, max_tokens=4095),
    }


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValidationError(f"unknown message role {self.role!r}")
        if self.role in ("system", "user") and not self.content:
            raise ValidationError(f"{self.role} message content must be non-empty")


def system(content: str) -> ChatMessage:
    return ChatMessage("system", content)


def user(content: str) -> ChatMessage:
    return ChatMessage("user", content)


def assistant(content: str) -> ChatMessage:
    return ChatMessage("assistant", content)


@dataclass(frozen=True)
class CompletionResult:
    text: str
    prompt_tokens: int
    completion_tokens: int
    attempts: int


class TransientBackendError(SynthPipeError):
    """A failure worth retrying: timeout, connection loss, 429 or 5xx."""


@dataclass(frozen=True)
class RetryPolicy:
    """Exponential backoff with jitter around each delay."""

    max_attempts: int = 5
    base_delay: float = 0.5
    max_delay: float = 30.0
    jitter: float = 0.25
    sleep: Callable[[float], None] = time.sleep
    rng: random.Random = field(default_factory=random.Random)

    def delay(self, attempt: int) -> float:
        raw = min(self.max_delay, self.base_delay * 2 ** (attempt - 1))
        return raw * (1 + self.jitter * (2 * self.rng.random() - 1))

    @classmethod
    def immediate(cls, max_attempts: int = 5) -> "RetryPolicy":
        """No actual sleeping; used by tests and mock runs."""
        return cls(max_attempts=max_attempts, sleep=lambda _: None)


@dataclass
class _RoleUsage:
    prompt_tokens: int = 0
    completion_tokens: int = 0
    calls: int = 0


class UsageLedger:
    """Thread-safe cumulative token and pair counts for a run."""

    def __init__(self):
        self._lock = threading.Lock()
        self._by_role: dict[str, _RoleUsage] = {}
        self._pairs_completed = 0

    def record(self, role: str, prompt_tokens: int, completion_tokens: int) -> None:
        with self._lock:
            usage = self._by_role.setdefault(role, _RoleUsage())
            usage.prompt_tokens += prompt_tokens
            usage.completion_tokens += completion_tokens
            usage.calls += 1

    def add_pair(self, count: int = 1) -> None:
        with self._lock:
            self._pairs_completed += count

    def merge(self, other: "UsageLedger") -> None:
        snapshot = other.snapshot()
        with self._lock:
            for role, usage in snapshot["by_role"].items():
                mine = self._by_role.setdefault(role, _RoleUsage())
                mine.prompt_tokens += usage["prompt_tokens"]
                mine.completion_tokens += usage["completion_tokens"]
                mine.calls += usage["calls"]
            self._pairs_completed += snapshot["pairs_completed"]

    @property
    def pairs_completed(self) -> int:
        with self._lock:
            return self._pairs_completed

    @property
    def total_prompt_tokens(self) -> int:
        with self._lock:
            return sum(u.prompt_tokens for u in self._by_role.values())

    @property
    def total_completion_tokens(self) -> int:
        with self._lock:
            return sum(u.completion_tokens for u in self._by_role.values())

    @property
    def total_calls(self) -> int:
        with self._lock:
            return sum(u.calls for u in self._by_role.values())

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "by_role": {
                    role: {
                        "prompt_tokens": u.prompt_tokens,
                        "completion_tokens": u.completion_tokens,
                        "calls": u.calls,
                    }
                    for role, u in sorted(self._by_role.items())
                },
                "pairs_completed": self._pairs_completed,
            }


@dataclass(frozen=True)
class CostEstimate:
    pairs_completed: int
    price_per_pair: float
    estimated_cost: float
    prompt_tokens: int
    completion_tokens: int


def estimate_cost(ledger: UsageLedger, price_per_pair: float) -> CostEstimate:
    """Coarse run cost: completed pairs times a flat per-pair price.

    Raw token totals ride along for anyone pricing by token instead.
    """
    if price_per_pair < 0:
        raise ValidationError(f"price_per_pair must be >= 0, got {price_per_pair}")
    pairs = ledger.pairs_completed
    return CostEstimate(
        pairs_completed=pairs,
        price_per_pair=price_per_pair,
        estimated_cost=pairs * price_per_pair,
        prompt_tokens=ledger.total_prompt_tokens,
        completion_tokens=ledger.total_completion_tokens,
    )


@dataclass(frozen=True)
class ScriptedFailure:
    """Script entry that makes the mock backend fail one request."""

    status: int | None = None  # None simulates a timeout/connection drop
    message: str = "scripted failure"

    @property
    def retryable(self) -> bool:
        return self.status is None or self.status == 429 or self.status >= 500


TRANSIENT_FAILURE = ScriptedFailure()


class ScriptedBackend:
    """Replays a fixed script of responses/failures, recording every request.

    The script is consumed strictly in order; asking for more completions
    than the script holds raises :class:`ScriptExhaustedError`, which keeps
    tests honest about exactly how many calls a flow makes.
    """

    def __init__(self, script: Sequence[str | ScriptedFailure]):
        self._script = list(script)
        self._cursor = 0
        self._lock = threading.Lock()
        self.requests: list[tuple[AgentConfig, tuple[ChatMessage, ...]]] = []

    def __len__(self) -> int:
        return len(self._script)

    @property
    def remaining(self) -> int:
        with self._lock:
            return len(self._script) - self._cursor

    def send(self, config: AgentConfig, messages: Sequence[ChatMessage]):
        with self._lock:
            self.requests.append((config, tuple(messages)))
            if self._cursor >= len(self._script):
                raise ScriptExhaustedError(
                    f"scripted backend exhausted after {len(self._script)} responses"
                )
            entry = self._script[self._cursor]
            self._cursor += 1
        if isinstance(entry, ScriptedFailure):
            if entry.retryable:
                raise TransientBackendError(entry.message)
            raise ProtocolError(entry.message, status=entry.status, body=entry.message)
        prompt_tokens = sum(len(m.content.split()) for m in messages)
        completion_tokens = len(entry.split())
        return entry, prompt_tokens, completion_tokens


def create_scripted_backend(script: Sequence[str | ScriptedFailure]) -> ScriptedBackend:
    return ScriptedBackend(script)


class CallableBackend:
    """Backend delegating to ``fn(config, messages) -> str``; for fakes."""

    def __init__(self, fn: Callable[[AgentConfig, Sequence[ChatMessage]], str]):
        self._fn = fn
        self._lock = threading.Lock()
        self.requests: list[tuple[AgentConfig, tuple[ChatMessage, ...]]] = []

    def send(self, config: AgentConfig, messages: Sequence[ChatMessage]):
        with self._lock:
            self.requests.append((config, tuple(messages)))
        text = self._fn(config, messages)
        prompt_tokens = sum(len(m.content.split()) for m in messages)
        return text, prompt_tokens, len(text.split())


class HttpBackend:
    """POSTs to ``<base_url>/chat/completions`` on an OpenAI-compatible API.

    The bearer token comes from ``api_key`` if given, otherwise from the
    environment variable named by ``api_key_env``; with neither set the
    request is sent unauthenticated (fine for local endpoints).
    """

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        api_key_env: str = API_KEY_ENV,
        timeout: float = 120.0,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self._api_key = api_key
        self._api_key_env = api_key_env
        self._timeout = timeout
        self._session = session or requests.Session()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = self._api_key or os.environ.get(self._api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def send(self, config: AgentConfig, messages: Sequence[ChatMessage]):
        payload = {
            "model": config.model_id,
            "messages": [{"role": m.role, "content": m.content} for m in messages],
            "temperature": config.temperature,
            "max_tokens": config.max_tokens,
            "top_p": config.top_p,
            "frequency_penalty": config.frequency_penalty,
            "presence_penalty": config.presence_penalty,
        }
        try:
            response = self._session.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=self._headers(),
                timeout=self._timeout,
            )
        except (requests.Timeout, requests.ConnectionError) as exc:
            raise TransientBackendError(str(exc)) from exc

        if response.status_code == 429 or response.status_code >= 500:
            raise TransientBackendError(
                f"status {response.status_code}: {response.text[:200]}"
            )
        if not 200 <= response.status_code < 300:
            raise ProtocolError(
                f"endpoint returned status {response.status_code}",
                status=response.status_code,
                body=response.text[:500],
            )
        try:
            data = response.json()
            text = data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(
                f"malformed completion response: {exc}",
                status=response.status_code,
                body=response.text[:500],
            ) from exc
        usage = data.get("usage") or {}
        return (
            text,
            int(usage.get("prompt_tokens", 0)),
            int(usage.get("completion_tokens", 0)),
        )


def complete(
    backend,
    config: AgentConfig,
    messages: Sequence[ChatMessage],
    *,
    ledger: UsageLedger | None = None,
    role: str = "",
    policy: RetryPolicy | None = None,
) -> CompletionResult:
    """One chat completion with retries on transient failures.

    The first message must be the system message. Usage is recorded against
    ``role`` in the ledger when one is supplied. Exhausting the retry cap
    raises :class:`TransportError`; non-retryable endpoint answers surface
    as :class:`ProtocolError` immediately.
    """
    if not messages:
        raise ValidationError("messages must be non-empty")
    if messages[0].role != "system":
        raise ValidationError("first message must have the system role")
    policy = policy or RetryPolicy()

    last_error: Exception | None = None
    for attempt in range(1, policy.max_attempts + 1):
        try:
            text, prompt_tokens, completion_tokens = backend.send(config, messages)
        except TransientBackendError as exc:
            last_error = exc
            if attempt < policy.max_attempts:
                policy.sleep(policy.delay(attempt))
            continue
        if ledger is not None:
            ledger.record(role or config.model_id, prompt_tokens, completion_tokens)
        return CompletionResult(
            text=text,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            attempts=attempt,
        )
    raise TransportError(
        f"gave up after {policy.max_attempts} attempts: {last_error}"
    ) from last_error


def with_model(configs: dict[str, AgentConfig], model_id: str) -> dict[str, AgentConfig]:
    """Same sampling parameters, different backbone model for every agent."""
    return {role: replace(cfg, model_id=model_id) for role, cfg in configs.items()}
