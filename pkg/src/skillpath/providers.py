"""Completion backends: live HTTP, mock, recording, replay.

Every pipeline stage talks to a Provider through one method, complete().
The recording wrapper captures request and result pairs keyed by a stable
fingerprint, and the replay provider serves them back bit for bit, which
is what makes end-to-end runs reproducible without network access.

The fingerprint covers prompt, temperature, max_output_tokens and an
occurrence index. The occurrence index disambiguates repeated identical
requests (a retry after a failed extraction, say) so record and replay
stay aligned call for call.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field

import requests

from .errors import (
    BudgetExceeded,
    ProviderError,
    ReplayMiss,
    StorageError,
    TransportError,
)
from .textutil import count_ws_tokens

DEFAULT_MAX_OUTPUT_TOKENS = 4096

API_BASE_ENV = "SKILLPATH_API_BASE"
MODEL_ENV = "SKILLPATH_MODEL"
API_KEY_ENV = "SKILLPATH_API_KEY"
PARALLELISM_ENV = "SKILLPATH_PARALLELISM"
MAX_RETRIES_ENV = "SKILLPATH_MAX_RETRIES"
RETRY_BACKOFF_ENV = "SKILLPATH_RETRY_BACKOFF"

TRANSCRIPT_VERSION = 1


@dataclass(frozen=True)
class TokenUsage:
    prompt_tokens: int
    completion_tokens: int
    total_tokens: int

    def __post_init__(self):
        if self.total_tokens != self.prompt_tokens + self.completion_tokens:
            raise ValueError("total_tokens must equal prompt plus completion")
        if min(self.prompt_tokens, self.completion_tokens) < 0:
            raise ValueError("token counts must be non-negative")

    @classmethod
    def of(cls, prompt_tokens: int, completion_tokens: int) -> TokenUsage:
        return cls(prompt_tokens, completion_tokens, prompt_tokens + completion_tokens)

    @classmethod
    def zero(cls) -> TokenUsage:
        return cls(0, 0, 0)

    def __add__(self, other: TokenUsage) -> TokenUsage:
        return TokenUsage.of(
            self.prompt_tokens + other.prompt_tokens,
            self.completion_tokens + other.completion_tokens,
        )


@dataclass(frozen=True)
class CompletionRequest:
    """One prompt for the backend.

    tag is a short stage label ("similarity", "segment", ...) used in error
    messages and transcripts; it is not part of the fingerprint, so a
    relabeled pipeline still replays old transcripts.
    """

    prompt: str
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    temperature: float = 0.0
    tag: str = ""

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be at least 1")


@dataclass(frozen=True)
class CompletionResult:
    text: str
    usage: TokenUsage
    latency_ms: float = 0.0


def fingerprint(prompt: str, temperature: float, max_output_tokens: int, occurrence: int) -> str:
    """Stable identity of one request within a run."""
    payload = json.dumps(
        {
            "prompt": prompt,
            "temperature": temperature,
            "max_output_tokens": max_output_tokens,
            "occurrence": occurrence,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class _OccurrenceCounter:
    """Counts how many times each (prompt, temperature, max) has been seen."""

    def __init__(self):
        self._lock = threading.Lock()
        self._counts: dict[tuple[str, float, int], int] = {}

    def next_for(self, request: CompletionRequest) -> int:
        key = (request.prompt, request.temperature, request.max_output_tokens)
        with self._lock:
            occ = self._counts.get(key, 0)
            self._counts[key] = occ + 1
        return occ


class Provider:
    """Base completion backend with aggregate token accounting.

    token_budget, when set, is a hard ceiling on total tokens across the
    provider's lifetime; the call that crosses it raises BudgetExceeded.
    """

    name = "base"

    def __init__(self, token_budget: int | None = None):
        self._budget = token_budget
        self._lock = threading.Lock()
        self._total = 0

    @property
    def total_tokens(self) -> int:
        with self._lock:
            return self._total

    def complete(self, request: CompletionRequest) -> CompletionResult:
        result = self._complete(request)
        with self._lock:
            self._total += result.usage.total_tokens
            if self._budget is not None and self._total > self._budget:
                raise BudgetExceeded(self._total, self._budget)
        return result

    def _complete(self, request: CompletionRequest) -> CompletionResult:
        raise NotImplementedError


class MockProvider(Provider):
    """Offline backend with canned replies and whitespace token accounting.

    reply may be a fixed string, a callable of the request, or a finite
    sequence consumed in order. Running a sequence dry raises
    ProviderError so a misconfigured script fails loudly instead of
    looping.
    """

    name = "mock"

    def __init__(self, reply, token_budget: int | None = None):
        super().__init__(token_budget)
        self._reply = reply
        self._seq_lock = threading.Lock()
        if isinstance(reply, (list, tuple)):
            self._queue = list(reply)
        else:
            self._queue = None

    def _complete(self, request: CompletionRequest) -> CompletionResult:
        if self._queue is not None:
            with self._seq_lock:
                if not self._queue:
                    raise ProviderError("mock provider ran out of scripted replies")
                text = self._queue.pop(0)
        elif callable(self._reply):
            text = self._reply(request)
        else:
            text = self._reply
        usage = TokenUsage.of(count_ws_tokens(request.prompt), count_ws_tokens(text))
        return CompletionResult(text=text, usage=usage, latency_ms=0.0)


@dataclass(frozen=True)
class TranscriptEntry:
    fingerprint: str
    request: CompletionRequest
    result: CompletionResult


@dataclass
class Transcript:
    """An ordered record of completed requests, one fingerprint each."""

    entries: list[TranscriptEntry] = field(default_factory=list)
    provider: str = ""
    created_at: str = ""

    def save(self, path: str) -> None:
        """Write the transcript as line-delimited JSON with a header line."""
        header = {
            "version": TRANSCRIPT_VERSION,
            "provider": self.provider,
            "created_at": self.created_at,
            "entries": len(self.entries),
        }
        lines = [json.dumps(header, sort_keys=True, ensure_ascii=False)]
        for e in self.entries:
            lines.append(
                json.dumps(
                    {
                        "fingerprint": e.fingerprint,
                        "request": {
                            "prompt": e.request.prompt,
                            "max_output_tokens": e.request.max_output_tokens,
                            "temperature": e.request.temperature,
                            "tag": e.request.tag,
                        },
                        "result": {
                            "text": e.result.text,
                            "usage": {
                                "prompt_tokens": e.result.usage.prompt_tokens,
                                "completion_tokens": e.result.usage.completion_tokens,
                                "total_tokens": e.result.usage.total_tokens,
                            },
                            "latency_ms": e.result.latency_ms,
                        },
                    },
                    sort_keys=True,
                    ensure_ascii=False,
                )
            )
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(lines) + "\n")
        except OSError as exc:
            raise StorageError(f"cannot write transcript {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str) -> Transcript:
        try:
            with open(path, encoding="utf-8") as fh:
                raw = [line for line in fh.read().splitlines() if line.strip()]
        except OSError as exc:
            raise StorageError(f"cannot read transcript {path}: {exc}") from exc
        if not raw:
            raise StorageError(f"transcript {path} is empty")
        try:
            header = json.loads(raw[0])
            entries = []
            seen: set[str] = set()
            for line in raw[1:]:
                doc = json.loads(line)
                fp = doc["fingerprint"]
                if fp in seen:
                    raise StorageError(f"transcript {path} repeats fingerprint {fp}")
                seen.add(fp)
                req = doc["request"]
                res = doc["result"]
                usage = res["usage"]
                entries.append(
                    TranscriptEntry(
                        fingerprint=fp,
                        request=CompletionRequest(
                            prompt=req["prompt"],
                            max_output_tokens=req["max_output_tokens"],
                            temperature=req["temperature"],
                            tag=req.get("tag", ""),
                        ),
                        result=CompletionResult(
                            text=res["text"],
                            usage=TokenUsage(
                                usage["prompt_tokens"],
                                usage["completion_tokens"],
                                usage["total_tokens"],
                            ),
                            latency_ms=res.get("latency_ms", 0.0),
                        ),
                    )
                )
        except StorageError:
            raise
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise StorageError(f"transcript {path} is malformed: {exc}") from exc
        return cls(
            entries=entries,
            provider=header.get("provider", ""),
            created_at=header.get("created_at", ""),
        )


class RecordingProvider(Provider):
    """Wraps another provider and captures every exchange."""

    name = "recording"

    def __init__(self, inner: Provider):
        super().__init__(token_budget=None)
        self.inner = inner
        self._counter = _OccurrenceCounter()
        self._entries_lock = threading.Lock()
        self._entries: list[TranscriptEntry] = []
        self._created_at = _utc_now()

    def _complete(self, request: CompletionRequest) -> CompletionResult:
        occ = self._counter.next_for(request)
        fp = fingerprint(request.prompt, request.temperature, request.max_output_tokens, occ)
        result = self.inner.complete(request)
        with self._entries_lock:
            self._entries.append(TranscriptEntry(fp, request, result))
        return result

    @property
    def transcript(self) -> Transcript:
        with self._entries_lock:
            entries = list(self._entries)
        return Transcript(entries=entries, provider=self.inner.name, created_at=self._created_at)


class ReplayProvider(Provider):
    """Serves results from a transcript; a request off script is an error."""

    name = "replay"

    def __init__(self, transcript: Transcript, token_budget: int | None = None):
        super().__init__(token_budget)
        self.transcript = transcript
        self._table = {e.fingerprint: e.result for e in transcript.entries}
        self._counter = _OccurrenceCounter()

    @classmethod
    def from_file(cls, path: str, token_budget: int | None = None) -> ReplayProvider:
        return cls(Transcript.load(path), token_budget)

    def _complete(self, request: CompletionRequest) -> CompletionResult:
        occ = self._counter.next_for(request)
        fp = fingerprint(request.prompt, request.temperature, request.max_output_tokens, occ)
        if fp not in self._table:
            raise ReplayMiss(fp, request.tag)
        return self._table[fp]


class LiveProvider(Provider):
    """Talks to a chat-completions style HTTP endpoint.

    Endpoint, model and secret come from arguments or the environment
    (SKILLPATH_API_BASE, SKILLPATH_MODEL, SKILLPATH_API_KEY). Transient
    failures are retried with exponential backoff; exhausting the retries
    raises TransportError.
    """

    name = "live"

    def __init__(
        self,
        base_url: str | None = None,
        model: str | None = None,
        api_key: str | None = None,
        timeout: float = 60.0,
        max_retries: int | None = None,
        backoff: float | None = None,
        token_budget: int | None = None,
    ):
        super().__init__(token_budget)
        self.base_url = (base_url or os.environ.get(API_BASE_ENV, "")).rstrip("/")
        self.model = model or os.environ.get(MODEL_ENV, "")
        self.api_key = api_key or os.environ.get(API_KEY_ENV, "")
        if not self.base_url:
            raise TransportError("no endpoint configured: set " + API_BASE_ENV)
        if not self.model:
            raise TransportError("no model configured: set " + MODEL_ENV)
        if max_retries is None:
            max_retries = int(os.environ.get(MAX_RETRIES_ENV, "3"))
        if backoff is None:
            backoff = float(os.environ.get(RETRY_BACKOFF_ENV, "1.0"))
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff

    def _complete(self, request: CompletionRequest) -> CompletionResult:
        url = f"{self.base_url}/chat/completions"
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        last_error = "no attempt made"
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            started = time.monotonic()
            try:
                resp = requests.post(url, json=payload, headers=headers, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = str(exc)
                continue
            elapsed_ms = (time.monotonic() - started) * 1000.0
            if resp.status_code == 200:
                return self._parse(request, resp, elapsed_ms)
            last_error = f"HTTP {resp.status_code}: {resp.text[:200]}"
            if resp.status_code not in (429,) and resp.status_code < 500:
                break
        raise TransportError(f"endpoint failed after {self.max_retries + 1} attempts: {last_error}")

    def _parse(self, request: CompletionRequest, resp, elapsed_ms: float) -> CompletionResult:
        try:
            doc = resp.json()
            text = doc["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed endpoint response: {exc}") from exc
        usage_doc = doc.get("usage") or {}
        prompt_tokens = usage_doc.get("prompt_tokens")
        completion_tokens = usage_doc.get("completion_tokens")
        if prompt_tokens is None or completion_tokens is None:
            usage = TokenUsage.of(count_ws_tokens(request.prompt), count_ws_tokens(text))
        else:
            usage = TokenUsage.of(int(prompt_tokens), int(completion_tokens))
        return CompletionResult(text=text, usage=usage, latency_ms=elapsed_ms)


def record_transcript(provider: Provider, requests_seq: list[CompletionRequest]) -> Transcript:
    """Run a request sequence through a provider and return the transcript."""
    recorder = RecordingProvider(provider)
    for request in requests_seq:
        recorder.complete(request)
    return recorder.transcript


def _utc_now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
