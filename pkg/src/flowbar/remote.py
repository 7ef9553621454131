"""Client for a remote wikifier-style annotation HTTP API.

The service takes a POST with JSON body {"text", "lang", "userKey"} and
answers {"annotations": [{"title", "url", "pageRank"}, ...]}. Scores are the
pageRank values L1-normalized over the response.
"""

from __future__ import annotations

import threading

import httpx

from .annotate import ConceptAnnotation
from .errors import AnnotationDecodeError, AnnotationServiceError, RetriableAnnotationError


def _concept_id_from_url(url: str, title: str) -> str:
    tail = url.rstrip("/").rsplit("/", 1)[-1] if url else ""
    return tail or title.replace(" ", "_")


class RemoteAnnotator:
    """Bounded-concurrency client with per-request timeout and retries."""

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        language: str = "en",
        timeout: float = 10.0,
        max_attempts: int = 3,
        max_concurrency: int = 4,
        transport: httpx.BaseTransport | None = None,
    ):
        self.endpoint = endpoint
        self.api_key = api_key
        self.language = language
        self.max_attempts = max_attempts
        self._semaphore = threading.Semaphore(max_concurrency)
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def close(self) -> None:
        self._client.close()

    def annotate(self, text: str) -> list[ConceptAnnotation]:
        body = {"text": text, "lang": self.language}
        if self.api_key:
            body["userKey"] = self.api_key

        last_exc: Exception | None = None
        for _ in range(self.max_attempts):
            try:
                with self._semaphore:
                    response = self._client.post(self.endpoint, json=body)
                break
            except (httpx.TimeoutException, httpx.TransportError) as exc:
                last_exc = exc
        else:
            raise RetriableAnnotationError(
                f"{self.max_attempts} attempts to {self.endpoint} failed: {last_exc}"
            ) from last_exc

        if not 200 <= response.status_code < 300:
            raise AnnotationServiceError(
                f"annotation service answered {response.status_code}", status=response.status_code
            )
        try:
            payload = response.json()
            raw = payload["annotations"]
            parsed = [(str(a["title"]), str(a.get("url", "")), float(a.get("pageRank", 0.0))) for a in raw]
        except (ValueError, KeyError, TypeError) as exc:
            raise AnnotationDecodeError(f"unexpected annotation payload: {exc}") from exc

        total = sum(pr for _, _, pr in parsed)
        parsed.sort(key=lambda t: (-t[2], t[0]))
        return [
            ConceptAnnotation(
                concept_id=_concept_id_from_url(url, title),
                title=title,
                url=url,
                score=pr / total if total > 0 else 0.0,
                rank=rank,
            )
            for rank, (title, url, pr) in enumerate(parsed, start=1)
        ]
