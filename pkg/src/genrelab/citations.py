"""Citation-count enrichment for scientific candidate articles.

Two HTTP clients (NLM Entrez for PMID -> DOI, OpenCitations for citation
counts) with a recorded-fixture mode so the full flow runs offline.  The
top-decile selection exists because highly cited articles were tried as a
quality filter; since that filter made no measurable difference, it is off
by default in the pipeline and exposed as an explicit opt-in.
"""

from __future__ import annotations

import json
import logging
import math
import time
import urllib.parse
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import requests

from genrelab.errors import DataError, ExternalServiceError

log = logging.getLogger(__name__)

ENTREZ_SUMMARY_URL = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils/esummary.fcgi"
OPENCITATIONS_URL = "https://opencitations.net/index/coci/api/v1/citations"


@dataclass(frozen=True)
class CitationRecord:
    pmid: str
    doi: Optional[str]
    citation_count: Optional[int]
    fetched_at: str

    def __post_init__(self):
        if self.citation_count is not None and self.doi is None:
            raise DataError(
                f"pmid {self.pmid}: citation_count present without a resolved doi"
            )
        if self.citation_count is not None and self.citation_count < 0:
            raise DataError(f"pmid {self.pmid}: negative citation_count")


class RateLimiter:
    """Simple minimum-interval limiter; default 3 requests/second."""

    def __init__(self, per_second: float = 3.0, sleep=time.sleep, clock=time.monotonic):
        self.interval = 1.0 / per_second
        self._sleep = sleep
        self._clock = clock
        self._last = None

    def wait(self) -> None:
        now = self._clock()
        if self._last is not None:
            remaining = self._last + self.interval - now
            if remaining > 0:
                self._sleep(remaining)
                now = self._last + self.interval
        self._last = now


class BibliographicClient:
    """Shared transport: retries with backoff, rate limiting, fixture mode.

    In fixture mode responses come from ``fixtures_dir/<namespace>/<key>.json``
    and no network access ever happens.  A missing fixture behaves like an
    HTTP 404 (resource not indexed).
    """

    namespace = "base"

    def __init__(
        self,
        fixtures_dir=None,
        rate_limiter: Optional[RateLimiter] = None,
        session=None,
        max_retries: int = 3,
        backoff: float = 1.0,
        sleep=time.sleep,
    ):
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir else None
        self.rate_limiter = rate_limiter or RateLimiter()
        self.session = session or requests.Session()
        self.max_retries = max_retries
        self.backoff = backoff
        self._sleep = sleep

    def _fixture_path(self, key: str) -> Path:
        safe = urllib.parse.quote(key, safe="")
        return self.fixtures_dir / self.namespace / f"{safe}.json"

    def get_json(self, url: str, params: dict, fixture_key: str):
        """Return parsed JSON, or None for a 404 / missing fixture."""
        if self.fixtures_dir is not None:
            path = self._fixture_path(fixture_key)
            if not path.exists():
                return None
            return json.loads(path.read_text(encoding="utf-8"))

        last_error = None
        for attempt in range(self.max_retries):
            self.rate_limiter.wait()
            try:
                resp = self.session.get(url, params=params, timeout=30)
            except requests.RequestException as exc:
                last_error = exc
                self._sleep(self.backoff * 2**attempt)
                continue
            if resp.status_code == 404:
                return None
            if resp.status_code >= 500:
                last_error = ExternalServiceError(
                    f"HTTP {resp.status_code} from {url}"
                )
                self._sleep(self.backoff * 2**attempt)
                continue
            resp.raise_for_status()
            try:
                return resp.json()
            except ValueError:
                raise ExternalServiceError(
                    f"malformed response from {url}: {resp.text[:200]!r}"
                )
        raise ExternalServiceError(
            f"{url} failed after {self.max_retries} attempts: {last_error}"
        )


class EntrezClient(BibliographicClient):
    """PMID metadata lookups via the NLM Entrez esummary endpoint."""

    namespace = "entrez"

    def __init__(self, api_key: Optional[str] = None, **kwargs):
        super().__init__(**kwargs)
        self.api_key = api_key

    def summary(self, pmid: str):
        params = {"db": "pubmed", "id": pmid, "retmode": "json"}
        if self.api_key:
            params["api_key"] = self.api_key
        return self.get_json(ENTREZ_SUMMARY_URL, params, fixture_key=pmid)


class OpenCitationsClient(BibliographicClient):
    """Lists of citing entities per DOI from the OpenCitations COCI index."""

    namespace = "opencitations"

    def citations(self, doi: str):
        return self.get_json(f"{OPENCITATIONS_URL}/{doi}", {}, fixture_key=doi)


def pmid_to_doi(pmid: str, client: EntrezClient) -> Optional[str]:
    """Resolve a PMID to its DOI; None when the record carries no DOI."""
    payload = client.summary(pmid)
    if payload is None:
        return None
    try:
        record = payload["result"][str(pmid)]
        for article_id in record.get("articleids", []):
            if article_id.get("idtype") == "doi" and article_id.get("value"):
                return article_id["value"]
        return None
    except (KeyError, TypeError) as exc:
        raise ExternalServiceError(
            f"malformed esummary payload for pmid {pmid}: {exc!r}; "
            f"excerpt: {str(payload)[:200]!r}"
        )


def fetch_citation_count(doi: str, client: OpenCitationsClient) -> int:
    """Number of citing entities; 0 when the DOI is not indexed."""
    payload = client.citations(doi)
    if payload is None:
        log.info("doi %s not indexed; counting 0 citations", doi)
        return 0
    if not isinstance(payload, list):
        raise ExternalServiceError(
            f"malformed citations payload for doi {doi}: "
            f"expected a list, got {str(payload)[:200]!r}"
        )
    return len(payload)


def enrich_pmids(
    pmids: list[str],
    entrez: EntrezClient,
    opencitations: OpenCitationsClient,
    fetched_at: str,
) -> list[CitationRecord]:
    """Resolve DOIs and counts for a PMID list, in pmid order."""
    records = []
    for pmid in pmids:
        doi = pmid_to_doi(pmid, entrez)
        count = fetch_citation_count(doi, opencitations) if doi else None
        records.append(
            CitationRecord(pmid=pmid, doi=doi, citation_count=count, fetched_at=fetched_at)
        )
    return records


def select_top_decile(records: list[CitationRecord]) -> list[CitationRecord]:
    """Records at or above the 90th-percentile citation count.

    The selection holds ceil(0.10 * n) records before tie expansion; every
    record tied with the threshold count is included.  Input order is
    preserved in the output.
    """
    if not records:
        raise DataError("select_top_decile: empty input")
    missing = [r.pmid for r in records if r.citation_count is None]
    if missing:
        raise DataError(
            f"select_top_decile: records without counts (first pmid: {missing[0]})"
        )
    counts = sorted((r.citation_count for r in records), reverse=True)
    m = math.ceil(0.10 * len(records))
    threshold = counts[m - 1]
    return [r for r in records if r.citation_count >= threshold]


def select_top_decile_by_topic(
    records_by_topic: dict[str, list[CitationRecord]]
) -> dict[str, list[CitationRecord]]:
    """Per-topic decile selection, matching the per-topic retrieval flow."""
    return {topic: select_top_decile(recs) for topic, recs in records_by_topic.items()}
