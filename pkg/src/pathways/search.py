"""Resource-centric search over harvested surrogates.

The indexer harvests every registered repository, keeps the surrogates whose
entity graph carries the journal-article semantic, dereferences their
plain-text datastreams, and indexes the tokens while retaining the cached
surrogate for each hit. Queries score by term frequency with document-length
normalization; ties break on (provider, preferredIdentifier).
"""

from __future__ import annotations

import json
import logging
import re
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from .client import FederationClient, FederationError
from .model import Entity, walk
from .surrogate import serialize

logger = logging.getLogger(__name__)

JOURNAL_ARTICLE = "info:pathways/semantic/journal-article"
TEXT_MIME = "text/plain"

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop one-character tokens."""
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2]


@dataclass
class IndexEntry:
    provider: str
    preferred_identifier: str
    snippet: str
    terms: dict[str, int]
    surrogate: str
    source_locations: list[str]
    flagged: bool
    datestamp: str

    @property
    def length(self) -> int:
        return sum(self.terms.values()) or 1


@dataclass
class IndexStats:
    harvested: int = 0
    matched: int = 0
    fetched: int = 0
    indexed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)


@dataclass
class SearchResult:
    score: float
    entry: IndexEntry


def _is_article(entity: Entity) -> bool:
    return any(
        isinstance(node, Entity) and node.semantic == JOURNAL_ARTICLE
        for _, node in walk(entity)
    )


class SearchIndex:
    """Inverted term index persisted as one JSON file.

    Index builds run one at a time; queries read an atomically swapped
    snapshot, so serving stays consistent during a rebuild.
    """

    def __init__(self, index_file: Path | str | None = None):
        self.index_file = Path(index_file) if index_file else None
        self._build_lock = threading.Lock()
        self._entries: dict[str, IndexEntry] = {}
        self._last_run: dict[str, str] = {}
        if self.index_file and self.index_file.exists():
            self._load()

    # -- persistence -------------------------------------------------------

    def _load(self) -> None:
        raw = json.loads(self.index_file.read_text("utf-8"))
        self._entries = {key: IndexEntry(**value) for key, value in raw["entries"].items()}
        self._last_run = raw["lastRun"]

    def _save(self) -> None:
        if not self.index_file:
            return
        payload = {
            "entries": {key: asdict(entry) for key, entry in self._entries.items()},
            "lastRun": self._last_run,
        }
        tmp = self.index_file.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True), "utf-8")
        tmp.replace(self.index_file)

    # -- indexing ------------------------------------------------------------

    def index_federation(
        self,
        client: FederationClient,
        providers: list[str] | None = None,
        mime_for: Callable[[str], str | None] | None = None,
        fetch: Callable[[str], bytes] | None = None,
        full: bool = False,
    ) -> IndexStats:
        """Harvest, filter by semantic, dereference text, index.

        By default each provider is harvested incrementally from the last
        run's high-water datestamp (inclusive, so boundary overlap is safe:
        unchanged records are recognized and skipped). ``providers`` defaults
        to every registered repository exposing a harvest endpoint.
        """
        with self._build_lock:
            stats = IndexStats()
            mime_for = mime_for or (lambda _uri: None)
            fetch = fetch or (lambda url: _http_fetch(client, url))
            if providers is None:
                providers = [r.provider for r in client.providers() if r.harvest_base]

            entries = dict(self._entries)
            last_run = dict(self._last_run)
            for provider in sorted(providers):
                from_ = None if full else last_run.get(provider)
                try:
                    records = client.harvest(provider, from_=from_)
                except FederationError as exc:
                    stats.failed += 1
                    stats.failures.append(f"{provider}: {exc}")
                    continue
                high_water = from_
                for record in records:
                    stats.harvested += 1
                    if high_water is None or record.datestamp > high_water:
                        high_water = record.datestamp
                    if not _is_article(record.entity):
                        continue
                    stats.matched += 1
                    root_pi = record.entity.provider_info
                    key = f"{root_pi.provider}\n{root_pi.preferred_identifier}"
                    previous = entries.get(key)
                    if previous is not None and previous.datestamp == record.datestamp:
                        continue  # unchanged record re-seen at the window edge
                    entries[key] = self._build_entry(record, stats, mime_for, fetch)
                    stats.indexed += 1
                if high_water is not None:
                    last_run[provider] = high_water

            self._entries = entries
            self._last_run = last_run
            self._save()
            return stats

    def _build_entry(self, record, stats: IndexStats, mime_for, fetch) -> IndexEntry:
        entity = record.entity
        terms: dict[str, int] = {}
        locations: list[str] = []
        texts: list[str] = []
        flagged = False

        def add_tokens(text: str) -> None:
            for token in tokenize(text):
                terms[token] = terms.get(token, 0) + 1

        for _, node in walk(entity):
            if isinstance(node, Entity):
                for ident in node.identifiers:
                    add_tokens(ident)
            else:
                locations.append(node.location)
                if mime_for(node.format) == TEXT_MIME:
                    try:
                        payload = fetch(node.location)
                    except Exception as exc:  # noqa: BLE001 - indexing is best effort
                        logger.warning("cannot dereference %s: %s", node.location, exc)
                        stats.failed += 1
                        stats.failures.append(f"{node.location}: {exc}")
                        flagged = True
                        continue
                    stats.fetched += 1
                    text = payload.decode("utf-8", errors="replace")
                    texts.append(text)
                    add_tokens(text)

        if texts:
            snippet = " ".join(texts[0].split()[:12])
        else:
            snippet = entity.identifiers[0] if entity.identifiers else record.identifier
        return IndexEntry(
            provider=entity.provider_info.provider,
            preferred_identifier=entity.provider_info.preferred_identifier,
            snippet=snippet,
            terms=terms,
            surrogate=serialize(entity).text,
            source_locations=locations,
            flagged=flagged,
            datestamp=record.datestamp,
        )

    # -- querying -----------------------------------------------------------------

    def search(self, query: str, limit: int = 10) -> list[SearchResult]:
        tokens = tokenize(query)
        if not query.strip():
            raise ValueError("empty query")
        limit = max(0, limit)
        snapshot = self._entries
        scored = []
        for entry in snapshot.values():
            raw = sum(entry.terms.get(t, 0) for t in tokens)
            if raw > 0:
                scored.append(SearchResult(score=raw / entry.length, entry=entry))
        scored.sort(key=lambda r: (-r.score, r.entry.provider, r.entry.preferred_identifier))
        return scored[:limit]

    def cached_document(self, preferred_identifier: str) -> str | None:
        """Cached surrogate for the search service's own obtain interface."""
        matches = [
            e for e in self._entries.values() if e.preferred_identifier == preferred_identifier
        ]
        if not matches:
            return None
        return min(matches, key=lambda e: e.provider).surrogate

    def entry_count(self) -> int:
        return len(self._entries)

    def entries(self) -> list[IndexEntry]:
        return sorted(self._entries.values(), key=lambda e: (e.provider, e.preferred_identifier))


def _http_fetch(client: FederationClient, url: str) -> bytes:
    response = client.http.get(url)
    response.raise_for_status()
    return response.content
