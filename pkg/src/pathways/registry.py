"""Service registry and local controlled vocabularies.

The service registry keys endpoint locations by repository (provider)
identifier -- one entry per repository, never per object. Format, semantic
and persistence vocabularies are plain local tables seeded with the demo
ontology and a format-to-MIME mapping.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .model import PERSISTENCE_PERSISTENT, PERSISTENCE_TRANSIENT


class RegistryNotFound(KeyError):
    """Provider (or vocabulary URI) is not registered."""


@dataclass
class RegistryRecord:
    """Network locations of one repository's service interfaces."""

    provider: str
    obtain_base: str | None = None
    harvest_base: str | None = None
    put_base: str | None = None

    def check(self) -> None:
        if not self.provider:
            raise ValueError("registry record without provider")
        if not (self.obtain_base or self.harvest_base or self.put_base):
            raise ValueError(f"registry record for {self.provider} lists no endpoints")


@dataclass(frozen=True)
class VocabularyEntry:
    uri: str
    kind: str  # format | semantic | persistence
    label: str
    mime: str | None = None


@dataclass
class ServiceRegistry:
    """In-memory registry with upsert semantics; thread-safe."""

    _records: dict[str, RegistryRecord] = field(default_factory=dict)
    _vocab: dict[tuple[str, str], VocabularyEntry] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def register(self, record: RegistryRecord) -> None:
        record.check()
        with self._lock:
            self._records[record.provider] = record

    def lookup(self, provider: str) -> RegistryRecord:
        with self._lock:
            try:
                return self._records[provider]
            except KeyError:
                raise RegistryNotFound(provider) from None

    def providers(self) -> list[RegistryRecord]:
        with self._lock:
            return sorted(self._records.values(), key=lambda r: r.provider)

    def add_vocab(self, entry: VocabularyEntry) -> None:
        with self._lock:
            self._vocab[(entry.kind, entry.uri)] = entry

    def resolve_vocab(self, uri: str, kind: str) -> VocabularyEntry:
        with self._lock:
            try:
                return self._vocab[(kind, uri)]
            except KeyError:
                raise RegistryNotFound(f"{kind}:{uri}") from None

    def vocab_entries(self, kind: str | None = None) -> list[VocabularyEntry]:
        with self._lock:
            entries = [e for k, e in self._vocab.items() if kind is None or k[0] == kind]
        return sorted(entries, key=lambda e: (e.kind, e.uri))

    def mime_for(self, format_uri: str) -> str | None:
        try:
            return self.resolve_vocab(format_uri, "format").mime
        except RegistryNotFound:
            return None

    def load_vocab_file(self, path: Path | str) -> int:
        """Load vocabulary entries from a JSON file: a list of entry objects."""
        entries = json.loads(Path(path).read_text("utf-8"))
        for raw in entries:
            self.add_vocab(
                VocabularyEntry(
                    uri=raw["uri"],
                    kind=raw["kind"],
                    label=raw["label"],
                    mime=raw.get("mime"),
                )
            )
        return len(entries)


DEFAULT_VOCABULARY = [
    VocabularyEntry("info:pathways/fmt/pronom/1000", "format", "PDF", "application/pdf"),
    VocabularyEntry("info:pathways/fmt/pronom/x-fmt-111", "format", "Plain Text", "text/plain"),
    VocabularyEntry("info:pathways/fmt/pronom/x-fmt-18", "format", "Comma Separated Values", "text/csv"),
    VocabularyEntry("info:pathways/semantic/journal", "semantic", "Journal"),
    VocabularyEntry("info:pathways/semantic/journal-issue", "semantic", "Journal issue"),
    VocabularyEntry("info:pathways/semantic/journal-article", "semantic", "Journal article"),
    VocabularyEntry("info:pathways/semantic/bibliographic-citation", "semantic", "Bibliographic citation"),
    VocabularyEntry("info:pathways/semantic/dataset", "semantic", "Dataset"),
    VocabularyEntry(PERSISTENCE_PERSISTENT, "persistence", "Persistent"),
    VocabularyEntry(PERSISTENCE_TRANSIENT, "persistence", "Transient"),
]


def default_registry() -> ServiceRegistry:
    registry = ServiceRegistry()
    for entry in DEFAULT_VOCABULARY:
        registry.add_vocab(entry)
    return registry
