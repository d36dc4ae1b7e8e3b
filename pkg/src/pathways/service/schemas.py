"""Pydantic request/response models for the HTTP surface."""

from __future__ import annotations

from pydantic import BaseModel

from ..model import ProviderInfo
from ..registry import RegistryRecord, VocabularyEntry
from ..repository import IngestReceipt
from ..search import IndexStats


class ProviderInfoModel(BaseModel):
    provider: str
    preferredIdentifier: str
    versionKey: str | None = None

    @classmethod
    def from_pi(cls, pi: ProviderInfo) -> "ProviderInfoModel":
        return cls(
            provider=pi.provider,
            preferredIdentifier=pi.preferred_identifier,
            versionKey=pi.version_key,
        )

    def to_pi(self) -> ProviderInfo:
        return ProviderInfo(self.provider, self.preferredIdentifier, self.versionKey)


class MappingPairModel(BaseModel):
    incoming: ProviderInfoModel
    assigned: ProviderInfoModel


class PutReceiptModel(BaseModel):
    root: ProviderInfoModel
    mapping: list[MappingPairModel]
    dereferenced: int
    stored: int

    @classmethod
    def from_receipt(cls, receipt: IngestReceipt) -> "PutReceiptModel":
        return cls(
            root=ProviderInfoModel.from_pi(receipt.root),
            mapping=[
                MappingPairModel(
                    incoming=ProviderInfoModel.from_pi(incoming),
                    assigned=ProviderInfoModel.from_pi(assigned),
                )
                for incoming, assigned in receipt.mapping
            ],
            dereferenced=receipt.dereferenced,
            stored=receipt.stored,
        )


class RegistryRecordModel(BaseModel):
    provider: str
    obtainBase: str | None = None
    harvestBase: str | None = None
    putBase: str | None = None

    @classmethod
    def from_record(cls, record: RegistryRecord) -> "RegistryRecordModel":
        return cls(
            provider=record.provider,
            obtainBase=record.obtain_base,
            harvestBase=record.harvest_base,
            putBase=record.put_base,
        )

    def to_record(self) -> RegistryRecord:
        return RegistryRecord(
            provider=self.provider,
            obtain_base=self.obtainBase,
            harvest_base=self.harvestBase,
            put_base=self.putBase,
        )


class VocabularyEntryModel(BaseModel):
    uri: str
    kind: str
    label: str
    mime: str | None = None

    @classmethod
    def from_entry(cls, entry: VocabularyEntry) -> "VocabularyEntryModel":
        return cls(uri=entry.uri, kind=entry.kind, label=entry.label, mime=entry.mime)


class SearchResultModel(BaseModel):
    score: float
    provider: str
    preferredIdentifier: str
    snippet: str
    flagged: bool
    surrogateUrl: str


class IndexRequestModel(BaseModel):
    providers: list[str] | None = None
    full: bool = False


class IndexStatsModel(BaseModel):
    harvested: int
    matched: int
    fetched: int
    indexed: int
    failed: int
    failures: list[str]

    @classmethod
    def from_stats(cls, stats: IndexStats) -> "IndexStatsModel":
        return cls(
            harvested=stats.harvested,
            matched=stats.matched,
            fetched=stats.fetched,
            indexed=stats.indexed,
            failed=stats.failed,
            failures=stats.failures,
        )


class UiRepositoryModel(BaseModel):
    name: str
    provider: str
    obtainBase: str
    harvestBase: str


class UiConfigModel(BaseModel):
    registryBase: str
    searchBase: str
    putBase: str
    putProvider: str
    putToken: str | None
    repositories: list[UiRepositoryModel]
