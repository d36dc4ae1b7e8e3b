"""Service-registry HTTP interface: JSON records keyed by provider."""

from __future__ import annotations

from fastapi import APIRouter, HTTPException, Request

from ..registry import RegistryNotFound, ServiceRegistry
from .schemas import RegistryRecordModel, VocabularyEntryModel

_LOCAL_HOSTS = {None, "127.0.0.1", "::1", "localhost", "testclient"}


def build_registry_router(registry: ServiceRegistry, localhost_writes_only: bool = True) -> APIRouter:
    router = APIRouter()

    @router.get("/providers", response_model=list[RegistryRecordModel])
    def list_providers():
        return [RegistryRecordModel.from_record(r) for r in registry.providers()]

    @router.get("/providers/{provider:path}", response_model=RegistryRecordModel)
    def get_provider(provider: str):
        try:
            return RegistryRecordModel.from_record(registry.lookup(provider))
        except RegistryNotFound:
            raise HTTPException(404, f"provider {provider!r} is not registered") from None

    @router.put("/providers/{provider:path}", response_model=RegistryRecordModel)
    def put_provider(provider: str, record: RegistryRecordModel, request: Request):
        if localhost_writes_only:
            host = request.client.host if request.client else None
            if host not in _LOCAL_HOSTS:
                raise HTTPException(403, "registry writes are restricted to localhost")
        if record.provider != provider:
            raise HTTPException(400, "provider in path and record disagree")
        try:
            registry.register(record.to_record())
        except ValueError as exc:
            raise HTTPException(400, str(exc)) from None
        return record

    @router.get("/vocab/{kind}")
    def vocab(kind: str, uri: str | None = None):
        if kind not in ("format", "semantic", "persistence"):
            raise HTTPException(404, f"unknown vocabulary kind {kind!r}")
        if uri is None:
            return [VocabularyEntryModel.from_entry(e) for e in registry.vocab_entries(kind)]
        try:
            return VocabularyEntryModel.from_entry(registry.resolve_vocab(uri, kind))
        except RegistryNotFound:
            raise HTTPException(404, f"no {kind} entry for {uri!r}") from None

    return router
