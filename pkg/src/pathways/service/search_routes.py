"""Search service HTTP interface: query, cached-surrogate obtain, indexing."""

from __future__ import annotations

from typing import Callable

from fastapi import APIRouter, Request, Response
from fastapi.responses import PlainTextResponse

from ..client import OPENURL_VERSION, SVC_SURROGATE, FederationClient, obtain_url
from ..model import ProviderInfo
from ..registry import RegistryRecord, ServiceRegistry
from ..search import SearchIndex
from .schemas import IndexRequestModel, IndexStatsModel, SearchResultModel


def build_search_router(
    index: SearchIndex,
    registry: ServiceRegistry,
    search_base: str,
    client_factory: Callable[[], FederationClient],
) -> APIRouter:
    router = APIRouter()
    self_record = RegistryRecord(provider="search", obtain_base=f"{search_base}/obtain")

    @router.get("", response_model=list[SearchResultModel])
    @router.get("/", response_model=list[SearchResultModel], include_in_schema=False)
    def search(q: str = "", limit: int = 10):
        if not q.strip():
            return PlainTextResponse("query parameter q is required", 400)
        results = index.search(q, limit=limit)
        return [
            SearchResultModel(
                score=r.score,
                provider=r.entry.provider,
                preferredIdentifier=r.entry.preferred_identifier,
                snippet=r.entry.snippet,
                flagged=r.entry.flagged,
                surrogateUrl=obtain_url(
                    self_record, ProviderInfo(r.entry.provider, r.entry.preferred_identifier)
                ),
            )
            for r in results
        ]

    @router.get("/obtain")
    def obtain_cached(request: Request):
        q = request.query_params
        if q.get("url_ver") != OPENURL_VERSION:
            return PlainTextResponse("missing or unsupported url_ver (expected Z39.88-2004)", 400)
        rft_id = q.get("rft_id")
        svc_id = q.get("svc_id")
        if not rft_id or not svc_id:
            return PlainTextResponse("rft_id and svc_id are required", 400)
        if svc_id != SVC_SURROGATE:
            return PlainTextResponse(f"ServiceNotSupported: {svc_id}", 404)
        document = index.cached_document(rft_id)
        if document is None:
            return PlainTextResponse(f"NotFound: no cached surrogate for {rft_id}", 404)
        return Response(document.encode("utf-8"), media_type="application/rdf+xml")

    @router.post("/index", response_model=IndexStatsModel)
    def run_index(body: IndexRequestModel | None = None):
        body = body or IndexRequestModel()
        client = client_factory()
        stats = index.index_federation(
            client,
            providers=body.providers,
            mime_for=registry.mime_for,
            full=body.full,
        )
        return IndexStatsModel.from_stats(stats)

    return router
