"""Per-repository HTTP interface: obtain, harvest, put and datastream routes."""

from __future__ import annotations

import logging
from typing import Callable

from fastapi import APIRouter, HTTPException, Request, Response
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import PlainTextResponse

from ..client import OPENURL_VERSION, SVC_SURROGATE
from ..oai import handle_verb
from ..registry import ServiceRegistry
from ..repository import (
    DereferenceFailed,
    DuplicateError,
    NotFound,
    Repository,
    RepositoryError,
    VersionNotFound,
)
from ..surrogate import CodecError, parse
from .schemas import PutReceiptModel

logger = logging.getLogger(__name__)


def build_repo_router(
    repo: Repository,
    registry: ServiceRegistry,
    harvest_base: str,
    fetch: Callable[[str], bytes],
) -> APIRouter:
    router = APIRouter()

    @router.get("/obtain")
    def obtain(request: Request):
        q = request.query_params
        if q.get("url_ver") != OPENURL_VERSION:
            return PlainTextResponse("missing or unsupported url_ver (expected Z39.88-2004)", 400)
        rft_id = q.get("rft_id")
        svc_id = q.get("svc_id")
        if not rft_id or not svc_id:
            return PlainTextResponse("rft_id and svc_id are required", 400)
        if svc_id != SVC_SURROGATE:
            return PlainTextResponse(f"ServiceNotSupported: {svc_id}", 404)
        if q.get("req_id"):
            logger.info("obtain for %s requested by %s", rft_id, q["req_id"])
        res_key = q.get("res_key")
        headers = {}
        if res_key and not repo.config.versioning_enabled:
            headers["X-Pathways-Version-Ignored"] = res_key
            res_key = None
        try:
            data, _ = repo.get_document(rft_id, res_key)
        except VersionNotFound as exc:
            return PlainTextResponse(f"VersionNotFound: {exc}", 404)
        except NotFound as exc:
            return PlainTextResponse(f"NotFound: {exc}", 404)
        return Response(data, media_type="application/rdf+xml", headers=headers)

    @router.get("/oai")
    def oai(request: Request):
        params = dict(request.query_params)
        return Response(handle_verb(repo, harvest_base, params), media_type="text/xml")

    @router.post("/objects", status_code=201, response_model=PutReceiptModel)
    async def put_object(request: Request, policy: str | None = None):
        expected = repo.config.auth_token
        if expected is not None:
            auth = request.headers.get("authorization", "")
            if auth != f"Bearer {expected}":
                raise HTTPException(401, "deposit requires a valid bearer token")
        if policy is not None and policy not in ("shallow", "deep"):
            raise HTTPException(400, f"unknown ingest policy {policy!r}")
        body = await request.body()
        try:
            entity = parse(body)
        except CodecError as exc:
            raise HTTPException(400, f"SchemaError: {exc}") from None
        try:
            # off the event loop: ingest blocks on the writer lock and, under
            # the deep policy, fetches locations that may live on this server
            receipt = await run_in_threadpool(repo.ingest, entity, policy=policy, fetch=fetch)
        except DuplicateError as exc:
            raise HTTPException(409, str(exc)) from None
        except DereferenceFailed as exc:
            raise HTTPException(502, str(exc)) from None
        except RepositoryError as exc:
            raise HTTPException(400, str(exc)) from None
        return PutReceiptModel.from_receipt(receipt)

    @router.get("/ds/{local_id}")
    def datastream(local_id: str):
        try:
            format_uri, data = repo.serve_datastream(local_id)
        except NotFound as exc:
            raise HTTPException(404, str(exc)) from None
        mime = registry.mime_for(format_uri) or "application/octet-stream"
        return Response(data, media_type=mime)

    return router
