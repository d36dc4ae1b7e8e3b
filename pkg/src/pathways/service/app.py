"""Application factory: one process hosts the registry, every configured
repository's interfaces, the search service and the editor UI assets."""

from __future__ import annotations

from pathlib import Path

import httpx
from fastapi import FastAPI
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles

from ..client import FederationClient
from ..config import AppConfig
from ..registry import RegistryRecord, default_registry
from ..repository import Repository, RepositoryConfig
from ..search import SearchIndex
from .registry_routes import build_registry_router
from .repo_routes import build_repo_router
from .schemas import UiConfigModel, UiRepositoryModel
from .search_routes import build_search_router


def build_repository(config: AppConfig, name: str) -> Repository:
    spec = config.repo(name)
    return Repository(
        RepositoryConfig(
            provider=spec.provider,
            name=spec.name,
            data_dir=config.data_dir / spec.name,
            base_url=config.repo_base(spec.name),
            versioning_enabled=spec.versioning,
            ingest_policy=spec.ingest_policy,
            mint_policy=spec.mint_policy,
            duplicate_policy=spec.duplicate_policy,
            auth_token=spec.auth_token,
            page_size=spec.page_size,
        )
    )


def create_app(config: AppConfig) -> FastAPI:
    app = FastAPI(title="pathways federation", version="0.1.0")
    app.state.config = config
    app.state.http = httpx.Client(timeout=5.0)

    registry = default_registry()
    if config.vocab_file:
        registry.load_vocab_file(config.vocab_file)
    repos: dict[str, Repository] = {}
    for spec in config.repositories:
        repo = build_repository(config, spec.name)
        repos[spec.name] = repo
        base = config.repo_base(spec.name)
        registry.register(
            RegistryRecord(
                provider=spec.provider,
                obtain_base=f"{base}/obtain",
                harvest_base=f"{base}/oai",
                put_base=base,
            )
        )
    registry.register(
        RegistryRecord(
            provider=config.search.provider,
            obtain_base=f"{config.search_base}/obtain",
        )
    )
    app.state.registry = registry
    app.state.repos = repos

    def fetch(url: str) -> bytes:
        response = app.state.http.get(url)
        response.raise_for_status()
        return response.content

    def client_factory() -> FederationClient:
        return FederationClient(config.registry_base, http=app.state.http)

    app.state.fetch = fetch
    app.state.client_factory = client_factory

    app.include_router(
        build_registry_router(registry, config.registry_localhost_writes),
        prefix="/registry",
        tags=["registry"],
    )
    for name, repo in repos.items():
        app.include_router(
            build_repo_router(
                repo,
                registry,
                harvest_base=f"{config.repo_base(name)}/oai",
                fetch=fetch,
            ),
            prefix=f"/repos/{name}",
            tags=[f"repository:{name}"],
        )

    index = SearchIndex(config.index_file())
    app.state.search_index = index
    app.include_router(
        build_search_router(index, registry, config.search_base, client_factory),
        prefix="/search",
        tags=["search"],
    )

    @app.get("/api/ui-config", response_model=UiConfigModel)
    def ui_config():
        target = config.repo(config.ui.put_target)
        return UiConfigModel(
            registryBase=config.registry_base,
            searchBase=config.search_base,
            putBase=config.repo_base(target.name),
            putProvider=target.provider,
            putToken=target.auth_token if config.ui.expose_token else None,
            repositories=[
                UiRepositoryModel(
                    name=spec.name,
                    provider=spec.provider,
                    obtainBase=f"{config.repo_base(spec.name)}/obtain",
                    harvestBase=f"{config.repo_base(spec.name)}/oai",
                )
                for spec in config.repositories
            ],
        )

    ui_dir = config.ui.assets_dir or Path("frontend/dist")
    if config.ui.enabled and ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def root():
            return RedirectResponse("/ui/")

    return app
