"""Deployment configuration: one TOML file describes the whole demo
federation (server binding, repositories with their policies and tokens, the
search service, and the editor UI).

The ``PATHWAYS_CONFIG`` environment variable overrides the config path;
without a file the built-in four-repository demo deployment is used.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

ENV_VAR = "PATHWAYS_CONFIG"

SEARCH_PROVIDER = "info:sid/pathways.demo:search"


@dataclass
class RepoSpec:
    name: str
    provider: str
    versioning: bool = True
    ingest_policy: str = "shallow"
    mint_policy: str = "mint-new"
    duplicate_policy: str = "coexist"
    auth_token: str | None = None
    page_size: int = 50
    seed_profile: str | None = None


@dataclass
class SearchSpec:
    provider: str = SEARCH_PROVIDER
    index_file: Path | None = None  # default: <data_dir>/search-index.json


@dataclass
class UiSpec:
    enabled: bool = True
    assets_dir: Path | None = None  # default: ./frontend/dist when present
    put_target: str = "fedora"
    expose_token: bool = True


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8470
    data_dir: Path = Path("pathways-data")
    repositories: list[RepoSpec] = field(default_factory=list)
    search: SearchSpec = field(default_factory=SearchSpec)
    ui: UiSpec = field(default_factory=UiSpec)
    registry_localhost_writes: bool = True
    vocab_file: Path | None = None  # extra vocabulary entries (JSON list)

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    @property
    def registry_base(self) -> str:
        return f"{self.base_url}/registry"

    @property
    def search_base(self) -> str:
        return f"{self.base_url}/search"

    def repo_base(self, name: str) -> str:
        return f"{self.base_url}/repos/{name}"

    def repo(self, name_or_provider: str) -> RepoSpec:
        for spec in self.repositories:
            if name_or_provider in (spec.name, spec.provider):
                return spec
        raise KeyError(f"no repository {name_or_provider!r} in configuration")

    def index_file(self) -> Path:
        return self.search.index_file or (self.data_dir / "search-index.json")


def default_repositories() -> list[RepoSpec]:
    return [
        RepoSpec(
            name="arxiv",
            provider="info:sid/arxiv.org:pathways",
            auth_token="arxiv-put-token",
            seed_profile="arxiv",
        ),
        RepoSpec(
            name="adore",
            provider="info:sid/library.lanl.gov:pathways",
            auth_token="adore-put-token",
            seed_profile="adore",
        ),
        RepoSpec(
            name="dspace",
            provider="info:sid/dspace.demo:pathways",
            auth_token="dspace-put-token",
            seed_profile="dspace",
        ),
        RepoSpec(
            name="fedora",
            provider="info:sid/fedora.demo:pathways",
            auth_token="fedora-put-token",
            seed_profile="fedora",
        ),
    ]


def default_config(data_dir: Path | str = "pathways-data") -> AppConfig:
    return AppConfig(data_dir=Path(data_dir), repositories=default_repositories())


def load_config(path: Path | str | None = None) -> AppConfig:
    """Load configuration; falls back to the built-in demo deployment.

    Resolution order: explicit argument, then $PATHWAYS_CONFIG, then
    ./pathways.toml, then built-in defaults. Relative paths inside the file
    resolve against the file's directory.
    """
    if path is None:
        env = os.environ.get(ENV_VAR)
        if env:
            path = Path(env)
        elif Path("pathways.toml").exists():
            path = Path("pathways.toml")
        else:
            return default_config()
    path = Path(path)
    raw = tomllib.loads(path.read_text("utf-8"))
    base_dir = path.parent

    def resolve(p: str | None) -> Path | None:
        if not p:
            return None
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base_dir / candidate

    server = raw.get("server", {})
    registry_raw = raw.get("registry", {})
    config = AppConfig(
        host=server.get("host", "127.0.0.1"),
        port=int(server.get("port", 8470)),
        data_dir=resolve(server.get("data_dir")) or base_dir / "pathways-data",
        registry_localhost_writes=registry_raw.get("localhost_writes_only", True),
        vocab_file=resolve(registry_raw.get("vocab_file")),
    )

    for repo_raw in raw.get("repository", []):
        config.repositories.append(
            RepoSpec(
                name=repo_raw["name"],
                provider=repo_raw["provider"],
                versioning=repo_raw.get("versioning", True),
                ingest_policy=repo_raw.get("ingest_policy", "shallow"),
                mint_policy=repo_raw.get("mint_policy", "mint-new"),
                duplicate_policy=repo_raw.get("duplicate_policy", "coexist"),
                auth_token=repo_raw.get("auth_token"),
                page_size=int(repo_raw.get("page_size", 50)),
                seed_profile=repo_raw.get("seed_profile"),
            )
        )
    if not config.repositories:
        config.repositories = default_repositories()

    search = raw.get("search", {})
    config.search = SearchSpec(
        provider=search.get("provider", SEARCH_PROVIDER),
        index_file=resolve(search.get("index_file")),
    )

    ui = raw.get("ui", {})
    config.ui = UiSpec(
        enabled=ui.get("enabled", True),
        assets_dir=resolve(ui.get("assets_dir")),
        put_target=ui.get("put_target", "fedora"),
        expose_token=ui.get("expose_token", True),
    )
    return config
