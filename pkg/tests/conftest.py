from __future__ import annotations

import socket
import threading
import time
from dataclasses import dataclass
from pathlib import Path

import pytest
import uvicorn
from fastapi import FastAPI
from fastapi.testclient import TestClient

from pathways import fixtures
from pathways.client import FederationClient
from pathways.config import AppConfig, default_config
from pathways.service.app import create_app


def seed_all(app: FastAPI) -> None:
    for name, repo in app.state.repos.items():
        fixtures.seed(repo, name)


@pytest.fixture()
def app_config(tmp_path) -> AppConfig:
    return default_config(tmp_path / "data")


@pytest.fixture()
def app(app_config) -> FastAPI:
    return create_app(app_config)


@pytest.fixture()
def seeded_app(app) -> FastAPI:
    seed_all(app)
    return app


@pytest.fixture()
def tc(app) -> TestClient:
    return TestClient(app)


@pytest.fixture()
def asgi_http(app):
    """HTTP client that routes every request (any host) into the app, and is
    also installed as the app's own outbound client so that deep-copy fetches
    and the search indexer resolve in-process."""
    client = TestClient(app)
    app.state.http = client
    yield client
    client.close()


@pytest.fixture()
def fed(app_config, asgi_http) -> FederationClient:
    return FederationClient(app_config.registry_base, http=asgi_http)


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@dataclass
class LiveServer:
    config: AppConfig
    app: FastAPI
    base_url: str
    config_path: Path


def _write_config_file(config: AppConfig, path: Path) -> None:
    lines = [
        "[server]",
        f'host = "{config.host}"',
        f"port = {config.port}",
        f'data_dir = "{config.data_dir}"',
        "",
    ]
    for spec in config.repositories:
        lines += [
            "[[repository]]",
            f'name = "{spec.name}"',
            f'provider = "{spec.provider}"',
            f'auth_token = "{spec.auth_token}"',
            f'seed_profile = "{spec.seed_profile}"',
            "",
        ]
    path.write_text("\n".join(lines), "utf-8")


@pytest.fixture(scope="session")
def live_server(tmp_path_factory):
    root = tmp_path_factory.mktemp("deployment")
    config = default_config(root / "data")
    config.port = _free_port()
    app = create_app(config)
    seed_all(app)
    config_path = root / "pathways.toml"
    _write_config_file(config, config_path)

    server = uvicorn.Server(
        uvicorn.Config(app, host=config.host, port=config.port, log_level="error")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("test server did not start")
        time.sleep(0.05)
    yield LiveServer(config=config, app=app, base_url=config.base_url, config_path=config_path)
    server.should_exit = True
    thread.join(timeout=5)
