"""Operator command line: run the services, seed fixtures, and drive the
obtain/harvest/put/search interfaces as an HTTP client.

Exit codes: 0 success, 2 usage, 3 not found, 4 protocol error,
5 verification failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from urllib.parse import quote

import click

from . import fixtures
from .client import (
    FederationClient,
    HarvestError,
    ObtainError,
    PutError,
    UnfederatedProvider,
)
from .config import AppConfig, load_config
from .dot import to_dot
from .model import ProviderInfo
from .overlay import run_overlay_demo
from .surrogate import parse

EXIT_NOT_FOUND = 3
EXIT_PROTOCOL = 4
EXIT_VERIFY = 5


def _fail(message: str, code: int) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _client(config: AppConfig) -> FederationClient:
    return FederationClient(config.registry_base)


def _map_error(exc: Exception) -> None:
    if isinstance(exc, UnfederatedProvider):
        _fail(f"provider not registered: {exc}", EXIT_NOT_FOUND)
    if isinstance(exc, ObtainError) and exc.status == 404:
        _fail(str(exc), EXIT_NOT_FOUND)
    if isinstance(exc, (ObtainError, HarvestError, PutError)):
        _fail(str(exc), EXIT_PROTOCOL)
    _fail(str(exc), EXIT_PROTOCOL)


config_option = click.option(
    "--config",
    "config_path",
    type=click.Path(path_type=Path),
    default=None,
    help="Deployment config file (default: $PATHWAYS_CONFIG or ./pathways.toml).",
)


@click.group()
def main() -> None:
    """Federation tooling: services, fixtures and protocol clients."""


@main.command()
@config_option
@click.option("--host", default=None, help="Override bind host.")
@click.option("--port", type=int, default=None, help="Override bind port.")
def serve(config_path: Path | None, host: str | None, port: int | None) -> None:
    """Start registry, repositories, search service and UI in one process."""
    import uvicorn

    from .service.app import create_app

    config = load_config(config_path)
    if host:
        config.host = host
    if port:
        config.port = port
    app = create_app(config)
    click.echo(f"registry   {config.registry_base}")
    for spec in config.repositories:
        click.echo(f"repository {config.repo_base(spec.name)}  ({spec.provider})")
    click.echo(f"search     {config.search_base}")
    click.echo(f"ui         {config.base_url}/ui/")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


@main.command()
@config_option
@click.option("--profile", type=click.Choice(sorted(fixtures.PROFILES)), required=False)
@click.option("--repo", "repo_name", required=True, help="Repository name or provider URI.")
def seed(config_path: Path | None, profile: str | None, repo_name: str) -> None:
    """Load fixture objects into a repository's data directory."""
    from .service.app import build_repository

    config = load_config(config_path)
    try:
        spec = config.repo(repo_name)
    except KeyError as exc:
        _fail(str(exc), EXIT_NOT_FOUND)
    profile = profile or spec.seed_profile or spec.name
    if profile not in fixtures.PROFILES:
        _fail(f"no seed profile {profile!r} (choose from {sorted(fixtures.PROFILES)})", EXIT_NOT_FOUND)
    repo = build_repository(config, spec.name)
    count = fixtures.seed(repo, profile)
    click.echo(f"seeded {count} objects into {spec.name} ({spec.provider})")


@main.command()
@config_option
@click.option("--provider", required=True)
@click.option("--id", "identifier", required=True)
@click.option("--version", "version_key", default=None)
@click.option("--out", type=click.Path(path_type=Path), default=None)
@click.option("--json", "as_json", is_flag=True)
def obtain(config_path, provider, identifier, version_key, out, as_json) -> None:
    """Resolve an identifier into its surrogate document."""
    config = load_config(config_path)
    client = _client(config)
    try:
        document = client.obtain_document(ProviderInfo(provider, identifier, version_key))
    except Exception as exc:  # noqa: BLE001
        _map_error(exc)
    if out:
        out.write_bytes(document)
        click.echo(f"wrote {out}")
    elif as_json:
        entity = parse(document)
        click.echo(
            json.dumps(
                {
                    "provider": provider,
                    "preferredIdentifier": identifier,
                    "semantic": entity.semantic,
                    "identifiers": entity.identifiers,
                    "document": document.decode("utf-8"),
                }
            )
        )
    else:
        click.echo(document.decode("utf-8"), nl=False)


@main.command()
@config_option
@click.option("--provider", required=True)
@click.option("--from", "from_", default=None, help="Inclusive UTC datestamp (YYYY-MM-DDThh:mm:ssZ).")
@click.option("--until", default=None)
@click.option("--dir", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--json", "as_json", is_flag=True)
def harvest(config_path, provider, from_, until, out_dir, as_json) -> None:
    """Incrementally collect surrogates; one .pwc.rdf file per record."""
    config = load_config(config_path)
    client = _client(config)
    try:
        records = client.harvest(provider, from_=from_, until=until)
    except Exception as exc:  # noqa: BLE001
        _map_error(exc)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for record in records:
        name = quote(record.identifier, safe="")[:150] + ".pwc.rdf"
        (out_dir / name).write_bytes(record.document())
        names.append(name)
    if as_json:
        click.echo(json.dumps({"provider": provider, "records": len(records), "files": names}))
    else:
        click.echo(f"harvested {len(records)} records from {provider} into {out_dir}")


@main.command(name="put")
@config_option
@click.option("--provider", required=True)
@click.option("--file", "path", type=click.Path(path_type=Path, exists=True), required=True)
@click.option("--policy", type=click.Choice(["shallow", "deep"]), default=None)
@click.option("--token", default=None, help="Bearer token (default: from configuration).")
def put_cmd(config_path, provider, path, policy, token) -> None:
    """Deposit a surrogate document; prints the receipt as JSON."""
    config = load_config(config_path)
    client = _client(config)
    if token is None:
        try:
            token = config.repo(provider).auth_token
        except KeyError:
            token = None
    try:
        receipt = client.put(provider, path.read_bytes(), token=token, policy=policy)
    except Exception as exc:  # noqa: BLE001
        _map_error(exc)
    click.echo(json.dumps(receipt, indent=2))


@main.command()
@config_option
@click.option("--provider", "providers", multiple=True, help="Limit indexing to these providers.")
@click.option("--full", is_flag=True, help="Re-harvest everything instead of incrementally.")
@click.option("--json", "as_json", is_flag=True)
def index(config_path, providers, full, as_json) -> None:
    """Build or refresh the search index via the search service."""
    import httpx

    config = load_config(config_path)
    body = {"providers": list(providers) or None, "full": full}
    try:
        response = httpx.post(f"{config.search_base}/index", json=body, timeout=60.0)
        response.raise_for_status()
    except httpx.HTTPError as exc:
        _fail(f"indexing failed: {exc}", EXIT_PROTOCOL)
    stats = response.json()
    if as_json:
        click.echo(json.dumps(stats))
    else:
        click.echo(
            "harvested {harvested}, matched {matched}, fetched {fetched}, "
            "indexed {indexed}, failed {failed}".format(**stats)
        )


@main.command()
@config_option
@click.option("--q", "query", required=True)
@click.option("--limit", type=int, default=10)
@click.option("--json", "as_json", is_flag=True)
def search(config_path, query, limit, as_json) -> None:
    """Query the search service."""
    import httpx

    config = load_config(config_path)
    try:
        response = httpx.get(
            config.search_base, params={"q": query, "limit": limit}, timeout=10.0
        )
        response.raise_for_status()
    except httpx.HTTPError as exc:
        _fail(f"search failed: {exc}", EXIT_PROTOCOL)
    results = response.json()
    if as_json:
        click.echo(json.dumps(results))
    else:
        for row in results:
            click.echo(f"{row['score']:.4f}  {row['provider']}  {row['preferredIdentifier']}  {row['snippet']}")
        click.echo(f"{len(results)} results")


@main.command(name="demo-overlay")
@config_option
@click.option("--json", "as_json", is_flag=True)
def demo_overlay(config_path, as_json) -> None:
    """Compose an overlay-journal issue from three repositories and verify it."""
    config = load_config(config_path)
    client = _client(config)
    try:
        target = config.repo(config.ui.put_target)
    except KeyError as exc:
        _fail(str(exc), EXIT_NOT_FOUND)
    sources = [s.provider for s in config.repositories if s.name != target.name][:3]
    if len(sources) < 3:
        _fail("need three source repositories besides the target", EXIT_VERIFY)
    try:
        result = run_overlay_demo(client, sources, target.provider, target.auth_token)
    except Exception as exc:  # noqa: BLE001
        _map_error(exc)
    if as_json:
        click.echo(
            json.dumps(
                {
                    "ok": result.ok,
                    "receipt": result.receipt,
                    "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in result.checks],
                    "dot": result.dot,
                }
            )
        )
    else:
        click.echo(f"issue deposited: {result.issue.preferred_identifier}")
        click.echo(f"objects created: {result.receipt['stored']}")
        for check in result.checks:
            click.echo(f"  [{'ok' if check.ok else 'FAIL'}] {check.name}: {check.detail}")
    if not result.ok:
        sys.exit(EXIT_VERIFY)


@main.command()
@config_option
@click.option("--provider", required=True)
@click.option("--id", "identifier", required=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--lineage-depth", type=int, default=0)
def graph(config_path, provider, identifier, out, lineage_depth) -> None:
    """Export an object's graph (optionally with traced lineage) as DOT."""
    from .client import registry_resolver

    config = load_config(config_path)
    client = _client(config)
    pi = ProviderInfo(provider, identifier)
    try:
        entity = client.obtain(pi)
    except Exception as exc:  # noqa: BLE001
        _map_error(exc)
    lineage = client.trace_lineage(pi, max_depth=lineage_depth) if lineage_depth > 0 else None
    dot = to_dot(
        entity,
        lineage=lineage,
        resolver=registry_resolver(client),
        registry_base=config.registry_base,
    )
    out.write_text(dot, "utf-8")
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
