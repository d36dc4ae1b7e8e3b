"""Command-line client against a running deployment."""

from __future__ import annotations

import json
from pathlib import Path

from click.testing import CliRunner

from pathways import fixtures
from pathways.cli import main
from pathways.config import default_config
from pathways.service.app import build_repository
from pathways.surrogate import parse, serialize
from pathways.model import Entity, ProviderInfo, canonicalize

GOLDEN = Path(__file__).parent / "golden" / "adore_sample.pwc.rdf"


def invoke(live_server, command: str, *args):
    runner = CliRunner()
    return runner.invoke(main, [command, "--config", str(live_server.config_path), *args])


class TestObtainCommand:
    def test_known_object_prints_surrogate(self, live_server):
        result = invoke(
            live_server,
            "obtain",
            "--provider",
            fixtures.ADORE_PROVIDER,
            "--id",
            fixtures.ADORE_ARTICLE_ID,
        )
        assert result.exit_code == 0
        assert result.stdout.encode() == GOLDEN.read_bytes()

    def test_unknown_object_exits_3(self, live_server):
        result = invoke(
            live_server,
            "obtain",
            "--provider",
            fixtures.ADORE_PROVIDER,
            "--id",
            "info:doi/none",
        )
        assert result.exit_code == 3
        assert "NotFound" in result.stderr

    def test_unknown_provider_exits_3(self, live_server):
        result = invoke(
            live_server, "obtain", "--provider", "info:sid/none", "--id", "info:x/1"
        )
        assert result.exit_code == 3

    def test_out_file_and_json(self, live_server, tmp_path):
        out = tmp_path / "doc.pwc.rdf"
        result = invoke(
            live_server,
            "obtain",
            "--provider",
            fixtures.ARXIV_PROVIDER,
            "--id",
            fixtures.ARXIV_ARTICLE_ID,
            "--out",
            str(out),
        )
        assert result.exit_code == 0
        assert out.exists()
        result = invoke(
            live_server,
            "obtain",
            "--provider",
            fixtures.ARXIV_PROVIDER,
            "--id",
            fixtures.ARXIV_ARTICLE_ID,
            "--json",
        )
        body = json.loads(result.stdout)
        assert body["semantic"] == "info:pathways/semantic/journal-article"

    def test_missing_required_option_usage_error(self, live_server):
        runner = CliRunner()
        result = runner.invoke(main, ["obtain", "--provider", "x"])
        assert result.exit_code == 2


class TestHarvestCommand:
    def test_writes_one_file_per_record(self, live_server, tmp_path):
        out_dir = tmp_path / "harvested"
        result = invoke(
            live_server,
            "harvest",
            "--provider",
            fixtures.DSPACE_PROVIDER,
            "--dir",
            str(out_dir),
            "--json",
        )
        assert result.exit_code == 0
        body = json.loads(result.stdout)
        assert body["records"] == len(list(out_dir.glob("*.pwc.rdf"))) >= 2
        for path in out_dir.glob("*.pwc.rdf"):
            parse(path.read_bytes())

    def test_future_window_empty_success(self, live_server, tmp_path):
        result = invoke(
            live_server,
            "harvest",
            "--provider",
            fixtures.DSPACE_PROVIDER,
            "--from",
            "2200-01-01T00:00:00Z",
            "--dir",
            str(tmp_path / "empty"),
            "--json",
        )
        assert result.exit_code == 0
        assert json.loads(result.stdout)["records"] == 0


class TestPutCommand:
    def test_deposit_prints_receipt(self, live_server, tmp_path):
        doc = serialize(
            Entity(provider_info=ProviderInfo("info:sid/cli-test", "info:cli/put-1"))
        ).data
        path = tmp_path / "one.pwc.rdf"
        path.write_bytes(doc)
        result = invoke(
            live_server,
            "put",
            "--provider",
            fixtures.FEDORA_PROVIDER,
            "--file",
            str(path),
        )
        assert result.exit_code == 0
        receipt = json.loads(result.stdout)
        assert receipt["stored"] == 1
        assert receipt["root"]["provider"] == fixtures.FEDORA_PROVIDER

    def test_wrong_token_exits_4(self, live_server, tmp_path):
        doc = serialize(
            Entity(provider_info=ProviderInfo("info:sid/cli-test", "info:cli/put-2"))
        ).data
        path = tmp_path / "two.pwc.rdf"
        path.write_bytes(doc)
        result = invoke(
            live_server,
            "put",
            "--provider",
            fixtures.FEDORA_PROVIDER,
            "--file",
            str(path),
            "--token",
            "wrong",
        )
        assert result.exit_code == 4


class TestSearchCommands:
    def test_index_then_search(self, live_server):
        result = invoke(live_server, "index", "--full", "--json")
        assert result.exit_code == 0
        stats = json.loads(result.stdout)
        assert stats["matched"] == 3
        result = invoke(live_server, "search", "--q", "heliotrope", "--json")
        rows = json.loads(result.stdout)
        assert [r["preferredIdentifier"] for r in rows] == [fixtures.DSPACE_ARTICLE_ID]


class TestGraphCommand:
    def test_writes_dot_file(self, live_server, tmp_path):
        out = tmp_path / "graph.dot"
        result = invoke(
            live_server,
            "graph",
            "--provider",
            fixtures.ARXIV_PROVIDER,
            "--id",
            fixtures.ARXIV_ARTICLE_ID,
            "--out",
            str(out),
            "--lineage-depth",
            "2",
        )
        assert result.exit_code == 0
        text = out.read_text("utf-8")
        assert text.startswith("digraph surrogate {")
        assert "hasEntity" in text


class TestSeedCommand:
    def test_seed_into_fresh_deployment(self, tmp_path, monkeypatch):
        monkeypatch.delenv("PATHWAYS_CONFIG", raising=False)
        config_path = tmp_path / "pathways.toml"
        config_path.write_text(
            f'[server]\nhost = "127.0.0.1"\nport = 9999\ndata_dir = "{tmp_path}/data"\n',
            "utf-8",
        )
        runner = CliRunner()
        result = runner.invoke(
            main, ["seed", "--config", str(config_path), "--repo", "adore"]
        )
        assert result.exit_code == 0
        config = default_config(tmp_path / "data")
        repo = build_repository(config, "adore")
        stored = parse(repo.get_document(fixtures.ADORE_ARTICLE_ID)[0])
        assert canonicalize(stored) == canonicalize(fixtures.adore_article())


class TestDeepPutOverLiveServer:
    def test_deep_put_rehosts_bytes_from_the_same_deployment(self, live_server):
        """Deep deposits dereference sibling-repository locations without
        stalling the server's event loop."""
        import httpx

        from pathways.model import Datastream

        source = httpx.get(
            f"{live_server.base_url}/repos/dspace/obtain",
            params={
                "url_ver": "Z39.88-2004",
                "rft_id": fixtures.DSPACE_ARTICLE_ID,
                "svc_id": "info:pathways/svc/surrogate",
            },
            timeout=10.0,
        )
        text_location = parse(source.content).datastreams[1].location
        doc = serialize(
            Entity(
                provider_info=ProviderInfo("info:sid/cli-test", "info:cli/deep-live"),
                datastreams=[Datastream(fixtures.FMT_TEXT, text_location)],
            )
        ).data
        response = httpx.post(
            f"{live_server.base_url}/repos/fedora/objects",
            params={"policy": "deep"},
            content=doc,
            headers={
                "Content-Type": "application/rdf+xml",
                "Authorization": "Bearer fedora-put-token",
            },
            timeout=30.0,
        )
        assert response.status_code == 201
        receipt = response.json()
        assert receipt["dereferenced"] == 1
        stored = httpx.get(
            f"{live_server.base_url}/repos/fedora/obtain",
            params={
                "url_ver": "Z39.88-2004",
                "rft_id": receipt["root"]["preferredIdentifier"],
                "svc_id": "info:pathways/svc/surrogate",
            },
            timeout=10.0,
        )
        new_location = parse(stored.content).datastreams[0].location
        assert new_location.startswith(f"{live_server.base_url}/repos/fedora/ds/")
        rehosted = httpx.get(new_location, timeout=10.0)
        assert rehosted.content == fixtures.DSPACE_ARTICLE_TEXT


class TestDemoOverlay:
    def test_exit_zero_and_four_objects(self, live_server):
        result = invoke(live_server, "demo-overlay", "--json")
        assert result.exit_code == 0, result.stderr or result.stdout
        body = json.loads(result.stdout)
        assert body["ok"] is True
        assert body["receipt"]["stored"] == 4
        assert {c["name"] for c in body["checks"]} >= {
            "decomposition",
            "lineage",
            "obtain+harvest",
            "shallow",
            "graph",
        }
