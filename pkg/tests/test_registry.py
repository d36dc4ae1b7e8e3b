"""Service registry and vocabulary tables (library level)."""

from __future__ import annotations

import json

import pytest

from pathways.registry import (
    RegistryNotFound,
    RegistryRecord,
    ServiceRegistry,
    VocabularyEntry,
    default_registry,
)


class TestRecords:
    def test_register_and_lookup(self):
        registry = ServiceRegistry()
        registry.register(RegistryRecord("info:sid/a", obtain_base="http://a/obtain"))
        assert registry.lookup("info:sid/a").obtain_base == "http://a/obtain"

    def test_unknown_provider(self):
        with pytest.raises(RegistryNotFound):
            ServiceRegistry().lookup("info:sid/none")

    def test_upsert_replaces(self):
        registry = ServiceRegistry()
        registry.register(RegistryRecord("info:sid/a", obtain_base="http://old/obtain"))
        registry.register(RegistryRecord("info:sid/a", obtain_base="http://new/obtain"))
        assert registry.lookup("info:sid/a").obtain_base == "http://new/obtain"

    def test_record_needs_an_endpoint(self):
        with pytest.raises(ValueError):
            ServiceRegistry().register(RegistryRecord("info:sid/a"))

    def test_record_needs_a_provider(self):
        with pytest.raises(ValueError):
            ServiceRegistry().register(RegistryRecord("", obtain_base="http://a"))

    def test_providers_sorted(self):
        registry = ServiceRegistry()
        registry.register(RegistryRecord("info:sid/b", obtain_base="http://b"))
        registry.register(RegistryRecord("info:sid/a", obtain_base="http://a"))
        assert [r.provider for r in registry.providers()] == ["info:sid/a", "info:sid/b"]


class TestVocabulary:
    def test_default_tables(self):
        registry = default_registry()
        pdf = registry.resolve_vocab("info:pathways/fmt/pronom/1000", "format")
        assert pdf.label == "PDF"
        assert pdf.mime == "application/pdf"
        assert registry.resolve_vocab("info:pathways/semantic/journal-article", "semantic")
        assert registry.resolve_vocab("info:pathways/persistence/transient", "persistence")

    def test_unknown_uri(self):
        with pytest.raises(RegistryNotFound):
            default_registry().resolve_vocab("info:fmt/none", "format")

    def test_mime_for_unknown_is_none(self):
        assert default_registry().mime_for("info:fmt/none") is None

    def test_uri_unique_per_kind_not_globally(self):
        registry = ServiceRegistry()
        registry.add_vocab(VocabularyEntry("info:x/1", "format", "One", "text/plain"))
        registry.add_vocab(VocabularyEntry("info:x/1", "semantic", "Other"))
        assert registry.resolve_vocab("info:x/1", "format").label == "One"
        assert registry.resolve_vocab("info:x/1", "semantic").label == "Other"

    def test_load_from_flat_file(self, tmp_path):
        path = tmp_path / "vocab.json"
        path.write_text(
            json.dumps(
                [
                    {
                        "uri": "info:pathways/fmt/pronom/fmt-91",
                        "kind": "format",
                        "label": "XHTML",
                        "mime": "application/xhtml+xml",
                    },
                    {
                        "uri": "info:pathways/semantic/preprint",
                        "kind": "semantic",
                        "label": "Preprint",
                    },
                ]
            ),
            "utf-8",
        )
        registry = default_registry()
        assert registry.load_vocab_file(path) == 2
        assert registry.mime_for("info:pathways/fmt/pronom/fmt-91") == "application/xhtml+xml"


class TestVocabFileWiring:
    def test_config_vocab_file_reaches_the_service(self, tmp_path):
        from fastapi.testclient import TestClient

        from pathways.config import default_config
        from pathways.service.app import create_app

        vocab_path = tmp_path / "vocab.json"
        vocab_path.write_text(
            json.dumps(
                [
                    {
                        "uri": "info:pathways/fmt/pronom/fmt-44",
                        "kind": "format",
                        "label": "JPEG",
                        "mime": "image/jpeg",
                    }
                ]
            ),
            "utf-8",
        )
        config = default_config(tmp_path / "data")
        config.vocab_file = vocab_path
        tc = TestClient(create_app(config))
        response = tc.get(
            "/registry/vocab/format", params={"uri": "info:pathways/fmt/pronom/fmt-44"}
        )
        assert response.status_code == 200
        assert response.json()["mime"] == "image/jpeg"
