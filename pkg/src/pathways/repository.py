"""Reference repository: a disk-backed store of versioned digital objects.

Layout, one directory per object::

    <data_dir>/
      meta.json                    provider identity + write-generation counter
      objects/<encoded-id>/        manifest.json, v1.pwc.rdf, v2.pwc.rdf, ...
      datastreams/<sha256>.bin     content-addressed payload bytes
      datastreams/<sha256>.json    format record

All state lives on disk and is re-read per operation, so several processes
(server, seeding CLI) can share a store; writes serialize through a file
lock and bump the generation counter that invalidates harvest resumption
tokens. Datestamps are whole-second UTC and never decrease for an object.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable
from urllib.parse import quote

from filelock import FileLock

from .model import (
    PERSISTENCE_PERSISTENT,
    Datastream,
    DigitalObject,
    Entity,
    ProviderInfo,
    validate,
)
from .surrogate import serialize, parse

DATESTAMP_FMT = "%Y-%m-%dT%H:%M:%SZ"

SHALLOW = "shallow"
DEEP = "deep"
MINT_NEW = "mint-new"
RETAIN_ID = "retain-id"
DUP_REJECT = "reject"
DUP_NEW_VERSION = "new-version"
DUP_COEXIST = "coexist"


class RepositoryError(Exception):
    pass


class NotFound(RepositoryError):
    pass


class VersionNotFound(RepositoryError):
    pass


class DuplicateError(RepositoryError):
    pass


class RangeError(RepositoryError):
    pass


class PersistentObjectError(RepositoryError):
    pass


class DereferenceFailed(RepositoryError):
    def __init__(self, location: str, reason: str):
        self.location = location
        super().__init__(f"cannot dereference {location}: {reason}")


def now_utc() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def format_datestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime(DATESTAMP_FMT)


def parse_datestamp(text: str) -> datetime:
    return datetime.strptime(text, DATESTAMP_FMT).replace(tzinfo=timezone.utc)


@dataclass
class RepositoryConfig:
    provider: str
    name: str
    data_dir: Path
    base_url: str  # public base of this repository's routes, no trailing slash
    versioning_enabled: bool = True
    ingest_policy: str = SHALLOW
    mint_policy: str = MINT_NEW
    duplicate_policy: str = DUP_COEXIST
    auth_token: str | None = None
    page_size: int = 50


@dataclass
class IngestReceipt:
    """Outcome of one deposit: assigned identity per decomposed entity."""

    root: ProviderInfo
    mapping: list[tuple[ProviderInfo, ProviderInfo]] = field(default_factory=list)
    dereferenced: int = 0

    @property
    def stored(self) -> int:
        return len(self.mapping)


def _encode_object_id(preferred_identifier: str) -> str:
    encoded = quote(preferred_identifier, safe="")
    if len(encoded) > 150:
        return "sha256-" + hashlib.sha256(preferred_identifier.encode("utf-8")).hexdigest()
    return encoded


class Repository:
    def __init__(self, config: RepositoryConfig):
        self.config = config
        self.data_dir = Path(config.data_dir)
        self.objects_dir = self.data_dir / "objects"
        self.datastreams_dir = self.data_dir / "datastreams"
        self.objects_dir.mkdir(parents=True, exist_ok=True)
        self.datastreams_dir.mkdir(parents=True, exist_ok=True)
        self._lock = FileLock(str(self.data_dir / ".write.lock"))
        meta = self.data_dir / "meta.json"
        if not meta.exists():
            self._write_json(meta, {"provider": config.provider, "generation": 0})

    @property
    def provider(self) -> str:
        return self.config.provider

    # -- low-level plumbing ------------------------------------------------

    @staticmethod
    def _write_json(path: Path, payload: dict) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(payload, indent=1, sort_keys=True), "utf-8")
        tmp.replace(path)

    def generation(self) -> int:
        return json.loads((self.data_dir / "meta.json").read_text("utf-8"))["generation"]

    def _bump_generation(self) -> None:
        meta_path = self.data_dir / "meta.json"
        meta = json.loads(meta_path.read_text("utf-8"))
        meta["generation"] += 1
        self._write_json(meta_path, meta)

    def _object_dir(self, preferred_identifier: str) -> Path:
        return self.objects_dir / _encode_object_id(preferred_identifier)

    def _manifest(self, preferred_identifier: str) -> dict:
        path = self._object_dir(preferred_identifier) / "manifest.json"
        if not path.exists():
            raise NotFound(f"no object {preferred_identifier!r} in {self.provider}")
        return json.loads(path.read_text("utf-8"))

    # -- objects -----------------------------------------------------------

    def store_object(self, root: Entity, datestamp: datetime | None = None) -> tuple[ProviderInfo, datetime]:
        """Store ``root`` as-is: a new object, or a new version if the
        preferredIdentifier already exists and versioning is enabled.

        Returns the stored (provider, preferredIdentifier, versionKey) and the
        assigned datestamp. No identifier rewriting happens here; ``ingest``
        is the policy-aware entry point for deposits.
        """
        report = validate(root)
        if report:
            raise RepositoryError(f"invalid entity: {report[0]}")
        if root.provider_info is None:
            raise RepositoryError("object root must carry providerInfo")
        if root.provider_info.provider != self.provider:
            raise RepositoryError(
                f"root provider {root.provider_info.provider!r} is not this repository ({self.provider!r})"
            )
        pid = root.provider_info.preferred_identifier
        document = serialize(root)
        with self._lock:
            obj_dir = self._object_dir(pid)
            when = datestamp or now_utc()
            if obj_dir.exists():
                manifest = self._manifest(pid)
                if not self.config.versioning_enabled:
                    raise DuplicateError(f"object {pid!r} already stored and versioning is disabled")
                # datestamps never move backwards for an object
                when = max(when, parse_datestamp(manifest["datestamp"]))
                version = f"v{len(manifest['versions']) + 1}"
                manifest["versions"].append(version)
            else:
                obj_dir.mkdir(parents=True)
                version = "v1"
                manifest = {"preferredIdentifier": pid, "versions": [version]}
            manifest["datestamp"] = format_datestamp(when)
            (obj_dir / f"{version}.pwc.rdf").write_bytes(document.data)
            self._write_json(obj_dir / "manifest.json", manifest)
            self._bump_generation()
        stored = ProviderInfo(self.provider, pid, version)
        return stored, when

    def get_document(self, preferred_identifier: str, version_key: str | None = None) -> tuple[bytes, datetime]:
        """Stored surrogate bytes for one version (current when unspecified)."""
        manifest = self._manifest(preferred_identifier)
        version = version_key or manifest["versions"][-1]
        if version not in manifest["versions"]:
            raise VersionNotFound(f"object {preferred_identifier!r} has no version {version!r}")
        data = (self._object_dir(preferred_identifier) / f"{version}.pwc.rdf").read_bytes()
        return data, parse_datestamp(manifest["datestamp"])

    def get(self, preferred_identifier: str, version_key: str | None = None) -> DigitalObject:
        manifest = self._manifest(preferred_identifier)
        data, datestamp = self.get_document(preferred_identifier, version_key)
        versions = []
        if self.config.versioning_enabled:
            obj_dir = self._object_dir(preferred_identifier)
            for v in manifest["versions"]:
                versions.append((v, parse((obj_dir / f"{v}.pwc.rdf").read_bytes())))
        return DigitalObject(root=parse(data), datestamp=datestamp, versions=versions)

    def list_since(
        self,
        from_: datetime | None = None,
        until: datetime | None = None,
    ) -> list[tuple[str, datetime]]:
        """All (preferredIdentifier, datestamp) with from <= datestamp <= until."""
        if from_ is not None and until is not None and from_ > until:
            raise RangeError(f"from {from_} is after until {until}")
        out = []
        for manifest_path in self.objects_dir.glob("*/manifest.json"):
            manifest = json.loads(manifest_path.read_text("utf-8"))
            stamp = parse_datestamp(manifest["datestamp"])
            if from_ is not None and stamp < from_:
                continue
            if until is not None and stamp > until:
                continue
            out.append((manifest["preferredIdentifier"], stamp))
        out.sort(key=lambda item: (item[1], item[0]))
        return out

    def delete_object(self, preferred_identifier: str, force: bool = False) -> None:
        """Remove an object; persistent objects require ``force``."""
        current = self.get(preferred_identifier)
        if current.root.persistence == PERSISTENCE_PERSISTENT and not force:
            raise PersistentObjectError(
                f"object {preferred_identifier!r} declares persistent availability; pass force to delete"
            )
        with self._lock:
            shutil.rmtree(self._object_dir(preferred_identifier))
            self._bump_generation()

    # -- datastreams ---------------------------------------------------------

    def store_datastream(self, data: bytes, format_uri: str) -> str:
        """Store payload bytes content-addressed; returns the local id."""
        local_id = hashlib.sha256(data).hexdigest()
        with self._lock:
            blob = self.datastreams_dir / f"{local_id}.bin"
            if not blob.exists():
                blob.write_bytes(data)
                self._write_json(self.datastreams_dir / f"{local_id}.json", {"format": format_uri})
        return local_id

    def serve_datastream(self, local_id: str) -> tuple[str, bytes]:
        blob = self.datastreams_dir / f"{local_id}.bin"
        record = self.datastreams_dir / f"{local_id}.json"
        if not blob.exists() or not record.exists():
            raise NotFound(f"no datastream {local_id!r}")
        format_uri = json.loads(record.read_text("utf-8"))["format"]
        return format_uri, blob.read_bytes()

    def delete_datastream(self, local_id: str) -> None:
        blob = self.datastreams_dir / f"{local_id}.bin"
        if not blob.exists():
            raise NotFound(f"no datastream {local_id!r}")
        with self._lock:
            blob.unlink()
            (self.datastreams_dir / f"{local_id}.json").unlink(missing_ok=True)

    def datastream_url(self, local_id: str) -> str:
        return f"{self.config.base_url}/ds/{local_id}"

    # -- deposit -------------------------------------------------------------

    def mint_identifier(self) -> str:
        return f"info:local/{self.config.name}/{uuid.uuid4()}"

    def ingest(
        self,
        root: Entity,
        *,
        policy: str | None = None,
        fetch: Callable[[str], bytes] | None = None,
        datestamp: datetime | None = None,
    ) -> IngestReceipt:
        """Deposit a surrogate per repository policy.

        Every entity in the incoming tree that carries providerInfo becomes a
        stored object of its own; parents keep providerInfo-only stubs in its
        place. Each stored object's lineage is set to the incoming entity's
        original providerInfo, the back-link that chains derivations across
        repositories. Entities without providerInfo stay inline. Under the
        deep policy every datastream location is dereferenced via ``fetch``,
        hosted locally and rewritten; shallow deposits never fetch anything.
        """
        report = validate(root)
        if report:
            raise RepositoryError(f"invalid entity: {report[0]}")
        if root.provider_info is None:
            raise RepositoryError("deposited surrogate root must carry providerInfo")
        policy = policy or self.config.ingest_policy
        if policy not in (SHALLOW, DEEP):
            raise RepositoryError(f"unknown ingest policy {policy!r}")
        if policy == DEEP and fetch is None:
            raise RepositoryError("deep ingest requires a fetch callable")

        planned = [node for node in _preorder(root) if node.provider_info is not None]

        # Dereference before any write so a failed fetch aborts the whole put.
        rewritten_locations: dict[str, str] = {}
        dereferenced = 0
        if policy == DEEP:
            for node in _preorder(root):
                for ds in node.datastreams:
                    if ds.location in rewritten_locations:
                        continue
                    try:
                        payload = fetch(ds.location)
                    except Exception as exc:  # noqa: BLE001 - reported as protocol error
                        raise DereferenceFailed(ds.location, str(exc)) from exc
                    dereferenced += 1
                    local_id = self.store_datastream(payload, ds.format)
                    rewritten_locations[ds.location] = self.datastream_url(local_id)

        when = datestamp or now_utc()
        with self._lock:
            assigned: dict[int, ProviderInfo] = {}
            for node in planned:
                incoming = node.provider_info
                existing = self._find_duplicate(incoming)
                if existing is not None:
                    if self.config.duplicate_policy == DUP_REJECT:
                        raise DuplicateError(
                            f"surrogate for {incoming.preferred_identifier!r} duplicates stored object {existing!r}"
                        )
                    if self.config.duplicate_policy == DUP_NEW_VERSION:
                        assigned[id(node)] = ProviderInfo(self.provider, existing)
                        continue
                if self.config.mint_policy == RETAIN_ID:
                    pid = incoming.preferred_identifier
                else:
                    pid = self.mint_identifier()
                assigned[id(node)] = ProviderInfo(self.provider, pid)

            receipt = IngestReceipt(root=assigned[id(root)], dereferenced=dereferenced)
            stored_dirs: list[Path] = []
            try:
                for node in planned:
                    local_root = _localize(node, assigned, rewritten_locations)
                    existed = self._object_dir(local_root.provider_info.preferred_identifier).exists()
                    stored_pi, _ = self.store_object(local_root, datestamp=when)
                    if not existed:
                        stored_dirs.append(self._object_dir(stored_pi.preferred_identifier))
                    receipt.mapping.append((node.provider_info, stored_pi))
                    if node is root:
                        receipt.root = stored_pi
            except Exception:
                # roll back object directories this deposit created; orphaned
                # content-addressed datastream blobs are harmless
                for obj_dir in stored_dirs:
                    shutil.rmtree(obj_dir, ignore_errors=True)
                raise
        return receipt

    def _find_duplicate(self, incoming: ProviderInfo) -> str | None:
        """PreferredIdentifier of a stored object this surrogate duplicates.

        A stored object is a duplicate when its lineage already points at the
        incoming providerInfo, or (under retain-id) when it sits under the
        same preferredIdentifier.
        """
        if self.config.mint_policy == RETAIN_ID and self._object_dir(incoming.preferred_identifier).exists():
            return incoming.preferred_identifier
        matches = []
        for pid, _ in self.list_since():
            data, _ = self.get_document(pid)
            root = parse(data)
            if any(
                li.provider == incoming.provider
                and li.preferred_identifier == incoming.preferred_identifier
                for li in root.lineage
            ):
                matches.append(pid)
        return min(matches) if matches else None


def _preorder(entity: Entity) -> list[Entity]:
    out = [entity]
    for child in entity.children:
        out.extend(_preorder(child))
    return out


def _localize(
    node: Entity,
    assigned: dict[int, ProviderInfo],
    rewritten_locations: dict[str, str],
) -> Entity:
    """Stored form of one decomposed entity: local identity, lineage back-link,
    providerInfo-bearing children replaced by stubs, inline children kept."""

    def rewrite_ds(ds: Datastream) -> Datastream:
        if ds.location in rewritten_locations:
            return Datastream(format=ds.format, location=rewritten_locations[ds.location])
        return ds

    def inline(e: Entity) -> Entity:
        children = []
        for c in e.children:
            if c.provider_info is not None:
                children.append(Entity(provider_info=assigned[id(c)]))
            else:
                children.append(inline(c))
        return Entity(
            identifiers=list(e.identifiers),
            provider_info=e.provider_info,
            semantic=e.semantic,
            persistence=e.persistence,
            lineage=list(e.lineage),
            children=children,
            datastreams=[rewrite_ds(d) for d in e.datastreams],
        )

    localized = inline(node)
    localized.provider_info = assigned[id(node)]
    localized.lineage = [node.provider_info]
    return localized
