"""Client side of the federation: registry lookups, obtain/harvest/put calls
and cross-repository lineage traversal.

Reads (obtain, harvest, registry) retry twice with backoff on transport
failures; put is never retried automatically since deposits mint identifiers
and are not idempotent.
"""

from __future__ import annotations

import time
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import quote

import httpx

from .model import Entity, ProviderInfo, walk
from .oai import METADATA_PREFIX, OAI_NS
from .registry import RegistryRecord
from .surrogate import parse, parse_rdf_element, serialize

SVC_SURROGATE = "info:pathways/svc/surrogate"
OPENURL_VERSION = "Z39.88-2004"

DEFAULT_TIMEOUT = 5.0
RETRIES = 2
BACKOFF_S = 0.2


class FederationError(Exception):
    pass


class UnfederatedProvider(FederationError):
    """The surrogate references a repository the registry does not know."""


class ObtainError(FederationError):
    def __init__(self, provider: str, status: int, reason: str):
        self.provider = provider
        self.status = status
        super().__init__(f"obtain from {provider} failed with {status}: {reason}")


class HarvestError(FederationError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"harvest failed ({code}): {message}")


class PutError(FederationError):
    def __init__(self, status: int, reason: str):
        self.status = status
        super().__init__(f"put failed with {status}: {reason}")


@dataclass
class HarvestRecord:
    identifier: str
    datestamp: str
    entity: Entity

    def document(self) -> bytes:
        return serialize(self.entity).data


@dataclass
class LineageNode:
    provider_info: ProviderInfo
    depth: int
    unreachable: bool = False
    error: str | None = None


NodeKey = tuple[str, str, str]


@dataclass
class LineageGraph:
    root: NodeKey
    nodes: dict[NodeKey, LineageNode] = field(default_factory=dict)
    edges: list[tuple[NodeKey, NodeKey]] = field(default_factory=list)


def node_key(pi: ProviderInfo) -> NodeKey:
    return (pi.provider, pi.preferred_identifier, pi.version_key or "")


class FederationClient:
    def __init__(
        self,
        registry_base: str,
        http: httpx.Client | None = None,
        cache_ttl: float = 60.0,
    ):
        self.registry_base = registry_base.rstrip("/")
        self.http = http or httpx.Client(timeout=DEFAULT_TIMEOUT)
        self.cache_ttl = cache_ttl
        self._cache: dict[str, tuple[RegistryRecord, float]] = {}

    # -- transport ----------------------------------------------------------

    def _get(self, url: str, params: dict | None = None) -> httpx.Response:
        last_exc: Exception | None = None
        for attempt in range(RETRIES + 1):
            try:
                return self.http.get(url, params=params)
            except httpx.TransportError as exc:
                last_exc = exc
                time.sleep(BACKOFF_S * (attempt + 1))
        raise FederationError(f"cannot reach {url}: {last_exc}")

    # -- registry -----------------------------------------------------------

    def lookup(self, provider: str, bypass_cache: bool = False) -> RegistryRecord:
        if not bypass_cache:
            cached = self._cache.get(provider)
            if cached and cached[1] > time.monotonic():
                return cached[0]
        url = f"{self.registry_base}/providers/{quote(provider, safe='')}"
        response = self._get(url)
        if response.status_code == 404:
            raise UnfederatedProvider(provider)
        response.raise_for_status()
        raw = response.json()
        record = RegistryRecord(
            provider=raw["provider"],
            obtain_base=raw.get("obtainBase"),
            harvest_base=raw.get("harvestBase"),
            put_base=raw.get("putBase"),
        )
        self._cache[provider] = (record, time.monotonic() + self.cache_ttl)
        return record

    def register(self, record: RegistryRecord) -> None:
        url = f"{self.registry_base}/providers/{quote(record.provider, safe='')}"
        response = self.http.put(
            url,
            json={
                "provider": record.provider,
                "obtainBase": record.obtain_base,
                "harvestBase": record.harvest_base,
                "putBase": record.put_base,
            },
        )
        if response.status_code >= 400:
            raise FederationError(f"registry rejected record: {response.status_code} {response.text}")
        self._cache.pop(record.provider, None)

    def providers(self) -> list[RegistryRecord]:
        response = self._get(f"{self.registry_base}/providers")
        response.raise_for_status()
        return [
            RegistryRecord(
                provider=raw["provider"],
                obtain_base=raw.get("obtainBase"),
                harvest_base=raw.get("harvestBase"),
                put_base=raw.get("putBase"),
            )
            for raw in response.json()
        ]

    # -- obtain ---------------------------------------------------------------

    def obtain_document(self, pi: ProviderInfo) -> bytes:
        record = self.lookup(pi.provider)
        if not record.obtain_base:
            raise ObtainError(pi.provider, 0, "provider has no obtain endpoint")
        params = {
            "url_ver": OPENURL_VERSION,
            "rft_id": pi.preferred_identifier,
            "svc_id": SVC_SURROGATE,
        }
        if pi.version_key:
            params["res_key"] = pi.version_key
        response = self._get(record.obtain_base, params=params)
        if response.status_code != 200:
            raise ObtainError(pi.provider, response.status_code, response.text.strip())
        return response.content

    def obtain(self, pi: ProviderInfo) -> Entity:
        return parse(self.obtain_document(pi))

    # -- harvest ----------------------------------------------------------------

    def harvest(
        self,
        provider_or_base: str,
        from_: str | None = None,
        until: str | None = None,
    ) -> list[HarvestRecord]:
        """Collect all records in a window, following resumption tokens.

        A badResumptionToken reply (store changed mid-harvest) restarts the
        whole window, at most twice.
        """
        if provider_or_base.startswith(("http://", "https://")):
            base = provider_or_base
        else:
            record = self.lookup(provider_or_base)
            if not record.harvest_base:
                raise HarvestError("noHarvestEndpoint", provider_or_base)
            base = record.harvest_base

        for _ in range(3):
            try:
                return self._harvest_window(base, from_, until)
            except HarvestError as err:
                if err.code != "badResumptionToken":
                    raise
        raise HarvestError("badResumptionToken", "store kept changing during harvest")

    def _harvest_window(self, base: str, from_: str | None, until: str | None) -> list[HarvestRecord]:
        params: dict[str, str] = {"verb": "ListRecords", "metadataPrefix": METADATA_PREFIX}
        if from_:
            params["from"] = from_
        if until:
            params["until"] = until
        records: list[HarvestRecord] = []
        while True:
            response = self._get(base, params=params)
            if response.status_code != 200:
                raise HarvestError("transport", f"{base} answered {response.status_code}")
            try:
                root = ET.fromstring(response.content)
            except ET.ParseError as exc:
                raise HarvestError("transport", f"unparseable response from {base}: {exc}") from None
            error = root.find(f"{{{OAI_NS}}}error")
            if error is not None:
                code = error.get("code", "")
                if code == "noRecordsMatch":
                    return records
                raise HarvestError(code, error.text or "")
            for rec in root.iter(f"{{{OAI_NS}}}record"):
                header = rec.find(f"{{{OAI_NS}}}header")
                metadata = rec.find(f"{{{OAI_NS}}}metadata")
                rdf = metadata.find("{http://www.w3.org/1999/02/22-rdf-syntax-ns#}RDF")
                records.append(
                    HarvestRecord(
                        identifier=header.findtext(f"{{{OAI_NS}}}identifier"),
                        datestamp=header.findtext(f"{{{OAI_NS}}}datestamp"),
                        entity=parse_rdf_element(rdf),
                    )
                )
            token_el = root.find(f".//{{{OAI_NS}}}resumptionToken")
            if token_el is None or not (token_el.text or "").strip():
                return records
            params = {"verb": "ListRecords", "resumptionToken": token_el.text.strip()}

    def list_identifiers(
        self,
        provider_or_base: str,
        from_: str | None = None,
        until: str | None = None,
    ) -> list[tuple[str, str]]:
        return [(r.identifier, r.datestamp) for r in self.harvest(provider_or_base, from_, until)]

    # -- put -----------------------------------------------------------------

    def put(
        self,
        provider: str,
        document: bytes,
        token: str | None = None,
        policy: str | None = None,
    ) -> dict:
        record = self.lookup(provider)
        if not record.put_base:
            raise PutError(0, f"provider {provider} has no put endpoint")
        headers = {"Content-Type": "application/rdf+xml"}
        if token:
            headers["Authorization"] = f"Bearer {token}"
        params = {"policy": policy} if policy else None
        response = self.http.post(
            f"{record.put_base}/objects",
            content=document,
            headers=headers,
            params=params,
        )
        if response.status_code != 201:
            raise PutError(response.status_code, response.text.strip())
        return response.json()

    # -- lineage -----------------------------------------------------------------

    def trace_lineage(self, pi: ProviderInfo, max_depth: int = 5) -> LineageGraph:
        """Breadth-first walk over lineage back-links across repositories.

        Every entity in each obtained surrogate contributes its lineage
        targets. A providerInfo is visited at most once; edges only point to
        strictly deeper nodes, so the result is acyclic by construction.
        Fetch failures mark the node unreachable and stop expansion there.
        """
        if max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        root_key = node_key(pi)
        graph = LineageGraph(root=root_key, nodes={root_key: LineageNode(pi, 0)})
        frontier = [root_key]
        depth = 0
        while frontier and depth < max_depth:
            next_frontier = []
            for key in sorted(frontier):
                node = graph.nodes[key]
                try:
                    entity = self.obtain(node.provider_info)
                except FederationError as exc:
                    node.unreachable = True
                    node.error = str(exc)
                    continue
                targets = [
                    li
                    for _, n in walk(entity)
                    if isinstance(n, Entity)
                    for li in n.lineage
                ]
                for li in sorted(targets, key=ProviderInfo.sort_key):
                    target = node_key(li)
                    if target == key:
                        continue
                    if target not in graph.nodes:
                        graph.nodes[target] = LineageNode(li, depth + 1)
                        graph.edges.append((key, target))
                        next_frontier.append(target)
                    elif graph.nodes[target].depth > node.depth and (key, target) not in graph.edges:
                        graph.edges.append((key, target))
            frontier = next_frontier
            depth += 1
        return graph


def obtain_url(record: RegistryRecord, pi: ProviderInfo) -> str | None:
    """The obtain request URL for an entity, when the provider supports one."""
    if not record.obtain_base:
        return None
    url = (
        f"{record.obtain_base}?url_ver={OPENURL_VERSION}"
        f"&rft_id={quote(pi.preferred_identifier, safe='')}"
        f"&svc_id={quote(SVC_SURROGATE, safe='')}"
    )
    if pi.version_key:
        url += f"&res_key={quote(pi.version_key, safe='')}"
    return url


Resolver = Callable[[str], RegistryRecord | None]


def registry_resolver(client: FederationClient) -> Resolver:
    def resolve(provider: str) -> RegistryRecord | None:
        try:
            return client.lookup(provider)
        except FederationError:
            return None

    return resolve
