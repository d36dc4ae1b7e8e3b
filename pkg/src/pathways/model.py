"""In-memory digital-object model: abstract entities with concrete datastreams.

An entity tree carries identity (identifiers, provider info), semantics,
persistence, lineage back-links, nested child entities and datastream leaves.
Instances are treated as immutable values after construction; the validator
exists precisely because nothing in Python stops a caller from wiring up a
broken graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterator, Union
from urllib.parse import quote

CORE_NS = "info:pathways/core#"
RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

ENTITY_URI_PREFIX = "info:pathways/entity/"

PERSISTENCE_PERSISTENT = "info:pathways/persistence/persistent"
PERSISTENCE_TRANSIENT = "info:pathways/persistence/transient"
PERSISTENCE_VALUES = (PERSISTENCE_PERSISTENT, PERSISTENCE_TRANSIENT)

# URI-valued properties carried in XML attributes must at least look like a URI.
_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:\S+$")
_CONTROL_RE = re.compile(r"[\x00-\x1f\x7f]")


class ModelError(ValueError):
    """Raised when an operation's precondition on the model is violated."""


@dataclass(frozen=True)
class ProviderInfo:
    """Repository-scoped object key: (provider, preferredIdentifier, versionKey).

    ``provider`` identifies the repository, ``preferredIdentifier`` the object
    within it. An absent ``version_key`` means "current version".
    """

    provider: str
    preferred_identifier: str
    version_key: str | None = None

    def sort_key(self) -> tuple[str, str, str]:
        return (self.provider, self.preferred_identifier, self.version_key or "")


@dataclass(frozen=True)
class Datastream:
    """Concrete leaf: a format identifier plus a dereferenceable location URL."""

    format: str
    location: str


@dataclass
class Entity:
    """Abstract node of the object graph.

    ``children`` and ``datastreams`` are ordered and that order is significant;
    ``identifiers`` and ``lineage`` are unordered sets stored as lists. Treat
    instances as immutable once built.
    """

    identifiers: list[str] = field(default_factory=list)
    provider_info: ProviderInfo | None = None
    semantic: str | None = None
    persistence: str | None = None
    lineage: list[ProviderInfo] = field(default_factory=list)
    children: list[Entity] = field(default_factory=list)
    datastreams: list[Datastream] = field(default_factory=list)


@dataclass
class DigitalObject:
    """A stored object: the current root entity plus store metadata.

    ``datestamp`` is the UTC creation/last-modification instant at second
    granularity and never decreases across modifications. ``versions`` lists
    every retained (version_key, root) pair in storage order when the owning
    repository versions its objects.
    """

    root: Entity
    datestamp: datetime
    versions: list[tuple[str, Entity]] = field(default_factory=list)


@dataclass(frozen=True)
class Violation:
    """One invariant violation, pointing at the offending node."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


Node = Union[Entity, Datastream]


def _check_text(value: str, what: str, path: str, out: list[Violation]) -> None:
    if not value:
        out.append(Violation(path, f"empty {what}"))
    elif _CONTROL_RE.search(value):
        out.append(Violation(path, f"{what} contains control characters"))


def _check_uri(value: str, what: str, path: str, out: list[Violation]) -> None:
    if not _SCHEME_RE.match(value) or _CONTROL_RE.search(value):
        out.append(Violation(path, f"{what} is not a valid URI: {value!r}"))


def _validate_provider_info(pi: ProviderInfo, what: str, path: str, out: list[Violation]) -> None:
    _check_text(pi.provider, f"{what} provider", path, out)
    _check_text(pi.preferred_identifier, f"{what} preferredIdentifier", path, out)
    if pi.version_key is not None:
        _check_text(pi.version_key, f"{what} versionKey", path, out)


def validate(entity: Entity) -> list[Violation]:
    """Check every model invariant; an empty report means the entity is valid.

    Violations are data, not exceptions: the report lists each problem with a
    path such as ``root.children[1].datastreams[0]``.
    """
    report: list[Violation] = []
    seen: set[int] = set()

    def visit(node: Entity, path: str) -> None:
        if id(node) in seen:
            report.append(Violation(path, "containment cycle: entity appears more than once"))
            return
        seen.add(id(node))

        for i, ident in enumerate(node.identifiers):
            _check_text(ident, "identifier", f"{path}.identifiers[{i}]", report)
        if node.provider_info is not None:
            _validate_provider_info(node.provider_info, "providerInfo", path, report)
        if node.semantic is not None:
            _check_uri(node.semantic, "semantic", path, report)
        if node.persistence is not None and node.persistence not in PERSISTENCE_VALUES:
            report.append(Violation(path, f"unregistered persistence value: {node.persistence!r}"))
        for i, li in enumerate(node.lineage):
            _validate_provider_info(li, "lineage", f"{path}.lineage[{i}]", report)
        for i, ds in enumerate(node.datastreams):
            ds_path = f"{path}.datastreams[{i}]"
            _check_uri(ds.format, "format", ds_path, report)
            _check_uri(ds.location, "location", ds_path, report)
        for i, child in enumerate(node.children):
            visit(child, f"{path}.children[{i}]")

    visit(entity, "root")
    return report


def entity_uri(pi: ProviderInfo) -> str:
    """Mint the canonical URI for an entity from its provider info.

    Both components are percent-encoded with the RFC 3986 unreserved set
    (everything outside ``[A-Za-z0-9.-_~]`` is escaped, so ``:`` and ``/``
    become ``%3A`` and ``%2F``), keeping the ``/`` separator unambiguous.
    """
    if not pi.provider or not pi.preferred_identifier:
        raise ModelError("entity_uri requires a provider and a preferredIdentifier")
    return (
        ENTITY_URI_PREFIX
        + quote(pi.provider, safe="")
        + "/"
        + quote(pi.preferred_identifier, safe="")
    )


def walk(entity: Entity) -> Iterator[tuple[str, Node]]:
    """Depth-first pre-order walk over entities and datastreams.

    At each entity: the entity itself, then its children (recursively), then
    its own datastreams, all in stored order.
    """

    def visit(node: Entity, path: str) -> Iterator[tuple[str, Node]]:
        yield path, node
        for i, child in enumerate(node.children):
            yield from visit(child, f"{path}.children[{i}]")
        for i, ds in enumerate(node.datastreams):
            yield f"{path}.datastreams[{i}]", ds

    yield from visit(entity, "root")


def canonicalize(entity: Entity) -> Entity:
    """Normalized copy used for structural equality in tests and clients.

    Unordered properties (identifiers, lineage) are sorted; child and
    datastream order is meaningful and preserved.
    """
    return Entity(
        identifiers=sorted(entity.identifiers),
        provider_info=entity.provider_info,
        semantic=entity.semantic,
        persistence=entity.persistence,
        lineage=sorted(entity.lineage, key=ProviderInfo.sort_key),
        children=[canonicalize(c) for c in entity.children],
        datastreams=list(entity.datastreams),
    )
