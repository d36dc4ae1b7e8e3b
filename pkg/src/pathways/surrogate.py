"""Serialization of entity trees as a constrained RDF/XML profile.

The writer emits a fixed element order with two-space indentation and LF line
endings so that output is byte-reproducible; the parser accepts any child
order and is insensitive to inter-element whitespace. Only the ``core`` and
``rdf`` namespaces are interpreted: unknown core-namespace elements are a
schema error, foreign-namespace elements are skipped with a warning.
"""

from __future__ import annotations

import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .model import (
    CORE_NS,
    RDF_NS,
    Datastream,
    Entity,
    ProviderInfo,
    Violation,
    entity_uri,
    validate,
)

logger = logging.getLogger(__name__)

MEDIA_TYPE = "application/rdf+xml"
FILE_SUFFIX = ".pwc.rdf"

_XML_DECL = '<?xml version="1.0" encoding="UTF-8"?>'
_RDF_OPEN = f'<rdf:RDF xmlns:core="{CORE_NS}" xmlns:rdf="{RDF_NS}">'

_RESOURCE_ATTR = f"{{{RDF_NS}}}resource"


class CodecError(Exception):
    """Base class for serialization and parsing failures."""


class ValidationFailed(CodecError):
    """The entity violates model invariants; carries the full report."""

    def __init__(self, report: list[Violation]):
        self.report = report
        super().__init__("; ".join(str(v) for v in report))


class ParseError(CodecError):
    """The document is not well-formed XML."""

    def __init__(self, message: str, position: tuple[int, int] | None = None):
        self.position = position
        if position:
            message = f"{message} (line {position[0]}, column {position[1]})"
        super().__init__(message)


class SchemaError(CodecError):
    """Well-formed XML that does not fit the surrogate profile."""

    def __init__(self, message: str, path: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class SurrogateDocument:
    """A serialized surrogate: UTF-8 XML bytes plus the root entity URI."""

    data: bytes
    root_entity_uri: str

    @property
    def text(self) -> str:
        return self.data.decode("utf-8")


def serialize(entity: Entity) -> SurrogateDocument:
    """Serialize an entity tree rooted at an addressable entity.

    Per entity the child elements come in a fixed order: hasSemantic,
    hasIdentifier, hasProviderPersistence, hasProviderInfo, hasLineage,
    hasEntity blocks, then hasDatastream blocks.
    """
    report = validate(entity)
    if entity.provider_info is None:
        report = report + [Violation("root", "root entity has no providerInfo")]
    if report:
        raise ValidationFailed(report)

    lines = [_XML_DECL, _RDF_OPEN]
    _write_entity(entity, 1, lines)
    lines.append("</rdf:RDF>")
    data = ("\n".join(lines) + "\n").encode("utf-8")
    return SurrogateDocument(data=data, root_entity_uri=entity_uri(entity.provider_info))


def _write_entity(entity: Entity, depth: int, lines: list[str]) -> None:
    ind = "  " * depth
    sub = ind + "  "
    if entity.provider_info is not None:
        lines.append(f"{ind}<core:entity rdf:about={quoteattr(entity_uri(entity.provider_info))}>")
    else:
        lines.append(f"{ind}<core:entity>")
    if entity.semantic is not None:
        lines.append(f"{sub}<core:hasSemantic rdf:resource={quoteattr(entity.semantic)}/>")
    for ident in entity.identifiers:
        lines.append(f"{sub}<core:hasIdentifier>{escape(ident)}</core:hasIdentifier>")
    if entity.persistence is not None:
        lines.append(f"{sub}<core:hasProviderPersistence rdf:resource={quoteattr(entity.persistence)}/>")
    if entity.provider_info is not None:
        lines.append(f"{sub}<core:hasProviderInfo>")
        _write_provider_info(entity.provider_info, depth + 2, lines)
        lines.append(f"{sub}</core:hasProviderInfo>")
    for li in entity.lineage:
        lines.append(f"{sub}<core:hasLineage>")
        _write_provider_info(li, depth + 2, lines)
        lines.append(f"{sub}</core:hasLineage>")
    for child in entity.children:
        lines.append(f"{sub}<core:hasEntity>")
        _write_entity(child, depth + 2, lines)
        lines.append(f"{sub}</core:hasEntity>")
    for ds in entity.datastreams:
        lines.append(f"{sub}<core:hasDatastream>")
        lines.append(f"{sub}  <core:datastream>")
        lines.append(f"{sub}    <core:hasFormat rdf:resource={quoteattr(ds.format)}/>")
        lines.append(f"{sub}    <core:hasLocation>{escape(ds.location)}</core:hasLocation>")
        lines.append(f"{sub}  </core:datastream>")
        lines.append(f"{sub}</core:hasDatastream>")
    lines.append(f"{ind}</core:entity>")


def _write_provider_info(pi: ProviderInfo, depth: int, lines: list[str]) -> None:
    ind = "  " * depth
    lines.append(f"{ind}<core:providerInfo>")
    lines.append(f"{ind}  <core:preferredIdentifier>{escape(pi.preferred_identifier)}</core:preferredIdentifier>")
    lines.append(f"{ind}  <core:provider>{escape(pi.provider)}</core:provider>")
    if pi.version_key is not None:
        lines.append(f"{ind}  <core:versionKey>{escape(pi.version_key)}</core:versionKey>")
    lines.append(f"{ind}</core:providerInfo>")


def parse(doc: bytes | str) -> Entity:
    """Parse a surrogate document back into an entity tree."""
    if isinstance(doc, str):
        doc = doc.encode("utf-8")
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        raise ParseError(str(exc), getattr(exc, "position", None)) from None
    if root.tag != f"{{{RDF_NS}}}RDF":
        raise SchemaError(f"document root is {root.tag}, expected rdf:RDF", "/")
    return parse_rdf_element(root)


def parse_rdf_element(root: ET.Element) -> Entity:
    """Parse an already-extracted rdf:RDF element (e.g. from a harvest record)."""
    entities = []
    for el in root:
        tag = el.tag
        if tag == f"{{{CORE_NS}}}entity":
            entities.append(el)
        elif tag.startswith(f"{{{CORE_NS}}}") or tag.startswith(f"{{{RDF_NS}}}"):
            raise SchemaError(f"unexpected element {_local(tag)}", "/rdf:RDF")
        else:
            logger.warning("ignoring foreign element %s at top level", tag)
    if len(entities) != 1:
        raise SchemaError(f"expected exactly one top-level core:entity, found {len(entities)}", "/rdf:RDF")
    return _read_entity(entities[0], "/rdf:RDF/core:entity")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _core(name: str) -> str:
    return f"{{{CORE_NS}}}{name}"


def _read_entity(el: ET.Element, path: str) -> Entity:
    entity = Entity()
    n_children = 0
    seen_once: set[str] = set()
    for child in el:
        tag = child.tag
        if not tag.startswith(f"{{{CORE_NS}}}"):
            if tag.startswith(f"{{{RDF_NS}}}"):
                raise SchemaError(f"unexpected element {_local(tag)}", path)
            logger.warning("ignoring foreign element %s under %s", tag, path)
            continue
        name = _local(tag)
        if name in ("hasSemantic", "hasProviderPersistence", "hasProviderInfo"):
            if name in seen_once:
                raise SchemaError(f"repeated {name}", path)
            seen_once.add(name)
        if name == "hasSemantic":
            entity.semantic = _resource(child, path + "/core:hasSemantic")
        elif name == "hasIdentifier":
            entity.identifiers.append(child.text or "")
        elif name == "hasProviderPersistence":
            entity.persistence = _resource(child, path + "/core:hasProviderPersistence")
        elif name == "hasProviderInfo":
            entity.provider_info = _read_provider_info(child, path + "/core:hasProviderInfo")
        elif name == "hasLineage":
            entity.lineage.append(_read_provider_info(child, path + "/core:hasLineage"))
        elif name == "hasEntity":
            n_children += 1
            sub = _single(child, "entity", f"{path}/core:hasEntity[{n_children}]")
            entity.children.append(_read_entity(sub, f"{path}/core:hasEntity[{n_children}]/core:entity"))
        elif name == "hasDatastream":
            entity.datastreams.append(_read_datastream(child, path + "/core:hasDatastream"))
        else:
            raise SchemaError(f"unknown element core:{name}", path)
    return entity


def _resource(el: ET.Element, path: str) -> str:
    value = el.get(_RESOURCE_ATTR)
    if value is None:
        raise SchemaError("missing rdf:resource attribute", path)
    return value


def _single(el: ET.Element, name: str, path: str) -> ET.Element:
    matches = [c for c in el if c.tag == _core(name)]
    if len(matches) != 1:
        raise SchemaError(f"expected exactly one core:{name}, found {len(matches)}", path)
    return matches[0]


def _read_provider_info(wrapper: ET.Element, path: str) -> ProviderInfo:
    pi = _single(wrapper, "providerInfo", path)
    path += "/core:providerInfo"
    provider = None
    preferred = None
    version_key = None
    for child in pi:
        name = _local(child.tag)
        if child.tag == _core("provider"):
            provider = child.text or ""
        elif child.tag == _core("preferredIdentifier"):
            preferred = child.text or ""
        elif child.tag == _core("versionKey"):
            version_key = child.text or ""
        else:
            raise SchemaError(f"unknown element {name} in providerInfo", path)
    if provider is None:
        raise SchemaError("providerInfo without provider", path)
    if preferred is None:
        raise SchemaError("providerInfo without preferredIdentifier", path)
    return ProviderInfo(provider=provider, preferred_identifier=preferred, version_key=version_key)


def _read_datastream(wrapper: ET.Element, path: str) -> Datastream:
    ds = _single(wrapper, "datastream", path)
    path += "/core:datastream"
    fmt = None
    location = None
    for child in ds:
        if child.tag == _core("hasFormat"):
            fmt = _resource(child, path + "/core:hasFormat")
        elif child.tag == _core("hasLocation"):
            location = child.text or ""
        else:
            raise SchemaError(f"unknown element {_local(child.tag)} in datastream", path)
    if fmt is None:
        raise SchemaError("datastream without hasFormat", path)
    if location is None:
        raise SchemaError("datastream without hasLocation", path)
    return Datastream(format=fmt, location=location)
