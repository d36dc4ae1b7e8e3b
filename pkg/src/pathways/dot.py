"""Graphviz DOT export of surrogate graphs.

Entities render as boxes, datastreams as ellipses; edges carry hasEntity,
hasDatastream and hasLineage labels. Entity nodes link to obtain requests and
nodes carry vocabulary links into the registry, so a rendered image doubles
as a navigation surface. Output is byte-stable for identical input.
"""

from __future__ import annotations

from urllib.parse import quote

from .client import LineageGraph, Resolver, obtain_url
from .model import Datastream, Entity, ProviderInfo, entity_uri, walk


def _quote_dot(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _label(lines: list[str]) -> str:
    escaped = [line.replace("\\", "\\\\").replace('"', "'") for line in lines]
    return '"' + "\\n".join(escaped) + '"'


def _tail(uri: str) -> str:
    return uri.rstrip("/").rsplit("/", 1)[-1]


def _vocab_url(registry_base: str | None, kind: str, uri: str) -> str | None:
    if not registry_base:
        return None
    return f"{registry_base}/vocab/{kind}?uri={quote(uri, safe='')}"


def to_dot(
    entity: Entity,
    lineage: LineageGraph | None = None,
    resolver: Resolver | None = None,
    registry_base: str | None = None,
) -> str:
    """Render one surrogate graph (and optionally a traced lineage DAG)."""
    lines = [
        "digraph surrogate {",
        "  rankdir=LR;",
        '  node [fontsize=10, fontname="Helvetica"];',
    ]
    node_ids: dict[str, str] = {}  # path -> dot node id
    declared: set[str] = set()

    def entity_node_id(node: Entity, path: str) -> str:
        if node.provider_info is not None:
            return entity_uri(node.provider_info)
        return "node:" + path

    def declare_entity(node_id: str, pi: ProviderInfo | None, semantic: str | None, *, stub: bool) -> None:
        if node_id in declared:
            return
        declared.add(node_id)
        label_lines = []
        if semantic:
            label_lines.append(_tail(semantic))
        if pi is not None:
            label_lines.append(pi.preferred_identifier)
            label_lines.append(pi.provider)
        if not label_lines:
            label_lines.append("(anonymous entity)")
        attrs = [f"shape=box, label={_label(label_lines)}"]
        if stub:
            attrs.append("style=dashed")
        if pi is not None and resolver is not None:
            record = resolver(pi.provider)
            if record is not None:
                url = obtain_url(record, pi)
                if url:
                    attrs.append(f"URL={_quote_dot(url)}")
        if semantic:
            vocab = _vocab_url(registry_base, "semantic", semantic)
            if vocab:
                attrs.append(f"tooltip={_quote_dot(vocab)}")
        lines.append(f"  {_quote_dot(node_id)} [{', '.join(attrs)}];")

    def declare_datastream(node_id: str, ds: Datastream) -> None:
        declared.add(node_id)
        attrs = [f"shape=ellipse, label={_label([_tail(ds.format), ds.location])}"]
        vocab = _vocab_url(registry_base, "format", ds.format)
        attrs.append(f"URL={_quote_dot(vocab if vocab else ds.location)}")
        attrs.append(f"tooltip={_quote_dot(ds.location)}")
        lines.append(f"  {_quote_dot(node_id)} [{', '.join(attrs)}];")

    # nodes in walk order; repeated identities get a suffix so that every
    # tree occurrence renders as its own node
    for path, node in walk(entity):
        if isinstance(node, Entity):
            node_id = entity_node_id(node, path)
            while node_id in declared:
                node_id += "+"
            node_ids[path] = node_id
            declare_entity(node_id, node.provider_info, node.semantic, stub=False)
        else:
            node_id = node.location
            while node_id in declared:
                node_id += "+"
            node_ids[path] = node_id
            declare_datastream(node_id, node)

    edges: list[str] = []
    seen_edges: set[tuple[str, str, str]] = set()

    def edge(src: str, dst: str, label: str, dashed: bool = False) -> None:
        if (src, dst, label) in seen_edges:
            return
        seen_edges.add((src, dst, label))
        style = ", style=dashed" if dashed else ""
        edges.append(f"  {_quote_dot(src)} -> {_quote_dot(dst)} [label={_quote_dot(label)}{style}];")

    # containment / datastream / lineage edges, in walk order
    for path, node in walk(entity):
        if not isinstance(node, Entity):
            continue
        src = node_ids[path]
        for i in range(len(node.children)):
            edge(src, node_ids[f"{path}.children[{i}]"], "hasEntity")
        for i in range(len(node.datastreams)):
            edge(src, node_ids[f"{path}.datastreams[{i}]"], "hasDatastream")
        for li in node.lineage:
            target_id = entity_uri(li)
            declare_entity(target_id, li, None, stub=True)
            edge(src, target_id, "hasLineage", dashed=True)

    # traced lineage DAG, when provided
    if lineage is not None:
        key_ids = {}
        for key in sorted(lineage.nodes):
            node = lineage.nodes[key]
            node_id = entity_uri(node.provider_info)
            key_ids[key] = node_id
            declare_entity(node_id, node.provider_info, None, stub=True)
            if node.unreachable:
                lines.append(f"  {_quote_dot(node_id)} [color=red];")
        for src_key, dst_key in lineage.edges:
            edge(key_ids[src_key], key_ids[dst_key], "hasLineage", dashed=True)

    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
