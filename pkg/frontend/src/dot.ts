/** Client-side DOT rendering of a surrogate graph for the receipt view. */

import { DatastreamNode, EntityNode, entityUri } from "./surrogate.js";

function q(value: string): string {
  return '"' + value.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
}

function label(lines: string[]): string {
  return '"' + lines.map((l) => l.replace(/\\/g, "\\\\").replace(/"/g, "'")).join("\\n") + '"';
}

export function toDot(entity: EntityNode): string {
  const lines = ["digraph surrogate {", "  rankdir=LR;", "  node [fontsize=10];"];
  const declared = new Set<string>();
  const edges: string[] = [];

  function freshId(base: string): string {
    let id = base;
    while (declared.has(id)) id += "+";
    declared.add(id);
    return id;
  }

  function declareEntity(node: EntityNode, path: string): string {
    const base = node.providerInfo ? entityUri(node.providerInfo) : `node:${path}`;
    const id = freshId(base);
    const text = [];
    if (node.semantic) text.push(node.semantic.split("/").pop() ?? node.semantic);
    if (node.providerInfo) {
      text.push(node.providerInfo.preferredIdentifier, node.providerInfo.provider);
    }
    if (text.length === 0) text.push("(anonymous entity)");
    lines.push(`  ${q(id)} [shape=box, label=${label(text)}];`);
    return id;
  }

  function declareDatastream(ds: DatastreamNode): string {
    const id = freshId(ds.location);
    lines.push(
      `  ${q(id)} [shape=ellipse, label=${label([ds.format.split("/").pop() ?? ds.format, ds.location])}];`,
    );
    return id;
  }

  const lineageTargets = new Map<string, string>();

  function visit(node: EntityNode, path: string): string {
    const id = declareEntity(node, path);
    node.children.forEach((child, i) => {
      const childId = visit(child, `${path}.children[${i}]`);
      edges.push(`  ${q(id)} -> ${q(childId)} [label="hasEntity"];`);
    });
    node.datastreams.forEach((ds) => {
      const dsId = declareDatastream(ds);
      edges.push(`  ${q(id)} -> ${q(dsId)} [label="hasDatastream"];`);
    });
    for (const li of node.lineage) {
      const uri = entityUri(li);
      let targetId = lineageTargets.get(uri);
      if (targetId == null && declared.has(uri)) targetId = uri;
      if (targetId == null) {
        targetId = freshId(uri);
        lineageTargets.set(uri, targetId);
        lines.push(
          `  ${q(targetId)} [shape=box, style=dashed, label=${label([li.preferredIdentifier, li.provider])}];`,
        );
      }
      edges.push(`  ${q(id)} -> ${q(targetId)} [label="hasLineage", style=dashed];`);
    }
    return id;
  }

  visit(entity, "root");
  lines.push(...edges, "}");
  return lines.join("\n") + "\n";
}
