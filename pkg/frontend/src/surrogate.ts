/**
 * Browser-side reading and writing of surrogate documents (the RDF/XML
 * profile served by the repository obtain/harvest interfaces).
 */

export const CORE_NS = "info:pathways/core#";
export const RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";

export interface ProviderInfo {
  provider: string;
  preferredIdentifier: string;
  versionKey?: string;
}

export interface DatastreamNode {
  format: string;
  location: string;
}

export interface EntityNode {
  identifiers: string[];
  providerInfo?: ProviderInfo;
  semantic?: string;
  persistence?: string;
  lineage: ProviderInfo[];
  children: EntityNode[];
  datastreams: DatastreamNode[];
}

export class SurrogateError extends Error {}

function childrenNS(el: Element, ns: string, local: string): Element[] {
  const out: Element[] = [];
  for (let i = 0; i < el.children.length; i++) {
    const child = el.children[i];
    if (child.namespaceURI === ns && child.localName === local) {
      out.push(child);
    }
  }
  return out;
}

function readProviderInfo(wrapper: Element, what: string): ProviderInfo {
  const infos = childrenNS(wrapper, CORE_NS, "providerInfo");
  if (infos.length !== 1) {
    throw new SurrogateError(`${what} must contain exactly one providerInfo`);
  }
  const info = infos[0];
  const provider = childrenNS(info, CORE_NS, "provider")[0]?.textContent;
  const preferred = childrenNS(info, CORE_NS, "preferredIdentifier")[0]?.textContent;
  if (provider == null || preferred == null) {
    throw new SurrogateError(`${what} is missing provider or preferredIdentifier`);
  }
  const versionKey = childrenNS(info, CORE_NS, "versionKey")[0]?.textContent ?? undefined;
  return { provider, preferredIdentifier: preferred, versionKey };
}

function readEntity(el: Element): EntityNode {
  const entity: EntityNode = {
    identifiers: [],
    lineage: [],
    children: [],
    datastreams: [],
  };
  for (let i = 0; i < el.children.length; i++) {
    const child = el.children[i];
    if (child.namespaceURI !== CORE_NS) continue; // foreign elements ignored
    switch (child.localName) {
      case "hasIdentifier":
        entity.identifiers.push(child.textContent ?? "");
        break;
      case "hasSemantic":
        entity.semantic = child.getAttributeNS(RDF_NS, "resource") ?? undefined;
        break;
      case "hasProviderPersistence":
        entity.persistence = child.getAttributeNS(RDF_NS, "resource") ?? undefined;
        break;
      case "hasProviderInfo":
        entity.providerInfo = readProviderInfo(child, "hasProviderInfo");
        break;
      case "hasLineage":
        entity.lineage.push(readProviderInfo(child, "hasLineage"));
        break;
      case "hasEntity": {
        const nested = childrenNS(child, CORE_NS, "entity");
        if (nested.length !== 1) {
          throw new SurrogateError("hasEntity must contain exactly one entity");
        }
        entity.children.push(readEntity(nested[0]));
        break;
      }
      case "hasDatastream": {
        const ds = childrenNS(child, CORE_NS, "datastream");
        if (ds.length !== 1) {
          throw new SurrogateError("hasDatastream must contain exactly one datastream");
        }
        const format = childrenNS(ds[0], CORE_NS, "hasFormat")[0]?.getAttributeNS(RDF_NS, "resource");
        const location = childrenNS(ds[0], CORE_NS, "hasLocation")[0]?.textContent;
        if (format == null || location == null) {
          throw new SurrogateError("datastream is missing hasFormat or hasLocation");
        }
        entity.datastreams.push({ format, location });
        break;
      }
      default:
        throw new SurrogateError(`unknown element core:${child.localName}`);
    }
  }
  return entity;
}

export function parseSurrogate(text: string): EntityNode {
  let doc: Document;
  try {
    doc = new DOMParser().parseFromString(text, "text/xml");
  } catch (err) {
    throw new SurrogateError(`malformed XML: ${String(err)}`);
  }
  if (doc.getElementsByTagName("parsererror").length > 0) {
    throw new SurrogateError("malformed XML");
  }
  const root = doc.documentElement;
  if (root.namespaceURI !== RDF_NS || root.localName !== "RDF") {
    throw new SurrogateError("document root must be rdf:RDF");
  }
  const entities = childrenNS(root, CORE_NS, "entity");
  if (entities.length !== 1) {
    throw new SurrogateError(`expected exactly one top-level entity, found ${entities.length}`);
  }
  return readEntity(entities[0]);
}

export function escapeXml(value: string): string {
  return value.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function escapeAttr(value: string): string {
  return escapeXml(value).replace(/"/g, "&quot;");
}

const UNRESERVED = /[A-Za-z0-9.\-_~]/;

/** Percent-encode with the RFC 3986 unreserved set (matches the server). */
export function pctEncode(value: string): string {
  let out = "";
  const bytes = new TextEncoder().encode(value);
  for (const byte of bytes) {
    const ch = String.fromCharCode(byte);
    out += byte < 0x80 && UNRESERVED.test(ch) ? ch : "%" + byte.toString(16).toUpperCase().padStart(2, "0");
  }
  return out;
}

export function entityUri(pi: ProviderInfo): string {
  return `info:pathways/entity/${pctEncode(pi.provider)}/${pctEncode(pi.preferredIdentifier)}`;
}

function providerInfoXml(pi: ProviderInfo, indent: string): string[] {
  const lines = [
    `${indent}<core:providerInfo>`,
    `${indent}  <core:preferredIdentifier>${escapeXml(pi.preferredIdentifier)}</core:preferredIdentifier>`,
    `${indent}  <core:provider>${escapeXml(pi.provider)}</core:provider>`,
  ];
  if (pi.versionKey != null) {
    lines.push(`${indent}  <core:versionKey>${escapeXml(pi.versionKey)}</core:versionKey>`);
  }
  lines.push(`${indent}</core:providerInfo>`);
  return lines;
}

export interface IssueSpec {
  draftId: string;
  editorProvider: string;
  articles: ProviderInfo[]; // document order = submission order
}

/**
 * Serialize an overlay-journal issue: a journal-issue root whose children
 * are providerInfo stubs carrying lineage preset to their sources.
 */
export function buildIssueDocument(issue: IssueSpec): string {
  const rootPi: ProviderInfo = {
    provider: issue.editorProvider,
    preferredIdentifier: issue.draftId,
  };
  const lines = [
    '<?xml version="1.0" encoding="UTF-8"?>',
    `<rdf:RDF xmlns:core="${CORE_NS}" xmlns:rdf="${RDF_NS}">`,
    `  <core:entity rdf:about="${escapeAttr(entityUri(rootPi))}">`,
    '    <core:hasSemantic rdf:resource="info:pathways/semantic/journal-issue"/>',
    `    <core:hasIdentifier>${escapeXml(issue.draftId)}</core:hasIdentifier>`,
    "    <core:hasProviderInfo>",
    ...providerInfoXml(rootPi, "      "),
    "    </core:hasProviderInfo>",
  ];
  for (const pi of issue.articles) {
    lines.push("    <core:hasEntity>");
    lines.push(`      <core:entity rdf:about="${escapeAttr(entityUri(pi))}">`);
    lines.push("        <core:hasProviderInfo>");
    lines.push(...providerInfoXml(pi, "          "));
    lines.push("        </core:hasProviderInfo>");
    lines.push("        <core:hasLineage>");
    lines.push(...providerInfoXml(pi, "          "));
    lines.push("        </core:hasLineage>");
    lines.push("      </core:entity>");
    lines.push("    </core:hasEntity>");
  }
  lines.push("  </core:entity>");
  lines.push("</rdf:RDF>");
  return lines.join("\n") + "\n";
}
