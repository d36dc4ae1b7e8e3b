/**
 * Thin wrappers over the documented HTTP interfaces: UI config, search,
 * obtain, put and harvest. Nothing here talks to an endpoint the CLI
 * could not reach.
 */

export interface UiRepository {
  name: string;
  provider: string;
  obtainBase: string;
  harvestBase: string;
}

export interface UiConfig {
  registryBase: string;
  searchBase: string;
  putBase: string;
  putProvider: string;
  putToken: string | null;
  repositories: UiRepository[];
}

export interface SearchRow {
  score: number;
  provider: string;
  preferredIdentifier: string;
  snippet: string;
  flagged: boolean;
  surrogateUrl: string;
}

export interface ReceiptProviderInfo {
  provider: string;
  preferredIdentifier: string;
  versionKey: string | null;
}

export interface PutReceipt {
  root: ReceiptProviderInfo;
  mapping: { incoming: ReceiptProviderInfo; assigned: ReceiptProviderInfo }[];
  dereferenced: number;
  stored: number;
}

export class HttpError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function checkOk(response: Response): Promise<Response> {
  if (!response.ok) {
    const body = await response.text();
    throw new HttpError(response.status, body || response.statusText);
  }
  return response;
}

export async function loadConfig(base = ""): Promise<UiConfig> {
  const response = await checkOk(await fetch(`${base}/api/ui-config`));
  return (await response.json()) as UiConfig;
}

export async function searchArticles(config: UiConfig, query: string, limit = 20): Promise<SearchRow[]> {
  const url = `${config.searchBase}?q=${encodeURIComponent(query)}&limit=${limit}`;
  const response = await checkOk(await fetch(url));
  return (await response.json()) as SearchRow[];
}

export async function fetchSurrogateText(url: string): Promise<string> {
  const response = await checkOk(await fetch(url));
  return await response.text();
}

export function obtainUrl(obtainBase: string, preferredIdentifier: string): string {
  return (
    `${obtainBase}?url_ver=Z39.88-2004` +
    `&rft_id=${encodeURIComponent(preferredIdentifier)}` +
    `&svc_id=${encodeURIComponent("info:pathways/svc/surrogate")}`
  );
}

export async function submitIssue(
  config: UiConfig,
  document: string,
  token: string | null,
): Promise<PutReceipt> {
  const headers: Record<string, string> = { "Content-Type": "application/rdf+xml" };
  if (token) headers["Authorization"] = `Bearer ${token}`;
  const response = await fetch(`${config.putBase}/objects`, {
    method: "POST",
    headers,
    body: document,
  });
  if (response.status !== 201) {
    throw new HttpError(response.status, await response.text());
  }
  return (await response.json()) as PutReceipt;
}

export interface HarvestedItem {
  identifier: string;
  datestamp: string;
}

const OAI_NS = "http://www.openarchives.org/OAI/2.0/";

/** List a repository's item identifiers via its harvest interface. */
export async function listIdentifiers(harvestBase: string): Promise<HarvestedItem[]> {
  const items: HarvestedItem[] = [];
  let params = `verb=ListIdentifiers&metadataPrefix=pwc.rdf`;
  for (;;) {
    const response = await checkOk(await fetch(`${harvestBase}?${params}`));
    const doc = new DOMParser().parseFromString(await response.text(), "text/xml");
    const errors = doc.getElementsByTagNameNS(OAI_NS, "error");
    if (errors.length > 0) {
      if (errors[0].getAttribute("code") === "noRecordsMatch") return items;
      throw new HttpError(200, errors[0].textContent ?? "harvest error");
    }
    const headers = doc.getElementsByTagNameNS(OAI_NS, "header");
    for (let i = 0; i < headers.length; i++) {
      const identifier = headers[i].getElementsByTagNameNS(OAI_NS, "identifier")[0]?.textContent;
      const datestamp = headers[i].getElementsByTagNameNS(OAI_NS, "datestamp")[0]?.textContent;
      if (identifier && datestamp) items.push({ identifier, datestamp });
    }
    const tokens = doc.getElementsByTagNameNS(OAI_NS, "resumptionToken");
    const token = tokens.length > 0 ? tokens[0].textContent?.trim() : "";
    if (!token) return items;
    params = `verb=ListIdentifiers&resumptionToken=${encodeURIComponent(token)}`;
  }
}
