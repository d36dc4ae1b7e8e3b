/**
 * Editor console: search the federation or browse a repository, copy article
 * surrogates into the clipboard pane, paste them into a draft issue, reorder,
 * and submit the issue to the configured deposit endpoint.
 */

import {
  HttpError,
  PutReceipt,
  SearchRow,
  UiConfig,
  fetchSurrogateText,
  listIdentifiers,
  loadConfig,
  obtainUrl,
  searchArticles,
  submitIssue,
} from "./api.js";
import { toDot } from "./dot.js";
import { DraftIssue } from "./state.js";
import { SurrogateError, parseSurrogate } from "./surrogate.js";

const TEMPLATE = `
<div class="editor">
  <div id="error-banner" class="banner hidden">
    <span id="error-text"></span>
    <button id="error-retry">Retry</button>
  </div>

  <section class="pane">
    <h2>Search the federation</h2>
    <form id="search-form">
      <input id="search-input" type="text" placeholder="query, e.g. pigment" />
      <button id="search-button" type="submit">Search</button>
    </form>
    <ul id="search-results"></ul>
    <p id="search-empty" class="hidden">no matches</p>
  </section>

  <section class="pane">
    <h2>Browse a repository</h2>
    <select id="browse-select"></select>
    <button id="browse-button" type="button">List objects</button>
    <ul id="browse-results"></ul>
  </section>

  <section class="pane">
    <h2>Clipboard</h2>
    <textarea id="clipboard-pane" rows="6" readonly placeholder="copied surrogates appear here"></textarea>
    <p id="clipboard-info"></p>
  </section>

  <section class="pane">
    <h2>Draft issue</h2>
    <textarea id="paste-area" rows="6" placeholder="paste a surrogate document here"></textarea>
    <button id="add-button" type="button">Add to draft</button>
    <button id="paste-from-clipboard" type="button">Paste from clipboard pane</button>
    <p id="paste-error" class="error hidden"></p>
    <ol id="draft-cards"></ol>
    <div>
      <label>Deposit token <input id="token-input" type="password" /></label>
      <button id="submit-button" type="button">Submit Issue</button>
    </div>
    <p id="submit-error" class="error hidden"></p>
  </section>

  <section class="pane hidden" id="receipt-pane">
    <h2>Receipt</h2>
    <p id="receipt-summary"></p>
    <table id="receipt-mapping"><thead><tr><th>incoming</th><th>assigned</th></tr></thead><tbody></tbody></table>
    <p><a id="issue-link" target="_blank">Obtain the new issue</a></p>
    <details><summary>Issue graph (DOT)</summary><pre id="issue-dot"></pre></details>
  </section>
</div>
`;

function el<T extends HTMLElement>(root: HTMLElement, selector: string): T {
  const found = root.querySelector(selector);
  if (!found) throw new Error(`missing element ${selector}`);
  return found as T;
}

export class EditorApp {
  readonly draft = new DraftIssue();
  config: UiConfig;
  lastResults: SearchRow[] = [];
  lastReceipt: PutReceipt | null = null;
  private root: HTMLElement;
  private retryAction: (() => Promise<void>) | null = null;

  constructor(root: HTMLElement, config: UiConfig) {
    this.root = root;
    this.config = config;
    root.innerHTML = TEMPLATE;

    el<HTMLFormElement>(root, "#search-form").addEventListener("submit", (event) => {
      event.preventDefault();
      void this.runSearch(el<HTMLInputElement>(root, "#search-input").value);
    });
    el<HTMLButtonElement>(root, "#browse-button").addEventListener("click", () => {
      void this.runBrowse(el<HTMLSelectElement>(root, "#browse-select").value);
    });
    el<HTMLButtonElement>(root, "#add-button").addEventListener("click", () => {
      this.pasteIntoDraft(el<HTMLTextAreaElement>(root, "#paste-area").value);
    });
    el<HTMLButtonElement>(root, "#paste-from-clipboard").addEventListener("click", () => {
      el<HTMLTextAreaElement>(root, "#paste-area").value = el<HTMLTextAreaElement>(
        root,
        "#clipboard-pane",
      ).value;
    });
    el<HTMLButtonElement>(root, "#submit-button").addEventListener("click", () => {
      void this.submit();
    });
    el<HTMLButtonElement>(root, "#error-retry").addEventListener("click", () => {
      void this.retry();
    });

    const select = el<HTMLSelectElement>(root, "#browse-select");
    for (const repo of config.repositories) {
      const option = document.createElement("option");
      option.value = repo.name;
      option.textContent = `${repo.name} (${repo.provider})`;
      select.appendChild(option);
    }
    el<HTMLInputElement>(root, "#token-input").value = config.putToken ?? "";
  }

  // -- error banner --------------------------------------------------------

  private showError(message: string, retry: (() => Promise<void>) | null): void {
    el(this.root, "#error-banner").classList.remove("hidden");
    el(this.root, "#error-text").textContent = message;
    this.retryAction = retry;
  }

  private clearError(): void {
    el(this.root, "#error-banner").classList.add("hidden");
    this.retryAction = null;
  }

  async retry(): Promise<void> {
    const action = this.retryAction;
    this.clearError();
    if (action) await action();
  }

  // -- search view -----------------------------------------------------------

  async runSearch(query: string): Promise<void> {
    this.clearError();
    let rows: SearchRow[];
    try {
      rows = await searchArticles(this.config, query);
    } catch (err) {
      this.showError(`search service unreachable: ${String(err)}`, () => this.runSearch(query));
      return;
    }
    this.lastResults = rows;
    const list = el<HTMLUListElement>(this.root, "#search-results");
    list.innerHTML = "";
    el(this.root, "#search-empty").classList.toggle("hidden", rows.length > 0);
    rows.forEach((row, i) => {
      const item = document.createElement("li");
      item.innerHTML =
        `<span class="result-id"></span> <span class="result-snippet"></span> ` +
        `<button class="copy-btn" data-index="${i}">Copy surrogate</button>`;
      (item.querySelector(".result-id") as HTMLElement).textContent = row.preferredIdentifier;
      (item.querySelector(".result-snippet") as HTMLElement).textContent = row.snippet;
      (item.querySelector(".copy-btn") as HTMLButtonElement).addEventListener("click", () => {
        void this.copyResult(i);
      });
      list.appendChild(item);
    });
  }

  /** Fetch a search result's cached surrogate into the clipboard pane. */
  async copyResult(index: number): Promise<string> {
    const row = this.lastResults[index];
    const text = await fetchSurrogateText(row.surrogateUrl);
    this.setClipboard(text, row.preferredIdentifier);
    return text;
  }

  // -- browse view -----------------------------------------------------------

  async runBrowse(repoName: string): Promise<void> {
    this.clearError();
    const repo = this.config.repositories.find((r) => r.name === repoName);
    if (!repo) return;
    let items;
    try {
      items = await listIdentifiers(repo.harvestBase);
    } catch (err) {
      this.showError(`repository unreachable: ${String(err)}`, () => this.runBrowse(repoName));
      return;
    }
    const list = el<HTMLUListElement>(this.root, "#browse-results");
    list.innerHTML = "";
    items.forEach((item) => {
      const li = document.createElement("li");
      li.innerHTML =
        `<span class="browse-id"></span> <span class="browse-date"></span> ` +
        `<button class="copy-btn">Copy surrogate</button>`;
      (li.querySelector(".browse-id") as HTMLElement).textContent = item.identifier;
      (li.querySelector(".browse-date") as HTMLElement).textContent = item.datestamp;
      (li.querySelector(".copy-btn") as HTMLButtonElement).addEventListener("click", () => {
        void this.copyFromRepository(repo.obtainBase, item.identifier);
      });
      list.appendChild(li);
    });
  }

  async copyFromRepository(obtainBase: string, identifier: string): Promise<string> {
    const text = await fetchSurrogateText(obtainUrl(obtainBase, identifier));
    this.setClipboard(text, identifier);
    return text;
  }

  private setClipboard(text: string, what: string): void {
    el<HTMLTextAreaElement>(this.root, "#clipboard-pane").value = text;
    const entity = parseSurrogate(text);
    el(this.root, "#clipboard-info").textContent = entity.providerInfo
      ? `${what} from ${entity.providerInfo.provider}`
      : what;
    const clipboard = (globalThis.navigator as Navigator | undefined)?.clipboard;
    if (clipboard?.writeText) {
      clipboard.writeText(text).catch(() => undefined); // best effort
    }
  }

  // -- composer ---------------------------------------------------------------

  /** Returns true when the paste was accepted; the draft is untouched otherwise. */
  pasteIntoDraft(text: string): boolean {
    const error = el(this.root, "#paste-error");
    error.classList.add("hidden");
    try {
      this.draft.addFromSurrogate(text);
    } catch (err) {
      if (err instanceof SurrogateError) {
        error.textContent = `rejected: ${err.message}`;
        error.classList.remove("hidden");
        return false;
      }
      throw err;
    }
    el<HTMLTextAreaElement>(this.root, "#paste-area").value = "";
    this.renderDraft();
    return true;
  }

  moveCard(index: number, delta: -1 | 1): void {
    if (this.draft.move(index, delta)) this.renderDraft();
  }

  removeCard(index: number): void {
    this.draft.remove(index);
    this.renderDraft();
  }

  renderDraft(): void {
    const list = el<HTMLOListElement>(this.root, "#draft-cards");
    list.innerHTML = "";
    this.draft.articles.forEach((card, i) => {
      const li = document.createElement("li");
      li.className = "card";
      li.innerHTML =
        `<span class="card-label"></span> <span class="card-source"></span> ` +
        `<button class="move-up">up</button><button class="move-down">down</button>` +
        `<button class="remove">remove</button>`;
      (li.querySelector(".card-label") as HTMLElement).textContent = card.label;
      (li.querySelector(".card-source") as HTMLElement).textContent = card.sourceProvider;
      (li.querySelector(".move-up") as HTMLButtonElement).addEventListener("click", () =>
        this.moveCard(i, -1),
      );
      (li.querySelector(".move-down") as HTMLButtonElement).addEventListener("click", () =>
        this.moveCard(i, 1),
      );
      (li.querySelector(".remove") as HTMLButtonElement).addEventListener("click", () =>
        this.removeCard(i),
      );
      list.appendChild(li);
    });
  }

  // -- submission ---------------------------------------------------------------

  async submit(): Promise<PutReceipt | null> {
    const errorEl = el(this.root, "#submit-error");
    errorEl.classList.add("hidden");
    const token = el<HTMLInputElement>(this.root, "#token-input").value || null;
    const document_ = this.draft.buildDocument();
    let receipt: PutReceipt;
    try {
      receipt = await submitIssue(this.config, document_, token);
    } catch (err) {
      if (err instanceof HttpError && err.status === 401) {
        errorEl.textContent = "deposit denied: enter a valid token and retry";
      } else if (err instanceof HttpError && err.status === 409) {
        errorEl.textContent = `duplicate: the target repository's policy rejected this issue (${err.message})`;
      } else {
        errorEl.textContent = `submission failed, draft retained: ${String(err)}`;
      }
      errorEl.classList.remove("hidden");
      return null; // draft retained
    }
    this.lastReceipt = receipt;
    await this.renderReceipt(receipt);
    this.draft.clear();
    this.renderDraft();
    return receipt;
  }

  private async renderReceipt(receipt: PutReceipt): Promise<void> {
    const pane = el(this.root, "#receipt-pane");
    pane.classList.remove("hidden");
    el(this.root, "#receipt-summary").textContent =
      `${receipt.stored} objects created in ${receipt.root.provider}`;
    const tbody = el(this.root, "#receipt-mapping tbody");
    tbody.innerHTML = "";
    for (const pair of receipt.mapping) {
      const tr = document.createElement("tr");
      const incoming = document.createElement("td");
      incoming.textContent = pair.incoming.preferredIdentifier;
      const assigned = document.createElement("td");
      assigned.textContent = pair.assigned.preferredIdentifier;
      tr.append(incoming, assigned);
      tbody.appendChild(tr);
    }
    const repo = this.config.repositories.find((r) => r.provider === receipt.root.provider);
    if (repo) {
      const link = el<HTMLAnchorElement>(this.root, "#issue-link");
      const url = obtainUrl(repo.obtainBase, receipt.root.preferredIdentifier);
      link.href = url;
      try {
        const entity = parseSurrogate(await fetchSurrogateText(url));
        el(this.root, "#issue-dot").textContent = toDot(entity);
      } catch {
        el(this.root, "#issue-dot").textContent = "(issue graph unavailable)";
      }
    }
  }
}

export async function initApp(root: HTMLElement, base = ""): Promise<EditorApp> {
  const config = await loadConfig(base);
  return new EditorApp(root, config);
}
