/**
 * Scripted browser flow against a real deployment: search, copy three
 * surrogates, paste, reorder, submit, inspect the receipt, and confirm the
 * stored issue's child order matches the UI order. The server process is the
 * actual Python service, spawned here and seeded through its CLI.
 */

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { EditorApp, initApp } from "../src/app.js";
import { obtainUrl } from "../src/api.js";
import { parseSurrogate } from "../src/surrogate.js";

const REPOS = [
  ["arxiv", "info:sid/arxiv.org:pathways"],
  ["adore", "info:sid/library.lanl.gov:pathways"],
  ["dspace", "info:sid/dspace.demo:pathways"],
  ["fedora", "info:sid/fedora.demo:pathways"],
] as const;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no port assigned"));
      }
    });
  });
}

let workDir: string;
let serverProc: ChildProcess | undefined;
let base: string;

async function waitForServer(url: string, timeoutMs = 60_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(url);
      if (response.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error(`server at ${url} did not come up`);
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "editor-e2e-"));
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  const configLines = [
    "[server]",
    'host = "127.0.0.1"',
    `port = ${port}`,
    'data_dir = "data"',
    "",
  ];
  for (const [name, provider] of REPOS) {
    configLines.push(
      "[[repository]]",
      `name = "${name}"`,
      `provider = "${provider}"`,
      `auth_token = "${name}-put-token"`,
      `seed_profile = "${name}"`,
      "",
    );
  }
  const configPath = join(workDir, "pathways.toml");
  writeFileSync(configPath, configLines.join("\n"));

  for (const [name] of REPOS) {
    const seeded = spawnSync(
      "python3",
      ["-m", "pathways.cli", "seed", "--config", configPath, "--repo", name],
      { encoding: "utf-8" },
    );
    if (seeded.status !== 0) {
      throw new Error(`seeding ${name} failed: ${seeded.stderr}`);
    }
  }

  serverProc = spawn("python3", ["-m", "pathways.cli", "serve", "--config", configPath], {
    stdio: "ignore",
  });
  await waitForServer(`${base}/registry/providers`);
  const indexed = await fetch(`${base}/search/index`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ full: true }),
  });
  expect(indexed.status).toBe(200);
});

afterAll(() => {
  serverProc?.kill();
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

function click(root: HTMLElement, selector: string): void {
  const target = root.querySelector(selector) as HTMLElement | null;
  if (!target) throw new Error(`nothing to click at ${selector}`);
  target.dispatchEvent(new Event("click", { bubbles: true }));
}

describe("overlay issue composition end to end", () => {
  let app: EditorApp;
  let root: HTMLElement;

  it("loads configuration from the server", async () => {
    root = document.createElement("div");
    document.body.appendChild(root);
    app = await initApp(root, base);
    expect(app.config.putProvider).toBe("info:sid/fedora.demo:pathways");
    expect(app.config.repositories).toHaveLength(4);
  });

  it("searches and renders three article results with copy controls", async () => {
    await app.runSearch("info");
    const rows = root.querySelectorAll("#search-results li");
    expect(rows).toHaveLength(3);
    expect(root.querySelectorAll("#search-results .copy-btn")).toHaveLength(3);
  });

  it("shows the empty state for a no-match query", async () => {
    await app.runSearch("xylophone");
    expect(root.querySelectorAll("#search-results li")).toHaveLength(0);
    expect(root.querySelector("#search-empty")!.classList.contains("hidden")).toBe(false);
    await app.runSearch("info"); // restore the working result set
  });

  it("copies surrogates into the clipboard pane and pastes them as cards", async () => {
    for (let i = 0; i < 3; i++) {
      const text = await app.copyResult(i);
      const pane = root.querySelector("#clipboard-pane") as HTMLTextAreaElement;
      expect(pane.value).toBe(text);
      const entity = parseSurrogate(pane.value);
      expect(entity.providerInfo).toBeTruthy();
      (root.querySelector("#paste-area") as HTMLTextAreaElement).value = pane.value;
      click(root, "#add-button");
    }
    expect(app.draft.articles).toHaveLength(3);
    expect(root.querySelectorAll("#draft-cards .card")).toHaveLength(3);
  });

  it("rejects a malformed paste without mutating the draft", () => {
    (root.querySelector("#paste-area") as HTMLTextAreaElement).value = "<broken <<";
    click(root, "#add-button");
    const error = root.querySelector("#paste-error")!;
    expect(error.classList.contains("hidden")).toBe(false);
    expect(error.textContent).toMatch(/rejected/);
    expect(app.draft.articles).toHaveLength(3);
    expect(root.querySelectorAll("#draft-cards .card")).toHaveLength(3);
  });

  it("reorders cards from the card controls", () => {
    const before = app.draft.articles.map((c) => c.providerInfo.preferredIdentifier);
    const cards = root.querySelectorAll("#draft-cards .card");
    (cards[2].querySelector(".move-up") as HTMLElement).dispatchEvent(
      new Event("click", { bubbles: true }),
    );
    const mid = app.draft.articles.map((c) => c.providerInfo.preferredIdentifier);
    expect(mid).toEqual([before[0], before[2], before[1]]);
    const cardsAgain = root.querySelectorAll("#draft-cards .card");
    (cardsAgain[1].querySelector(".move-up") as HTMLElement).dispatchEvent(
      new Event("click", { bubbles: true }),
    );
    expect(app.draft.articles.map((c) => c.providerInfo.preferredIdentifier)).toEqual([
      before[2],
      before[0],
      before[1],
    ]);
  });

  it("submits the issue and renders a four-mapping receipt", async () => {
    const uiOrder = app.draft.articles.map((c) => c.providerInfo.preferredIdentifier);
    const receipt = await app.submit();
    expect(receipt).not.toBeNull();
    expect(receipt!.stored).toBe(4);
    expect(receipt!.mapping).toHaveLength(4);
    expect(root.querySelectorAll("#receipt-mapping tbody tr")).toHaveLength(4);
    expect(root.querySelector("#receipt-pane")!.classList.contains("hidden")).toBe(false);

    // decomposition walks the document pre-order: root first, then the
    // articles in submission order
    const articleIncoming = receipt!.mapping.slice(1).map((m) => m.incoming.preferredIdentifier);
    expect(articleIncoming).toEqual(uiOrder);

    // the stored issue's hasEntity order matches the UI order
    const fedora = app.config.repositories.find((r) => r.name === "fedora")!;
    const issueText = await (await fetch(
      obtainUrl(fedora.obtainBase, receipt!.root.preferredIdentifier),
    )).text();
    const issue = parseSurrogate(issueText);
    expect(issue.children).toHaveLength(3);
    const assignedOrder = receipt!.mapping.slice(1).map((m) => m.assigned.preferredIdentifier);
    expect(issue.children.map((c) => c.providerInfo?.preferredIdentifier)).toEqual(assignedOrder);

    // receipt links: obtain link is set, DOT graph rendered
    const link = root.querySelector("#issue-link") as HTMLAnchorElement;
    expect(link.href).toContain("rft_id=");
    expect(root.querySelector("#issue-dot")!.textContent).toContain("digraph surrogate");

    // draft cleared after a successful submit
    expect(app.draft.articles).toHaveLength(0);
  });

  it("keeps the draft and explains a 401 when the token is wrong", async () => {
    await app.runSearch("info");
    const text = await app.copyResult(0);
    expect(app.pasteIntoDraft(text)).toBe(true);
    (root.querySelector("#token-input") as HTMLInputElement).value = "wrong-token";
    const receipt = await app.submit();
    expect(receipt).toBeNull();
    expect(app.draft.articles).toHaveLength(1); // retained
    const error = root.querySelector("#submit-error")!;
    expect(error.classList.contains("hidden")).toBe(false);
    expect(error.textContent).toMatch(/token/);
  });
});
