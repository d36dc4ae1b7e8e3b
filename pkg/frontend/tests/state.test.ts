import { describe, expect, it } from "vitest";

import { DraftIssue } from "../src/state.js";
import { SurrogateError, parseSurrogate } from "../src/surrogate.js";

function surrogateFor(provider: string, id: string): string {
  return `<?xml version="1.0" encoding="UTF-8"?>
<rdf:RDF xmlns:core="info:pathways/core#" xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">
  <core:entity>
    <core:hasSemantic rdf:resource="info:pathways/semantic/journal-article"/>
    <core:hasIdentifier>${id}</core:hasIdentifier>
    <core:hasProviderInfo>
      <core:providerInfo>
        <core:preferredIdentifier>${id}</core:preferredIdentifier>
        <core:provider>${provider}</core:provider>
      </core:providerInfo>
    </core:hasProviderInfo>
  </core:entity>
</rdf:RDF>`;
}

describe("DraftIssue", () => {
  it("accepts valid surrogates and records their identity", () => {
    const draft = new DraftIssue("info:overlay-ui/issue/t");
    const card = draft.addFromSurrogate(surrogateFor("info:sid/a", "info:a/1"));
    expect(card.sourceProvider).toBe("info:sid/a");
    expect(card.providerInfo.preferredIdentifier).toBe("info:a/1");
    expect(draft.articles).toHaveLength(1);
  });

  it("rejects invalid pastes without mutating the draft", () => {
    const draft = new DraftIssue("info:overlay-ui/issue/t");
    draft.addFromSurrogate(surrogateFor("info:sid/a", "info:a/1"));
    expect(() => draft.addFromSurrogate("<broken <<")).toThrow(SurrogateError);
    expect(() => draft.addFromSurrogate("<x/>")).toThrow(SurrogateError);
    expect(draft.articles).toHaveLength(1);
  });

  it("reorders cards within bounds", () => {
    const draft = new DraftIssue("info:overlay-ui/issue/t");
    for (const id of ["info:a/1", "info:b/2", "info:c/3"]) {
      draft.addFromSurrogate(surrogateFor("info:sid/x", id));
    }
    expect(draft.move(2, -1)).toBe(true);
    expect(draft.articles.map((c) => c.providerInfo.preferredIdentifier)).toEqual([
      "info:a/1",
      "info:c/3",
      "info:b/2",
    ]);
    expect(draft.move(0, -1)).toBe(false); // already first
    expect(draft.move(2, 1)).toBe(false); // already last
  });

  it("builds an issue whose child order equals the card order", () => {
    const draft = new DraftIssue("info:overlay-ui/issue/t");
    for (const id of ["info:a/1", "info:b/2", "info:c/3"]) {
      draft.addFromSurrogate(surrogateFor("info:sid/x", id));
    }
    draft.move(2, -1);
    draft.move(1, -1);
    const issue = parseSurrogate(draft.buildDocument());
    expect(issue.children.map((c) => c.providerInfo?.preferredIdentifier)).toEqual([
      "info:c/3",
      "info:a/1",
      "info:b/2",
    ]);
  });

  it("removes cards", () => {
    const draft = new DraftIssue("info:overlay-ui/issue/t");
    draft.addFromSurrogate(surrogateFor("info:sid/a", "info:a/1"));
    draft.addFromSurrogate(surrogateFor("info:sid/b", "info:b/2"));
    draft.remove(0);
    expect(draft.articles.map((c) => c.providerInfo.preferredIdentifier)).toEqual(["info:b/2"]);
  });
});
