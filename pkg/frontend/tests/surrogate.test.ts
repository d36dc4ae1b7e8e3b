import { readFileSync } from "node:fs";
import { resolve } from "node:path";
import { describe, expect, it } from "vitest";

import {
  SurrogateError,
  buildIssueDocument,
  entityUri,
  parseSurrogate,
  pctEncode,
} from "../src/surrogate.js";

// vitest runs with cwd = frontend/; the golden lives in the Python test tree
const goldenPath = resolve(process.cwd(), "../tests/golden/adore_sample.pwc.rdf");
const golden = readFileSync(goldenPath, "utf-8");

describe("parseSurrogate", () => {
  it("reads the archive sample end to end", () => {
    const entity = parseSurrogate(golden);
    expect(entity.semantic).toBe("info:pathways/semantic/journal-article");
    expect(entity.identifiers).toEqual(["info:doi/10.1016/j.dyepig.2004.12.010"]);
    expect(entity.providerInfo).toEqual({
      provider: "info:sid/library.lanl.gov:pathways",
      preferredIdentifier: "info:doi/10.1016/j.dyepig.2004.12.010",
      versionKey: undefined,
    });
    expect(entity.children).toHaveLength(1);
    const citation = entity.children[0];
    expect(citation.semantic).toBe("info:pathways/semantic/bibliographic-citation");
    expect(citation.datastreams).toEqual([
      {
        format: "info:pathways/fmt/pronom/1000",
        location: "http://purl.lanl.gov/demo/adore-arcfile/00e682eb-a87eb27b0c79",
      },
    ]);
  });

  it("rejects malformed XML", () => {
    expect(() => parseSurrogate("<broken <<")).toThrow(SurrogateError);
  });

  it("rejects non-surrogate XML", () => {
    expect(() => parseSurrogate("<root>hi</root>")).toThrow(SurrogateError);
  });

  it("rejects multiple top-level entities", () => {
    const doc =
      '<rdf:RDF xmlns:core="info:pathways/core#" ' +
      'xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">' +
      "<core:entity/><core:entity/></rdf:RDF>";
    expect(() => parseSurrogate(doc)).toThrow(/exactly one top-level entity/);
  });
});

describe("identifier encoding", () => {
  it("uses the RFC 3986 unreserved set", () => {
    expect(pctEncode("x y")).toBe("x%20y");
    expect(pctEncode("info:doi/10.1016")).toBe("info%3Adoi%2F10.1016");
    expect(pctEncode("café")).toBe("caf%C3%A9");
  });

  it("matches the server's entity URI for the sample", () => {
    const uri = entityUri({
      provider: "info:sid/library.lanl.gov:pathways",
      preferredIdentifier: "info:doi/10.1016/j.dyepig.2004.12.010",
    });
    expect(uri).toBe(
      "info:pathways/entity/info%3Asid%2Flibrary.lanl.gov%3Apathways/" +
        "info%3Adoi%2F10.1016%2Fj.dyepig.2004.12.010",
    );
  });
});

describe("buildIssueDocument", () => {
  const articles = [
    { provider: "info:sid/a", preferredIdentifier: "info:a/1" },
    { provider: "info:sid/b", preferredIdentifier: "info:b/2" },
    { provider: "info:sid/c", preferredIdentifier: "info:c/3" },
  ];

  it("round-trips through the parser with order and lineage intact", () => {
    const xml = buildIssueDocument({
      draftId: "info:overlay-ui/issue/t1",
      editorProvider: "info:sid/editor",
      articles,
    });
    const issue = parseSurrogate(xml);
    expect(issue.semantic).toBe("info:pathways/semantic/journal-issue");
    expect(issue.children.map((c) => c.providerInfo?.preferredIdentifier)).toEqual([
      "info:a/1",
      "info:b/2",
      "info:c/3",
    ]);
    for (const [i, child] of issue.children.entries()) {
      expect(child.lineage).toEqual([{ ...articles[i], versionKey: undefined }]);
      expect(child.datastreams).toEqual([]);
      expect(child.children).toEqual([]);
    }
  });

  it("escapes XML metacharacters", () => {
    const xml = buildIssueDocument({
      draftId: "info:x/<&>",
      editorProvider: "info:sid/editor",
      articles: [{ provider: "info:sid/a&b", preferredIdentifier: 'id"quoted"' }],
    });
    const issue = parseSurrogate(xml);
    expect(issue.identifiers[0]).toBe("info:x/<&>");
    expect(issue.children[0].providerInfo?.provider).toBe("info:sid/a&b");
  });
});
