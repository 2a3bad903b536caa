import { describe, expect, test } from "vitest";

import { parseCsv, payloadProblem, rowsFromExport } from "../src/model.js";

describe("parseCsv", () => {
  test("splits plain rows", () => {
    expect(parseCsv("a,b,c\n1,2,3\n")).toEqual([
      ["a", "b", "c"],
      ["1", "2", "3"],
    ]);
  });

  test("honors quotes, doubled quotes, embedded delimiters and newlines", () => {
    const text = 'a,"b,with comma","say ""hi""","line\nbreak"\n';
    expect(parseCsv(text)).toEqual([["a", "b,with comma", 'say "hi"', "line\nbreak"]]);
  });

  test("accepts CRLF endings and a missing final newline", () => {
    expect(parseCsv("a,b\r\nc,d")).toEqual([
      ["a", "b"],
      ["c", "d"],
    ]);
  });

  test("skips blank lines", () => {
    expect(parseCsv("a\n\nb\n")).toEqual([["a"], ["b"]]);
  });
});

describe("rowsFromExport", () => {
  const csvText = [
    "postId,predVersion,predLocalId,curVersion,curLocalId,blockType,comment",
    "1,1,0,2,0,text,kept",
    '1,,,2,1,code,"new, block"',
    "2,1,0,2,0,text,other post",
    "",
  ].join("\n");

  test("filters to one post and decodes empty predecessors as null", () => {
    expect(rowsFromExport(csvText, 1)).toEqual([
      {
        postId: 1,
        curVersion: 2,
        curLocalId: 0,
        predLocalId: 0,
        blockType: "text",
        comment: "kept",
      },
      {
        postId: 1,
        curVersion: 2,
        curLocalId: 1,
        predLocalId: null,
        blockType: "code",
        comment: "new, block",
      },
    ]);
  });

  test("returns nothing for absent posts", () => {
    expect(rowsFromExport(csvText, 99)).toEqual([]);
  });
});

describe("payloadProblem", () => {
  const good = {
    postId: 1,
    predVersion: 1,
    curVersion: 2,
    predBlocks: [{ localId: 0, blockType: "text", content: "a" }],
    curBlocks: [],
    autoConnected: [],
    connections: [],
    token: "abc",
  };

  test("accepts a well-formed payload", () => {
    expect(payloadProblem(good)).toBeNull();
  });

  test.each<[string, unknown, string]>([
    ["not an object", null, "not an object"],
    ["missing postId", { ...good, postId: "1" }, "postId"],
    ["non-adjacent versions", { ...good, predVersion: 0 }, "not adjacent"],
    ["missing token", { ...good, token: "" }, "token"],
    ["bad block", { ...good, curBlocks: [{ localId: "0" }] }, "curBlocks"],
    ["bad auto list", { ...good, autoConnected: [{}] }, "autoConnected"],
    ["bad connections", { ...good, connections: [0] }, "connections"],
  ])("flags %s", (_name, value, fragment) => {
    expect(payloadProblem(value)).toContain(fragment);
  });
});
