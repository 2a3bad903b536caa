import { describe, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import type { Block, BlockType } from "../src/model.js";
import { renderApp } from "../src/render.js";
import { AnnotatorApp, pairSequence } from "../src/state.js";
import { FakeService, fetchFor } from "./fake.js";

function block(localId: number, blockType: BlockType, content: string): Block {
  return { localId, blockType, content };
}

function appFor(service: FakeService): AnnotatorApp {
  return new AnnotatorApp(new ApiClient("http://fake", fetchFor(service)));
}

describe("pairSequence", () => {
  test("orders pairs by post id then version", () => {
    const refs = pairSequence([
      { postId: 9, versionCount: 3 },
      { postId: 2, versionCount: 2 },
      { postId: 4, versionCount: 1 },
    ]);
    expect(refs).toEqual([
      { postId: 2, index: 2 },
      { postId: 9, index: 2 },
      { postId: 9, index: 3 },
    ]);
  });

  test("single-version posts contribute no pairs", () => {
    expect(pairSequence([{ postId: 1, versionCount: 1 }])).toEqual([]);
  });
});

describe("navigation across a sample", () => {
  const threeVersions = new FakeService([
    {
      postId: 1,
      versions: [
        [block(0, "text", "v1")],
        [block(0, "text", "v2")],
        [block(0, "text", "v3")],
      ],
    },
  ]);

  test("one post with three versions yields two pairs visited in order", async () => {
    const app = appFor(threeVersions);
    await app.start();
    expect(app.currentRef()).toEqual({ postId: 1, index: 2 });
    await app.next();
    expect(app.currentRef()).toEqual({ postId: 1, index: 3 });
    await app.next();
    expect(app.currentRef()).toEqual({ postId: 1, index: 3 });
    expect(app.notice).toBe("no further version pairs");
  });

  test("previous stops at the first pair", async () => {
    const app = appFor(threeVersions);
    await app.start();
    await app.previous();
    expect(app.currentRef()).toEqual({ postId: 1, index: 2 });
    expect(app.notice).toBe("already at the first version pair");
  });

  test("skip hops over fully auto-connected pairs", async () => {
    const service = new FakeService([
      {
        postId: 1,
        versions: [
          [block(0, "text", "same"), block(1, "code", "x = 1")],
          [block(0, "text", "same"), block(1, "code", "x = 1")],
          [block(0, "text", "changed"), block(1, "code", "x = 2")],
        ],
      },
    ]);
    const app = appFor(service);
    app.skipFullyAuto = true;
    await app.start();
    expect(app.currentRef()).toEqual({ postId: 1, index: 3 });
    await app.next();
    expect(app.notice).toBe("no further version pairs");
  });

  test("an empty sample shows the empty state", async () => {
    const app = appFor(new FakeService([{ postId: 1, versions: [[block(0, "text", "only")]] }]));
    await app.start();
    expect(app.isEmpty).toBe(true);
    expect(app.session).toBeNull();
    expect(renderApp(app)).toContain("no version pairs to annotate");
  });

  test("a malformed payload raises the error banner and renders nothing else", async () => {
    const service = new FakeService([
      { postId: 1, versions: [[block(0, "text", "a")], [block(0, "text", "b")]] },
    ]);
    const broken = async (url: string, init?: RequestInit): Promise<Response> => {
      if (/\/versions\//.test(url)) {
        return new Response(JSON.stringify({ postId: "one" }), {
          status: 200,
          headers: { "content-type": "application/json" },
        });
      }
      return fetchFor(service)(url, init);
    };
    const app = new AnnotatorApp(new ApiClient("http://fake", broken));
    await app.start();
    expect(app.banner).toContain("postId missing or not a number");
    expect(app.session).toBeNull();
    const html = renderApp(app);
    expect(html).toContain("banner");
    expect(html).not.toContain("columns");
  });
});

describe("completion indicator", () => {
  test("saving every pair marks the sample complete", async () => {
    const service = new FakeService([
      {
        postId: 1,
        versions: [
          [block(0, "text", "one"), block(1, "code", "c = 1")],
          [block(0, "text", "two"), block(1, "code", "c = 1")],
        ],
      },
      {
        postId: 2,
        versions: [[block(0, "text", "start")], [block(0, "text", "end")]],
      },
    ]);
    const app = appFor(service);
    await app.start();
    let summary = await app.refreshCompletion();
    expect(summary).toEqual({ settled: 0, total: 2 });
    expect(renderApp(app)).not.toContain("sample complete");

    expect(app.currentRef()).toEqual({ postId: 1, index: 2 });
    const first = app.session;
    expect(first).not.toBeNull();
    first?.clickBlock("pred", 0);
    first?.clickBlock("cur", 0);
    await app.save();
    summary = app.completionSummary();
    expect(summary).toEqual({ settled: 1, total: 2 });

    await app.next();
    app.session?.markNoPredecessor(0);
    await app.save();
    summary = app.completionSummary();
    expect(summary).toEqual({ settled: 2, total: 2 });
    expect(renderApp(app)).toContain("sample complete");
  });

  test("stale saves surface the reload prompt and reload recovers", async () => {
    const service = new FakeService([
      { postId: 1, versions: [[block(0, "text", "a")], [block(0, "text", "b")]] },
    ]);
    const app = appFor(service);
    await app.start();
    app.session?.markNoPredecessor(0);
    service.rotateToken();
    await app.save();
    expect(app.stale).toBe(true);
    const html = renderApp(app);
    expect(html).toContain("reload to continue");
    expect(html).toContain('data-action="reload"');
    await app.reload();
    expect(app.stale).toBe(false);
    expect(app.session?.links.size).toBe(0);
  });
});
