import { describe, expect, test } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { Block, BlockType } from "../src/model.js";
import { payloadProblem } from "../src/model.js";
import { FakeService, fetchFor } from "./fake.js";

function block(localId: number, blockType: BlockType, content: string): Block {
  return { localId, blockType, content };
}

const service = (): FakeService =>
  new FakeService([
    {
      postId: 3,
      versions: [
        [block(0, "text", "hello"), block(1, "code", "y = 0")],
        [block(0, "text", "hello"), block(1, "code", "y = 1")],
      ],
    },
  ]);

describe("ApiClient", () => {
  test("listPosts returns the sample listing", async () => {
    const api = new ApiClient("http://fake", fetchFor(service()));
    expect(await api.listPosts()).toEqual({
      sample: "fake",
      posts: [{ postId: 3, versionCount: 2 }],
    });
  });

  test("versionPair payloads satisfy the shape check", async () => {
    const api = new ApiClient("http://fake", fetchFor(service()));
    const payload = await api.versionPair(3, 2);
    expect(payloadProblem(payload)).toBeNull();
  });

  test("validation failures surface as ApiError with the service detail", async () => {
    const api = new ApiClient("http://fake", fetchFor(service()));
    const bad = api.putConnections(3, "t0", [
      { curVersion: 2, curLocalId: 0, predLocalId: 1, blockType: "text", comment: "" },
    ]);
    await expect(bad).rejects.toMatchObject({
      name: "ApiError",
      status: 409,
      detail: "connection joins text to code",
    });
  });

  test("stale tokens are recognizable on the error", async () => {
    const svc = service();
    const api = new ApiClient("http://fake", fetchFor(svc));
    svc.rotateToken();
    try {
      await api.putConnections(3, "t0", []);
      expect.unreachable("put should have failed");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).isStaleToken).toBe(true);
    }
  });

  test("putConnections rotates the token and stores rows", async () => {
    const svc = service();
    const api = new ApiClient("http://fake", fetchFor(svc));
    const result = await api.putConnections(3, "t0", [
      { curVersion: 2, curLocalId: 0, predLocalId: 0, blockType: "text", comment: "same" },
    ]);
    expect(result.stored).toBe(1);
    expect(result.token).not.toBe("t0");
    expect(await api.exportCsv()).toContain("3,1,0,2,0,text,same");
  });

  test("diff fetches ops for a block pair and rejects bad refs", async () => {
    const api = new ApiClient("http://fake", fetchFor(service()));
    const diff = await api.diff(3, "1.1", "2.1");
    expect(diff.ops).toEqual([
      { op: "delete", line: "y = 0" },
      { op: "insert", line: "y = 1" },
    ]);
    await expect(api.diff(3, "nope", "2.1")).rejects.toMatchObject({ status: 400 });
  });

  test("non-JSON error bodies fall back to raw text", async () => {
    const api = new ApiClient("", async () => new Response("boom", { status: 500 }));
    await expect(api.listPosts()).rejects.toMatchObject({
      status: 500,
      detail: "boom",
    });
  });
});
