// Thin typed client over the annotation service. All communication with the
// backend goes through this module; no other code builds URLs or reads
// responses.

import type { ConnectionIn, DiffPayload, PostList } from "./model.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }

  get isStaleToken(): boolean {
    return this.status === 409 && this.detail.startsWith("stale token");
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function errorDetail(response: Response): Promise<string> {
  const text = await response.text();
  try {
    const body = JSON.parse(text) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the raw text
  }
  return text || response.statusText;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return response;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.request(path);
    return (await response.json()) as T;
  }

  listPosts(): Promise<PostList> {
    return this.getJson<PostList>("/posts");
  }

  versionPair(postId: number, index: number): Promise<unknown> {
    return this.getJson<unknown>(`/posts/${postId}/versions/${index}`);
  }

  async putConnections(
    postId: number,
    token: string,
    connections: ConnectionIn[],
  ): Promise<{ token: string; stored: number }> {
    const response = await this.request(`/posts/${postId}/connections`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ token, connections }),
    });
    return (await response.json()) as { token: string; stored: number };
  }

  async exportCsv(): Promise<string> {
    const response = await this.request("/export");
    return await response.text();
  }

  diff(postId: number, pred: string, succ: string): Promise<DiffPayload> {
    const query = new URLSearchParams({
      postId: String(postId),
      pred,
      succ,
    });
    return this.getJson<DiffPayload>(`/diff?${query.toString()}`);
  }
}
