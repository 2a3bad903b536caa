// View state for the annotator: one PairSession per loaded version pair and
// an AnnotatorApp steering navigation across the sample. All mutation goes
// through methods here so the render layer stays a pure function of state.

import { ApiClient, ApiError } from "./api.js";
import {
  BLOCK_TYPES,
  type Block,
  type ConnectionIn,
  type DiffOp,
  type PairPayload,
  type PostEntry,
  payloadProblem,
  rowsFromExport,
} from "./model.js";

export type LinkSource = "auto" | "stored" | "manual";

export interface Link {
  predLocalId: number | null;
  comment: string;
  source: LinkSource;
}

export interface Selection {
  side: "pred" | "cur";
  localId: number;
}

// Client-side mirror of the service's PUT validation, in the same order the
// service applies it. The UI must never send a request this would flag.
export function connectionProblems(
  payload: PairPayload,
  connections: ConnectionIn[],
): string[] {
  const problems: string[] = [];
  const curById = new Map(payload.curBlocks.map((b) => [b.localId, b]));
  const predById = new Map(payload.predBlocks.map((b) => [b.localId, b]));
  const seenTargets = new Set<number>();
  const claimedPreds = new Set<number>();
  for (const conn of connections) {
    if (!BLOCK_TYPES.includes(conn.blockType)) {
      problems.push(`unknown blockType ${conn.blockType}`);
      continue;
    }
    if (conn.curVersion !== payload.curVersion) {
      problems.push(`connection targets version ${conn.curVersion}, pair shows ${payload.curVersion}`);
      continue;
    }
    const cur = curById.get(conn.curLocalId);
    if (cur === undefined) {
      problems.push(`no current block ${conn.curLocalId}`);
      continue;
    }
    if (cur.blockType !== conn.blockType) {
      problems.push(`block ${conn.curLocalId} is ${cur.blockType}, connection says ${conn.blockType}`);
      continue;
    }
    if (seenTargets.has(conn.curLocalId)) {
      problems.push(`duplicate connection for block ${conn.curLocalId}`);
      continue;
    }
    seenTargets.add(conn.curLocalId);
    if (conn.predLocalId === null) continue;
    const pred = predById.get(conn.predLocalId);
    if (pred === undefined) {
      problems.push(`no predecessor block ${conn.predLocalId}`);
      continue;
    }
    if (pred.blockType !== conn.blockType) {
      problems.push(`connection joins ${conn.blockType} to ${pred.blockType}`);
      continue;
    }
    if (claimedPreds.has(conn.predLocalId)) {
      problems.push(`predecessor ${conn.predLocalId} claimed twice`);
      continue;
    }
    claimedPreds.add(conn.predLocalId);
  }
  return problems;
}

// True when every current block is covered by an auto-connected pair, i.e.
// the pair needs no human decision unless the annotator wants to override.
export function fullyAutoConnected(payload: PairPayload): boolean {
  const covered = new Set(payload.autoConnected.map((a) => a.curLocalId));
  return payload.curBlocks.every((b) => covered.has(b.localId));
}

// True when every current block carries a recorded decision: stored rows
// when any exist, otherwise auto-connected coverage.
export function pairSettled(payload: PairPayload): boolean {
  if (payload.connections.length === 0) return fullyAutoConnected(payload);
  const covered = new Set(payload.connections.map((r) => r.curLocalId));
  return payload.curBlocks.every((b) => covered.has(b.localId));
}

export class PairSession {
  readonly links = new Map<number, Link>();
  selection: Selection | null = null;
  hint: string | null = null;
  dirty = false;
  readonly diffs = new Map<number, DiffOp[]>();

  constructor(readonly payload: PairPayload) {
    if (payload.connections.length > 0) {
      for (const row of payload.connections) {
        this.links.set(row.curLocalId, {
          predLocalId: row.predLocalId,
          comment: row.comment,
          source: "stored",
        });
      }
    } else {
      for (const auto of payload.autoConnected) {
        this.links.set(auto.curLocalId, {
          predLocalId: auto.predLocalId,
          comment: "",
          source: "auto",
        });
      }
    }
  }

  curBlock(localId: number): Block | undefined {
    return this.payload.curBlocks.find((b) => b.localId === localId);
  }

  predBlock(localId: number): Block | undefined {
    return this.payload.predBlocks.find((b) => b.localId === localId);
  }

  isComplete(): boolean {
    return this.payload.curBlocks.every((b) => this.links.has(b.localId));
  }

  predClaimedBy(predLocalId: number): number | null {
    for (const [curLocalId, link] of this.links) {
      if (link.predLocalId === predLocalId) return curLocalId;
    }
    return null;
  }

  clickBlock(side: "pred" | "cur", localId: number): void {
    const block = side === "pred" ? this.predBlock(localId) : this.curBlock(localId);
    if (block === undefined) {
      this.hint = `no ${side === "pred" ? "predecessor" : "current"} block ${localId}`;
      return;
    }
    this.hint = null;
    if (this.selection === null) {
      this.selection = { side, localId };
      return;
    }
    if (this.selection.side === side) {
      this.selection =
        this.selection.localId === localId ? null : { side, localId };
      return;
    }
    const predId = side === "pred" ? localId : this.selection.localId;
    const curId = side === "cur" ? localId : this.selection.localId;
    this.connect(predId, curId);
  }

  // Confirms pred -> cur. Rejections keep the first selection so the user
  // can pick another partner; the hint mirrors the rule the service would
  // enforce with a 409.
  private connect(predLocalId: number, curLocalId: number): void {
    const pred = this.predBlock(predLocalId);
    const cur = this.curBlock(curLocalId);
    if (pred === undefined || cur === undefined) {
      this.hint = "selection no longer matches the payload";
      return;
    }
    if (pred.blockType !== cur.blockType) {
      this.hint = `cannot connect ${cur.blockType} block ${curLocalId} to ${pred.blockType} block ${predLocalId}: types must match`;
      return;
    }
    const owner = this.predClaimedBy(predLocalId);
    if (owner !== null && owner !== curLocalId) {
      this.hint = `predecessor block ${predLocalId} is already connected to block ${owner}`;
      return;
    }
    const existing = this.links.get(curLocalId);
    this.links.set(curLocalId, {
      predLocalId,
      comment: existing?.comment ?? "",
      source: "manual",
    });
    this.diffs.delete(curLocalId);
    this.selection = null;
    this.dirty = true;
  }

  markNoPredecessor(curLocalId: number): void {
    const cur = this.curBlock(curLocalId);
    if (cur === undefined) {
      this.hint = `no current block ${curLocalId}`;
      return;
    }
    const existing = this.links.get(curLocalId);
    this.links.set(curLocalId, {
      predLocalId: null,
      comment: existing?.comment ?? "",
      source: "manual",
    });
    this.diffs.delete(curLocalId);
    if (this.selection?.side === "cur" && this.selection.localId === curLocalId) {
      this.selection = null;
    }
    this.hint = null;
    this.dirty = true;
  }

  clearAnnotation(curLocalId: number): void {
    if (this.links.delete(curLocalId)) {
      this.diffs.delete(curLocalId);
      this.dirty = true;
    }
    this.hint = null;
  }

  setComment(curLocalId: number, text: string): void {
    const link = this.links.get(curLocalId);
    if (link === undefined) {
      this.hint = `annotate block ${curLocalId} before commenting on it`;
      return;
    }
    if (link.comment === text) return;
    this.links.set(curLocalId, { ...link, comment: text });
    this.hint = null;
    this.dirty = true;
  }

  connectionPlan(): ConnectionIn[] {
    const plan: ConnectionIn[] = [];
    for (const [curLocalId, link] of [...this.links].sort((a, b) => a[0] - b[0])) {
      const cur = this.curBlock(curLocalId);
      if (cur === undefined) continue;
      plan.push({
        curVersion: this.payload.curVersion,
        curLocalId,
        predLocalId: link.predLocalId,
        blockType: cur.blockType,
        comment: link.comment,
      });
    }
    return plan;
  }

  // Replaces the whole post's rows server-side, so rows of other version
  // pairs are carried over from the current export and sent back unchanged.
  async save(api: ApiClient): Promise<"saved" | "stale"> {
    const plan = this.connectionPlan();
    const problems = connectionProblems(this.payload, plan);
    if (problems.length > 0) {
      throw new Error(`refusing to save an invalid plan: ${problems[0]}`);
    }
    const exportText = await api.exportCsv();
    const passthrough: ConnectionIn[] = rowsFromExport(exportText, this.payload.postId)
      .filter((row) => row.curVersion !== this.payload.curVersion)
      .map((row) => ({
        curVersion: row.curVersion,
        curLocalId: row.curLocalId,
        predLocalId: row.predLocalId,
        blockType: row.blockType,
        comment: row.comment,
      }));
    try {
      await api.putConnections(this.payload.postId, this.payload.token, [
        ...passthrough,
        ...plan,
      ]);
    } catch (error) {
      if (error instanceof ApiError && error.isStaleToken) return "stale";
      throw error;
    }
    this.dirty = false;
    return "saved";
  }
}

export interface PairRef {
  postId: number;
  index: number;
}

// Version pairs (i-1, i) for every post with at least two versions, in post
// order then version order.
export function pairSequence(posts: PostEntry[]): PairRef[] {
  const refs: PairRef[] = [];
  const ordered = [...posts].sort((a, b) => a.postId - b.postId);
  for (const post of ordered) {
    for (let index = 2; index <= post.versionCount; index++) {
      refs.push({ postId: post.postId, index });
    }
  }
  return refs;
}

function refKey(ref: PairRef): string {
  return `${ref.postId}:${ref.index}`;
}

export class AnnotatorApp {
  sample = "";
  posts: PostEntry[] = [];
  pairs: PairRef[] = [];
  position: number | null = null;
  session: PairSession | null = null;
  skipFullyAuto = false;
  stale = false;
  banner: string | null = null;
  notice: string | null = null;
  started = false;
  private readonly settled = new Map<string, boolean>();
  private readonly autoOnly = new Map<string, boolean>();

  constructor(private readonly api: ApiClient) {}

  get isEmpty(): boolean {
    return this.started && this.pairs.length === 0;
  }

  currentRef(): PairRef | null {
    return this.position === null ? null : (this.pairs[this.position] ?? null);
  }

  async start(): Promise<void> {
    const listing = await this.api.listPosts();
    this.sample = listing.sample;
    this.posts = listing.posts;
    this.pairs = pairSequence(listing.posts);
    this.started = true;
    if (this.pairs.length === 0) return;
    await this.advance(0, 1);
  }

  private async fetchPayload(ref: PairRef): Promise<PairPayload | null> {
    const raw = await this.api.versionPair(ref.postId, ref.index);
    const problem = payloadProblem(raw);
    if (problem !== null) {
      this.banner = `cannot display post ${ref.postId} pair ${ref.index}: ${problem}`;
      this.session = null;
      return null;
    }
    const payload = raw as PairPayload;
    this.settled.set(refKey(ref), pairSettled(payload));
    this.autoOnly.set(refKey(ref), fullyAutoConnected(payload));
    return payload;
  }

  private adopt(payload: PairPayload, position: number): void {
    this.session = new PairSession(payload);
    this.position = position;
    this.banner = null;
    this.stale = false;
    this.notice = null;
  }

  // Walks from `from` in `direction` (1 or -1) to the first pair that is not
  // skipped, fetching payloads as needed to decide.
  private async advance(from: number, direction: 1 | -1): Promise<void> {
    for (let i = from; i >= 0 && i < this.pairs.length; i += direction) {
      const ref = this.pairs[i];
      if (ref === undefined) break;
      if (this.skipFullyAuto && this.autoOnly.get(refKey(ref)) === true) continue;
      const payload = await this.fetchPayload(ref);
      if (payload === null) return;
      if (this.skipFullyAuto && fullyAutoConnected(payload)) continue;
      this.adopt(payload, i);
      return;
    }
    this.notice =
      direction === 1 ? "no further version pairs" : "already at the first version pair";
  }

  async next(): Promise<void> {
    if (this.pairs.length === 0) return;
    await this.advance(this.position === null ? 0 : this.position + 1, 1);
  }

  async previous(): Promise<void> {
    if (this.pairs.length === 0) return;
    await this.advance(this.position === null ? 0 : this.position - 1, -1);
  }

  async open(ref: PairRef): Promise<void> {
    const at = this.pairs.findIndex(
      (p) => p.postId === ref.postId && p.index === ref.index,
    );
    if (at < 0) return;
    const payload = await this.fetchPayload(ref);
    if (payload !== null) this.adopt(payload, at);
  }

  async reload(): Promise<void> {
    const ref = this.currentRef();
    if (ref !== null) await this.open(ref);
  }

  async save(): Promise<void> {
    if (this.session === null) return;
    const result = await this.session.save(this.api);
    if (result === "stale") {
      this.stale = true;
      return;
    }
    await this.reload();
  }

  async toggleDiff(curLocalId: number): Promise<void> {
    const session = this.session;
    if (session === null) return;
    if (session.diffs.has(curLocalId)) {
      session.diffs.delete(curLocalId);
      return;
    }
    const link = session.links.get(curLocalId);
    if (link === undefined || link.predLocalId === null) return;
    const payload = session.payload;
    const diff = await this.api.diff(
      payload.postId,
      `${payload.predVersion}.${link.predLocalId}`,
      `${payload.curVersion}.${curLocalId}`,
    );
    session.diffs.set(curLocalId, diff.ops);
  }

  // Fetches any pairs not seen yet so the completion indicator covers the
  // whole sample, then reports how many pairs carry a full set of decisions.
  async refreshCompletion(): Promise<{ settled: number; total: number }> {
    for (const ref of this.pairs) {
      if (this.settled.has(refKey(ref))) continue;
      const raw = await this.api.versionPair(ref.postId, ref.index);
      if (payloadProblem(raw) !== null) continue;
      const payload = raw as PairPayload;
      this.settled.set(refKey(ref), pairSettled(payload));
      this.autoOnly.set(refKey(ref), fullyAutoConnected(payload));
    }
    return this.completionSummary();
  }

  completionSummary(): { settled: number; total: number } {
    let done = 0;
    for (const ref of this.pairs) {
      if (this.settled.get(refKey(ref)) === true) done++;
    }
    return { settled: done, total: this.pairs.length };
  }
}
