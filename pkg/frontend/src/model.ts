// Wire types mirroring the annotation service's JSON payloads, plus parsing
// helpers for the exported CSV. The service is the only data source; nothing
// here touches files.

export type BlockType = "text" | "code";

export const BLOCK_TYPES: readonly BlockType[] = ["text", "code"];

export interface Block {
  localId: number;
  blockType: BlockType;
  content: string;
}

export interface AutoLink {
  curLocalId: number;
  predLocalId: number;
  blockType: BlockType;
}

export interface StoredRow {
  postId: number;
  curVersion: number;
  curLocalId: number;
  predLocalId: number | null;
  blockType: BlockType;
  comment: string;
}

export interface PairPayload {
  postId: number;
  predVersion: number;
  curVersion: number;
  predBlocks: Block[];
  curBlocks: Block[];
  autoConnected: AutoLink[];
  connections: StoredRow[];
  token: string;
}

export interface PostEntry {
  postId: number;
  versionCount: number;
}

export interface PostList {
  sample: string;
  posts: PostEntry[];
}

export type DiffOpKind = "keep" | "insert" | "delete";

export interface DiffOp {
  op: DiffOpKind;
  line: string;
}

export interface DiffPayload {
  postId: number;
  pred: string;
  succ: string;
  ops: DiffOp[];
}

export interface ConnectionIn {
  curVersion: number;
  curLocalId: number;
  predLocalId: number | null;
  blockType: BlockType;
  comment: string;
}

function isBlockType(value: unknown): value is BlockType {
  return value === "text" || value === "code";
}

function isBlock(value: unknown): value is Block {
  if (typeof value !== "object" || value === null) return false;
  const b = value as Record<string, unknown>;
  return (
    typeof b.localId === "number" &&
    isBlockType(b.blockType) &&
    typeof b.content === "string"
  );
}

function isAutoLink(value: unknown): value is AutoLink {
  if (typeof value !== "object" || value === null) return false;
  const a = value as Record<string, unknown>;
  return (
    typeof a.curLocalId === "number" &&
    typeof a.predLocalId === "number" &&
    isBlockType(a.blockType)
  );
}

function isStoredRow(value: unknown): value is StoredRow {
  if (typeof value !== "object" || value === null) return false;
  const r = value as Record<string, unknown>;
  return (
    typeof r.curVersion === "number" &&
    typeof r.curLocalId === "number" &&
    (r.predLocalId === null || typeof r.predLocalId === "number") &&
    isBlockType(r.blockType) &&
    typeof r.comment === "string"
  );
}

// Returns a description of the first shape problem, or null when the payload
// is a usable version pair. A failed check must prevent any partial render.
export function payloadProblem(value: unknown): string | null {
  if (typeof value !== "object" || value === null) return "payload is not an object";
  const p = value as Record<string, unknown>;
  if (typeof p.postId !== "number") return "postId missing or not a number";
  if (typeof p.predVersion !== "number") return "predVersion missing or not a number";
  if (typeof p.curVersion !== "number") return "curVersion missing or not a number";
  if (p.curVersion !== p.predVersion + 1) return "versions are not adjacent";
  if (typeof p.token !== "string" || p.token.length === 0) return "token missing";
  for (const side of ["predBlocks", "curBlocks"] as const) {
    const blocks = p[side];
    if (!Array.isArray(blocks)) return `${side} missing or not an array`;
    if (!blocks.every(isBlock)) return `${side} contains a malformed block`;
  }
  if (!Array.isArray(p.autoConnected) || !p.autoConnected.every(isAutoLink)) {
    return "autoConnected missing or malformed";
  }
  if (!Array.isArray(p.connections) || !p.connections.every(isStoredRow)) {
    return "connections missing or malformed";
  }
  return null;
}

// Minimal RFC 4180 parser: quoted fields, doubled quotes, CRLF or LF rows.
// Comments in the export may contain commas and newlines, so splitting on
// delimiters alone is not enough.
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let quoted = false;
  let sawField = false;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (quoted) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i++;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch === '"') {
      quoted = true;
      sawField = true;
    } else if (ch === ",") {
      row.push(field);
      field = "";
      sawField = true;
    } else if (ch === "\n" || ch === "\r") {
      if (ch === "\r" && text[i + 1] === "\n") i++;
      if (sawField || field.length > 0) {
        row.push(field);
        rows.push(row);
      }
      row = [];
      field = "";
      sawField = false;
    } else {
      field += ch;
      sawField = true;
    }
  }
  if (sawField || field.length > 0) {
    row.push(field);
    rows.push(row);
  }
  return rows;
}

// Rows of the exported annotation CSV for one post. Header order:
// postId, predVersion, predLocalId, curVersion, curLocalId, blockType, comment.
export function rowsFromExport(csvText: string, postId: number): StoredRow[] {
  const rows: StoredRow[] = [];
  for (const [index, fields] of parseCsv(csvText).entries()) {
    if (index === 0 && fields[0] === "postId") continue;
    if (fields.length < 6) continue;
    const rowPost = Number(fields[0]);
    if (rowPost !== postId) continue;
    const predField = (fields[2] ?? "").trim();
    const blockType = fields[5];
    if (!isBlockType(blockType)) continue;
    rows.push({
      postId: rowPost,
      curVersion: Number(fields[3]),
      curLocalId: Number(fields[4]),
      predLocalId: predField === "" ? null : Number(predField),
      blockType,
      comment: fields[6] ?? "",
    });
  }
  return rows;
}
