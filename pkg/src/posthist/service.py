"""HTTP annotation service over a reconstructed corpus.

Endpoints:
- GET /posts: post ids with version counts.
- GET /posts/{id}/versions/{i}: blocks of versions i-1 and i, auto-connected
  pairs (equal content, same type, content unique within its type in both
  versions), stored connections for that pair, and the current file token.
- PUT /posts/{id}/connections: replaces the stored connections of one post.
  The request carries the last seen token; a stale token yields 409, as does
  any connection violating type or uniqueness invariants.
- GET /export: the full annotation CSV.
- GET /diff: line diff between two blocks of one post.

Corpus data is read-only; only the annotation CSV is written, atomically on
every PUT. The token is the SHA-256 of the current file bytes (empty input
when the file does not exist yet).
"""

from __future__ import annotations

import csv
import hashlib
import io
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .evaluate import GT_COLUMNS
from .linediff import line_diff
from .tables import atomic_write


class ConnectionIn(BaseModel):
    curVersion: int
    curLocalId: int
    predLocalId: int | None = None
    blockType: str
    comment: str = ""


class ConnectionsPut(BaseModel):
    token: str
    connections: list[ConnectionIn]


class _Store:
    """Annotation rows for all posts, persisted as one CSV file."""

    def __init__(self, path: Path):
        self.path = path
        self.lock = threading.Lock()
        self.rows: dict[tuple[int, int, int], dict] = {}
        self.token = self._file_token()
        if path.exists():
            self._load()

    def _file_token(self) -> str:
        data = self.path.read_bytes() if self.path.exists() else b""
        return hashlib.sha256(data).hexdigest()

    def _load(self) -> None:
        with open(self.path, encoding="utf-8", newline="") as fh:
            for row_no, row in enumerate(csv.reader(fh), start=1):
                if not row or (row_no == 1 and row[0] == "postId"):
                    continue
                post_id, cur_version, cur_local = int(row[0]), int(row[3]), int(row[4])
                self.rows[(post_id, cur_version, cur_local)] = {
                    "postId": post_id,
                    "curVersion": cur_version,
                    "curLocalId": cur_local,
                    "predLocalId": int(row[2]) if row[2].strip() else None,
                    "blockType": row[5],
                    "comment": row[6] if len(row) > 6 else "",
                }

    def csv_bytes(self) -> bytes:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(GT_COLUMNS)
        for key in sorted(self.rows):
            entry = self.rows[key]
            pred_local = entry["predLocalId"]
            writer.writerow(
                [
                    entry["postId"],
                    entry["curVersion"] - 1 if pred_local is not None else "",
                    pred_local if pred_local is not None else "",
                    entry["curVersion"],
                    entry["curLocalId"],
                    entry["blockType"],
                    entry["comment"],
                ]
            )
        return out.getvalue().encode("utf-8")

    def replace_post(self, post_id: int, entries: list[dict], token: str) -> str:
        with self.lock:
            if token != self.token:
                raise HTTPException(409, "stale token: annotations changed since last read")
            self.rows = {
                key: entry for key, entry in self.rows.items() if key[0] != post_id
            }
            for entry in entries:
                self.rows[(post_id, entry["curVersion"], entry["curLocalId"])] = entry
            atomic_write(self.path, self.csv_bytes().decode("utf-8"))
            self.token = self._file_token()
            return self.token

    def post_rows(self, post_id: int) -> list[dict]:
        with self.lock:
            return [dict(e) for k, e in sorted(self.rows.items()) if k[0] == post_id]

    def export(self) -> bytes:
        with self.lock:
            return self.csv_bytes()


def _block_payload(block) -> dict:
    return {
        "localId": block.local_id,
        "blockType": block.block_type,
        "content": block.content,
    }


def auto_connections(pred_blocks, cur_blocks) -> list[dict]:
    """Equal-content same-type pairs whose content is unique on both sides."""
    pairs = []
    for block_type in ("text", "code"):
        pred_of_type = [b for b in pred_blocks if b.block_type == block_type]
        cur_of_type = [b for b in cur_blocks if b.block_type == block_type]
        pred_counts: dict[str, int] = {}
        cur_counts: dict[str, int] = {}
        for b in pred_of_type:
            pred_counts[b.content] = pred_counts.get(b.content, 0) + 1
        for b in cur_of_type:
            cur_counts[b.content] = cur_counts.get(b.content, 0) + 1
        pred_by_content = {b.content: b for b in pred_of_type}
        for cur in cur_of_type:
            pred = pred_by_content.get(cur.content)
            if (
                pred is not None
                and pred_counts[cur.content] == 1
                and cur_counts[cur.content] == 1
            ):
                pairs.append(
                    {
                        "curLocalId": cur.local_id,
                        "predLocalId": pred.local_id,
                        "blockType": block_type,
                    }
                )
    pairs.sort(key=lambda p: p["curLocalId"])
    return pairs


def create_app(corpus: dict, annotations_path, sample_name: str = "sample") -> FastAPI:
    app = FastAPI(title="posthist annotator", version="1")
    store = _Store(Path(annotations_path))
    app.state.store = store
    app.state.sample_name = sample_name

    def get_versions(post_id: int):
        versions = corpus.get(post_id)
        if versions is None:
            raise HTTPException(404, f"unknown post {post_id}")
        return versions

    @app.get("/posts")
    def list_posts():
        return {
            "sample": sample_name,
            "posts": [
                {"postId": post_id, "versionCount": len(corpus[post_id])}
                for post_id in sorted(corpus)
            ],
        }

    @app.get("/posts/{post_id}/versions/{index}")
    def version_pair(post_id: int, index: int):
        versions = get_versions(post_id)
        if not 2 <= index <= len(versions):
            raise HTTPException(404, f"post {post_id} has no version pair ending at {index}")
        pred = versions[index - 2]
        cur = versions[index - 1]
        stored = [
            row for row in store.post_rows(post_id) if row["curVersion"] == index
        ]
        return {
            "postId": post_id,
            "predVersion": index - 1,
            "curVersion": index,
            "predBlocks": [_block_payload(b) for b in pred.blocks],
            "curBlocks": [_block_payload(b) for b in cur.blocks],
            "autoConnected": auto_connections(pred.blocks, cur.blocks),
            "connections": stored,
            "token": store.token,
        }

    @app.put("/posts/{post_id}/connections")
    def put_connections(post_id: int, payload: ConnectionsPut):
        versions = get_versions(post_id)
        entries = []
        seen_targets: set[tuple[int, int]] = set()
        claimed_preds: set[tuple[int, int, str]] = set()
        for conn in payload.connections:
            if conn.blockType not in ("text", "code"):
                raise HTTPException(409, f"unknown blockType {conn.blockType!r}")
            if not 2 <= conn.curVersion <= len(versions):
                raise HTTPException(
                    404, f"post {post_id} has no version pair ending at {conn.curVersion}"
                )
            cur_blocks = {b.local_id: b for b in versions[conn.curVersion - 1].blocks}
            cur = cur_blocks.get(conn.curLocalId)
            if cur is None:
                raise HTTPException(
                    409,
                    f"post {post_id} v{conn.curVersion} has no block {conn.curLocalId}",
                )
            if cur.block_type != conn.blockType:
                raise HTTPException(
                    409,
                    f"block {conn.curLocalId} is {cur.block_type}, connection says {conn.blockType}",
                )
            target = (conn.curVersion, conn.curLocalId)
            if target in seen_targets:
                raise HTTPException(409, f"duplicate connection for block {target}")
            seen_targets.add(target)
            if conn.predLocalId is not None:
                pred_blocks = {
                    b.local_id: b for b in versions[conn.curVersion - 2].blocks
                }
                pred = pred_blocks.get(conn.predLocalId)
                if pred is None:
                    raise HTTPException(
                        409,
                        f"post {post_id} v{conn.curVersion - 1} has no block {conn.predLocalId}",
                    )
                if pred.block_type != conn.blockType:
                    raise HTTPException(
                        409,
                        f"connection joins {conn.blockType} to {pred.block_type}",
                    )
                claim = (conn.curVersion, conn.predLocalId, conn.blockType)
                if claim in claimed_preds:
                    raise HTTPException(
                        409, f"predecessor {conn.predLocalId} claimed twice in v{conn.curVersion}"
                    )
                claimed_preds.add(claim)
            entries.append(
                {
                    "postId": post_id,
                    "curVersion": conn.curVersion,
                    "curLocalId": conn.curLocalId,
                    "predLocalId": conn.predLocalId,
                    "blockType": conn.blockType,
                    "comment": conn.comment,
                }
            )
        token = store.replace_post(post_id, entries, payload.token)
        return {"token": token, "stored": len(entries)}

    @app.get("/export")
    def export():
        return PlainTextResponse(store.export(), media_type="text/csv")

    @app.get("/diff")
    def diff(
        postId: int = Query(...),
        pred: str = Query(...),
        succ: str = Query(...),
    ):
        versions = get_versions(postId)

        def locate(ref: str, label: str):
            try:
                version_str, local_str = ref.split(".", 1)
                version_index = int(version_str)
                local_id = int(local_str)
            except ValueError:
                raise HTTPException(400, f"{label} must look like '2.1'") from None
            if not 1 <= version_index <= len(versions):
                raise HTTPException(404, f"post {postId} has no version {version_index}")
            blocks = {b.local_id: b for b in versions[version_index - 1].blocks}
            block = blocks.get(local_id)
            if block is None:
                raise HTTPException(
                    404, f"post {postId} v{version_index} has no block {local_id}"
                )
            return block

        a = locate(pred, "pred")
        b = locate(succ, "succ")
        return {
            "postId": postId,
            "pred": pred,
            "succ": succ,
            "ops": [{"op": op.op, "line": op.line} for op in line_diff(a.content, b.content)],
        }

    return app
