"""End-to-end reconstruction: records -> versions -> blocks -> links -> tables.

Table formats (tab-separated, UTF-8, header row, escaping as in tables.py):
- PostVersion.tsv: postId, versionIndex, sourceRecordId, creationDate,
  editorUserId, predecessorIndex, successorIndex
- PostBlockVersion.tsv: blockId, postId, versionIndex, localId, blockType,
  predecessorBlockId, rootPostBlockId, predCount, succCount,
  matchedSimilarity (EQUAL, a float, or empty), content
- PostBlockDiff.tsv: predBlockId, succBlockId, opIndex, op, line
- PostVersionUrl.tsv: postId, versionIndex, blockLocalId, url, position

Reconstruction is deterministic: the same input bytes produce the same output
bytes.
"""

from __future__ import annotations

import logging
from pathlib import Path

from . import tables
from .blockify import PostBlockVersion, blockify_version
from .ingest import PostVersion, build_version_chains, parse_timestamp, read_post_history
from .links import PostVersionUrl, extract_urls
from .matcher import MetricConfiguration, block_diffs, match_versions

logger = logging.getLogger(__name__)

POST_VERSION_COLUMNS = (
    "postId",
    "versionIndex",
    "sourceRecordId",
    "creationDate",
    "editorUserId",
    "predecessorIndex",
    "successorIndex",
)
POST_BLOCK_COLUMNS = (
    "blockId",
    "postId",
    "versionIndex",
    "localId",
    "blockType",
    "predecessorBlockId",
    "rootPostBlockId",
    "predCount",
    "succCount",
    "matchedSimilarity",
    "content",
)
DIFF_COLUMNS = ("predBlockId", "succBlockId", "opIndex", "op", "line")
URL_COLUMNS = ("postId", "versionIndex", "blockLocalId", "url", "position")

EQUAL_SENTINEL = "EQUAL"


def reconstruct(records, config: MetricConfiguration) -> dict[int, list[PostVersion]]:
    """Build matched version chains for every post in the record stream."""
    corpus = build_version_chains(list(records))
    next_block_id = 1
    for post_id in sorted(corpus):
        for version in corpus[post_id]:
            next_block_id = blockify_version(version, next_block_id)
    for post_id in sorted(corpus):
        match_versions(corpus[post_id], config)
    return corpus


def reconstruct_file(path, config: MetricConfiguration) -> dict[int, list[PostVersion]]:
    return reconstruct(read_post_history(path), config)


def version_urls(corpus: dict[int, list[PostVersion]]) -> list[PostVersionUrl]:
    urls = []
    for post_id in sorted(corpus):
        for version in corpus[post_id]:
            for block in version.blocks:
                if block.block_type != "text":
                    continue
                for url, position in extract_urls(block.content):
                    urls.append(
                        PostVersionUrl(post_id, version.version_index, block.local_id, url, position)
                    )
    return urls


def _similarity_field(block: PostBlockVersion) -> str:
    if block.predecessor_block_id is None:
        return ""
    if block.matched_equal:
        return EQUAL_SENTINEL
    return repr(block.matched_similarity)


def write_tables(out_dir, corpus: dict[int, list[PostVersion]]) -> None:
    out = Path(out_dir)
    posts = [corpus[post_id] for post_id in sorted(corpus)]

    version_rows = [list(POST_VERSION_COLUMNS)]
    block_rows = [list(POST_BLOCK_COLUMNS)]
    diff_rows = [list(DIFF_COLUMNS)]
    url_rows = [list(URL_COLUMNS)]

    block_by_id = {}
    for versions in posts:
        for version in versions:
            version_rows.append(
                [
                    str(version.post_id),
                    str(version.version_index),
                    str(version.source_record_id),
                    version.creation_date.isoformat(),
                    "" if version.editor_user_id is None else str(version.editor_user_id),
                    "" if version.predecessor_index is None else str(version.predecessor_index),
                    "" if version.successor_index is None else str(version.successor_index),
                ]
            )
            for block in version.blocks:
                block_by_id[block.block_id] = block
                block_rows.append(
                    [
                        str(block.block_id),
                        str(block.post_id),
                        str(block.version_index),
                        str(block.local_id),
                        block.block_type,
                        ""
                        if block.predecessor_block_id is None
                        else str(block.predecessor_block_id),
                        str(block.root_post_block_id),
                        str(block.pred_count),
                        str(block.succ_count),
                        _similarity_field(block),
                        block.content,
                    ]
                )

    for versions in posts:
        for diff in block_diffs(versions):
            for op_index, op in enumerate(diff.ops):
                diff_rows.append(
                    [
                        str(diff.pred_block_id),
                        str(diff.succ_block_id),
                        str(op_index),
                        op.op,
                        op.line,
                    ]
                )

    for url in version_urls(corpus):
        url_rows.append(
            [
                str(url.post_id),
                str(url.version_index),
                str(url.block_local_id),
                url.url,
                str(url.position),
            ]
        )

    tables.write_rows(out / "PostVersion.tsv", version_rows)
    tables.write_rows(out / "PostBlockVersion.tsv", block_rows)
    tables.write_rows(out / "PostBlockDiff.tsv", diff_rows)
    tables.write_rows(out / "PostVersionUrl.tsv", url_rows)


class TableError(ValueError):
    def __init__(self, path, row_no: int, message: str):
        super().__init__(f"{path}:{row_no}: {message}")
        self.path = path
        self.row_no = row_no


def _parse_optional_int(field: str) -> int | None:
    return int(field) if field else None


def read_tables(in_dir) -> dict[int, list[PostVersion]]:
    """Rebuild a matched corpus from written tables (inverse of write_tables).

    The diff and URL tables are derivable from block contents and are not
    needed to rebuild the in-memory corpus.
    """
    src = Path(in_dir)
    corpus: dict[int, list[PostVersion]] = {}
    versions_by_key: dict[tuple[int, int], PostVersion] = {}

    path = src / "PostVersion.tsv"
    rows = tables.read_rows(path)
    for row_no, row in enumerate(rows, start=1):
        if row_no == 1:
            if row != list(POST_VERSION_COLUMNS):
                raise TableError(path, row_no, "unexpected header")
            continue
        if len(row) != len(POST_VERSION_COLUMNS):
            raise TableError(path, row_no, f"expected {len(POST_VERSION_COLUMNS)} fields")
        try:
            version = PostVersion(
                post_id=int(row[0]),
                version_index=int(row[1]),
                source_record_id=int(row[2]),
                creation_date=parse_timestamp(row[3]),
                editor_user_id=_parse_optional_int(row[4]),
                body="",
            )
            version.predecessor_index = _parse_optional_int(row[5])
            version.successor_index = _parse_optional_int(row[6])
        except ValueError as exc:
            raise TableError(path, row_no, str(exc)) from None
        corpus.setdefault(version.post_id, []).append(version)
        versions_by_key[(version.post_id, version.version_index)] = version

    for versions in corpus.values():
        versions.sort(key=lambda v: v.version_index)
        for position, version in enumerate(versions, start=1):
            if version.version_index != position:
                raise TableError(path, 0, f"post {version.post_id} version indexes not contiguous")

    path = src / "PostBlockVersion.tsv"
    blocks_by_id: dict[int, PostBlockVersion] = {}
    for row_no, row in enumerate(tables.read_rows(path), start=1):
        if row_no == 1:
            if row != list(POST_BLOCK_COLUMNS):
                raise TableError(path, row_no, "unexpected header")
            continue
        if len(row) != len(POST_BLOCK_COLUMNS):
            raise TableError(path, row_no, f"expected {len(POST_BLOCK_COLUMNS)} fields")
        try:
            block = PostBlockVersion(
                block_id=int(row[0]),
                post_id=int(row[1]),
                version_index=int(row[2]),
                local_id=int(row[3]),
                block_type=row[4],
                content=row[10],
            )
            block.predecessor_block_id = _parse_optional_int(row[5])
            block.root_post_block_id = int(row[6])
            block.pred_count = int(row[7])
            block.succ_count = int(row[8])
        except ValueError as exc:
            raise TableError(path, row_no, str(exc)) from None
        if block.block_type not in ("text", "code"):
            raise TableError(path, row_no, f"unknown blockType {row[4]!r}")
        similarity = row[9]
        if similarity == EQUAL_SENTINEL:
            block.matched_equal = True
            block.matched_similarity = None
        elif similarity:
            block.matched_similarity = float(similarity)
        key = (block.post_id, block.version_index)
        if key not in versions_by_key:
            raise TableError(path, row_no, f"block for unknown version {key}")
        versions_by_key[key].blocks.append(block)
        blocks_by_id[block.block_id] = block

    for versions in corpus.values():
        for version in versions:
            version.blocks.sort(key=lambda b: b.local_id)
            version.body = "\n\n".join(b.content for b in version.blocks)
    for block in blocks_by_id.values():
        if block.predecessor_block_id is not None:
            pred = blocks_by_id.get(block.predecessor_block_id)
            if pred is None:
                raise TableError(path, 0, f"dangling predecessor {block.predecessor_block_id}")
            block.predecessor_local_id = pred.local_id
    return corpus
