"""Parse post-history records and assemble per-post version chains."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import tables

logger = logging.getLogger(__name__)

# History type ids that carry a full post body: initial body, edit body,
# rollback body. All other types are metadata events.
CONTENT_TYPE_IDS = frozenset({2, 5, 8})
INITIAL_BODY_TYPE_ID = 2


class IngestError(ValueError):
    """Malformed input record; carries the 1-based row number."""

    def __init__(self, row: int, message: str) -> None:
        super().__init__(f"row {row}: {message}")
        self.row = row


@dataclass(frozen=True)
class PostHistoryRecord:
    record_id: int
    post_id: int
    history_type_id: int
    creation_date: datetime
    user_id: int | None
    text: str

    @property
    def is_content(self) -> bool:
        return self.history_type_id in CONTENT_TYPE_IDS


@dataclass
class PostVersion:
    post_id: int
    version_index: int
    source_record_id: int
    creation_date: datetime
    editor_user_id: int | None
    body: str
    predecessor_index: int | None = None
    successor_index: int | None = None
    blocks: list = field(default_factory=list)


def parse_timestamp(value: str) -> datetime:
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    stamp = datetime.fromisoformat(text)
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.astimezone(timezone.utc)


def parse_post_history(lines: Iterable[str]) -> Iterator[PostHistoryRecord]:
    """Parse tab-separated history records.

    Fields: recordId, postId, historyTypeId, creationDate, userId (may be
    empty), body (tabs/newlines escaped). Records of unknown type are kept and
    logged; content-type records must carry a body.
    """
    for row_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if line.endswith("\r"):
            line = line[:-1]
        if not line:
            continue
        fields = tables.parse_row(line)
        if len(fields) != 6:
            raise IngestError(row_no, f"expected 6 fields, found {len(fields)}")
        try:
            record_id = int(fields[0])
            post_id = int(fields[1])
            type_id = int(fields[2])
        except ValueError as exc:
            raise IngestError(row_no, f"non-integer id field: {exc}") from None
        try:
            stamp = parse_timestamp(fields[3])
        except ValueError:
            raise IngestError(row_no, f"bad creationDate {fields[3]!r}") from None
        user_field = fields[4].strip()
        try:
            user_id = int(user_field) if user_field else None
        except ValueError:
            raise IngestError(row_no, f"bad userId {fields[4]!r}") from None
        body = fields[5]
        record = PostHistoryRecord(record_id, post_id, type_id, stamp, user_id, body)
        if record.is_content and body == "":
            raise IngestError(row_no, "missing body")
        if not record.is_content:
            logger.debug("row %d: non-content history type %d kept", row_no, type_id)
        yield record


def read_post_history(path) -> list[PostHistoryRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(parse_post_history(fh))


def build_version_chains(
    records: Iterable[PostHistoryRecord],
) -> dict[int, list[PostVersion]]:
    """Group content records into ordered, linked version chains per post.

    Ordering is by creationDate, ties broken by recordId. Posts whose first
    record is not an initial-body record are kept with a warning.
    """
    by_post: dict[int, list[PostHistoryRecord]] = {}
    for record in records:
        if not record.is_content:
            continue
        by_post.setdefault(record.post_id, []).append(record)

    chains: dict[int, list[PostVersion]] = {}
    for post_id in sorted(by_post):
        group = sorted(by_post[post_id], key=lambda r: (r.creation_date, r.record_id))
        if group[0].history_type_id != INITIAL_BODY_TYPE_ID:
            logger.warning(
                "post %d: first content record %d has type %d, not an initial body",
                post_id,
                group[0].record_id,
                group[0].history_type_id,
            )
        versions = [
            PostVersion(
                post_id=post_id,
                version_index=index,
                source_record_id=record.record_id,
                creation_date=record.creation_date,
                editor_user_id=record.user_id,
                body=record.text,
            )
            for index, record in enumerate(group, start=1)
        ]
        for version in versions:
            if version.version_index > 1:
                version.predecessor_index = version.version_index - 1
            if version.version_index < len(versions):
                version.successor_index = version.version_index + 1
        chains[post_id] = versions
    return chains
