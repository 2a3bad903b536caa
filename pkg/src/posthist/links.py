"""URL extraction, sharing-link normalization, and source-tree scanning."""

from __future__ import annotations

import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path

logger = logging.getLogger(__name__)

# General URL pattern: scheme plus non-whitespace, trailing punctuation
# stripped afterwards.
_URL = re.compile(r"https?://\S+", re.IGNORECASE)
_TRAILING_PUNCT = ".,;:)]}\"'"

# Scan pattern for candidate post links, applied per line. The character
# class excludes '.', so paths are truncated at the first dot; sharing-style
# /q/<id> and /a/<id> links survive intact. Kept as-is for comparability of
# scan results.
SO_LINK_PATTERN = re.compile(r"https?://stackoverflow\.com/[^\s)\.\"]*", re.IGNORECASE)

_SHARE = re.compile(r"^/(q|a)/(\d+)(?:/|$)")
_QUESTIONS = re.compile(r"^/questions/(\d+)(?:/([^/]*))?(?:/(\d+))?/?$")
_FRAGMENT_ANSWER = re.compile(r"^(?:answer-)?(\d+)$")


@dataclass(frozen=True)
class PostVersionUrl:
    post_id: int
    version_index: int
    block_local_id: int
    url: str
    position: int


@dataclass(frozen=True)
class PostReferenceGH:
    repo_name: str
    branch_filepath: str
    line_number: int
    raw_url: str
    sharing_link: str
    post_id: int
    post_kind: str


def extract_urls(content: str) -> list[tuple[str, int]]:
    """Every URL in a text block with its character offset, in order."""
    out = []
    for match in _URL.finditer(content):
        url = match.group(0).rstrip(_TRAILING_PUNCT)
        if url:
            out.append((url, match.start()))
    return out


def normalize_so_link(url: str) -> tuple[str, int, str] | None:
    """(sharingLink, postId, kind) for post URLs; None for anything else.

    /q/<id> and /questions/<id>/... map to questions; /a/<id>, an answer id
    path segment, or an answer fragment map to answers. User, tag, and other
    links yield None.
    """
    match = re.match(
        r"(?i)https?://(?:www\.)?stackoverflow\.com(/[^#?]*)(?:\?[^#]*)?(?:#(.*))?$",
        url.strip(),
    )
    if not match:
        return None
    path = match.group(1)
    fragment = match.group(2) or ""

    share = _SHARE.match(path)
    if share:
        kind = "question" if share.group(1) == "q" else "answer"
        post_id = int(share.group(2))
        return (f"https://stackoverflow.com/{share.group(1)}/{post_id}", post_id, kind)

    questions = _QUESTIONS.match(path)
    if questions:
        frag_answer = _FRAGMENT_ANSWER.match(fragment)
        if questions.group(3):
            answer_id = int(questions.group(3))
            return (f"https://stackoverflow.com/a/{answer_id}", answer_id, "answer")
        if frag_answer:
            answer_id = int(frag_answer.group(1))
            return (f"https://stackoverflow.com/a/{answer_id}", answer_id, "answer")
        question_id = int(questions.group(1))
        return (f"https://stackoverflow.com/q/{question_id}", question_id, "question")
    return None


def scan_lines(
    repo_name: str, filepath: str, lines
) -> list[PostReferenceGH]:
    out = []
    for line_number, line in enumerate(lines, start=1):
        for match in SO_LINK_PATTERN.finditer(line):
            raw = match.group(0)
            normalized = normalize_so_link(raw)
            if normalized is None:
                continue
            sharing, post_id, kind = normalized
            out.append(
                PostReferenceGH(
                    repo_name=repo_name,
                    branch_filepath=filepath,
                    line_number=line_number,
                    raw_url=raw,
                    sharing_link=sharing,
                    post_id=post_id,
                    post_kind=kind,
                )
            )
    return out


def scan_files(file_stream) -> list[PostReferenceGH]:
    """Scan (repoName, filepath, lines) triples for post references."""
    out: list[PostReferenceGH] = []
    for repo_name, filepath, lines in file_stream:
        out.extend(scan_lines(repo_name, filepath, lines))
    return out


def _looks_binary(chunk: bytes) -> bool:
    return b"\x00" in chunk


def scan_tree(root: str | os.PathLike[str]) -> list[PostReferenceGH]:
    """Scan every readable text file under root, in sorted path order."""
    root_path = Path(root)
    repo_name = root_path.resolve().name
    out: list[PostReferenceGH] = []
    for path in sorted(p for p in root_path.rglob("*") if p.is_file()):
        rel = path.relative_to(root_path).as_posix()
        try:
            with open(path, "rb") as fh:
                head = fh.read(8192)
            if _looks_binary(head):
                continue
            with open(path, encoding="utf-8", errors="replace") as fh:
                out.extend(scan_lines(repo_name, rel, fh))
        except OSError as exc:
            logger.warning("skipping unreadable file %s: %s", path, exc)
    return out
