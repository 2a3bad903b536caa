"""Split a Markdown post body into alternating text and code blocks.

Code is recognized by six notations, checked per line in this priority order:
4-space (or tab) indentation, backtick fences, snippet regions
(``<!-- begin snippet -->`` ... ``<!-- end snippet -->``), language-tag
comments (``<!-- language: ... -->``), ``<pre><code>`` wrappers, and
``<script>`` tags. Inline backtick code stays inside text blocks. Marker
syntax is stripped from code content; adjacent blocks of one type are merged
so types alternate.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass

logger = logging.getLogger(__name__)

TEXT = "text"
CODE = "code"

_FENCE_OPEN = re.compile(r"^ {0,3}```")
_FENCE_CLOSE = re.compile(r"^ {0,3}```+\s*$")
_SNIPPET_BEGIN = re.compile(r"^\s*<!--\s*begin\s+snippet\b[^>]*-->\s*$", re.IGNORECASE)
_SNIPPET_END = re.compile(r"^\s*<!--\s*end\s+snippet\s*-->\s*$", re.IGNORECASE)
_LANGUAGE_TAG = re.compile(r"^\s*<!--\s*language(-all)?\s*:[^>]*-->\s*$", re.IGNORECASE)
_PRE_OPEN = re.compile(r"^\s{0,3}<pre\b[^>]*>", re.IGNORECASE)
_PRE_CLOSE = re.compile(r"</pre\s*>", re.IGNORECASE)
_SCRIPT_OPEN = re.compile(r"^\s{0,3}<script\b[^>]*>", re.IGNORECASE)
_SCRIPT_CLOSE = re.compile(r"</script\s*>", re.IGNORECASE)
_CODE_TAG_LEAD = re.compile(r"^\s*<code\b[^>]*>", re.IGNORECASE)
_CODE_TAG_TRAIL = re.compile(r"</code\s*>\s*$", re.IGNORECASE)


@dataclass
class PostBlockVersion:
    block_id: int
    post_id: int
    version_index: int
    local_id: int
    block_type: str
    content: str
    predecessor_block_id: int | None = None
    predecessor_local_id: int | None = None
    root_post_block_id: int | None = None
    pred_count: int = 0
    succ_count: int = 0
    matched_similarity: float | None = None
    matched_equal: bool = False

    @property
    def lines(self) -> list[str]:
        return self.content.split("\n")

    def reset_links(self) -> None:
        self.predecessor_block_id = None
        self.predecessor_local_id = None
        self.root_post_block_id = None
        self.pred_count = 0
        self.succ_count = 0
        self.matched_similarity = None
        self.matched_equal = False


def _is_blank(line: str) -> bool:
    return line.strip() == ""


def _is_indented(line: str) -> bool:
    return line.startswith("    ") or line.startswith("\t")


def _deindent(line: str) -> str:
    if line.startswith("    "):
        return line[4:]
    if line.startswith("\t"):
        return line[1:]
    return line


def _trim_blank_edges(lines: list[str]) -> list[str]:
    start = 0
    end = len(lines)
    while start < end and _is_blank(lines[start]):
        start += 1
    while end > start and _is_blank(lines[end - 1]):
        end -= 1
    return lines[start:end]


def extract_blocks(body: str) -> list[tuple[str, str]]:
    """Return the ordered (blockType, content) list for a Markdown body."""
    lines = [line[:-1] if line.endswith("\r") else line for line in body.split("\n")]
    segments: list[tuple[str, list[str]]] = []
    text_buf: list[str] = []
    i = 0
    n = len(lines)
    # True at the start of the body and right after a blank line or a code
    # region, where an indented line opens an indented code block.
    at_boundary = True

    def flush_text() -> None:
        nonlocal text_buf
        if text_buf:
            segments.append((TEXT, text_buf))
            text_buf = []

    while i < n:
        line = lines[i]

        if at_boundary and _is_indented(line) and not _is_blank(line):
            flush_text()
            code: list[str] = [_deindent(line)]
            i += 1
            while i < n:
                if _is_indented(lines[i]):
                    code.append(_deindent(lines[i]))
                    i += 1
                elif _is_blank(lines[i]):
                    # A blank run continues the block only when more indented
                    # lines follow.
                    j = i
                    while j < n and _is_blank(lines[j]):
                        j += 1
                    if j < n and _is_indented(lines[j]):
                        code.extend([""] * (j - i))
                        i = j
                    else:
                        break
                else:
                    break
            segments.append((CODE, code))
            at_boundary = True
            continue

        if _FENCE_OPEN.match(line):
            flush_text()
            i += 1
            code = []
            closed = False
            while i < n:
                if _FENCE_CLOSE.match(lines[i]):
                    closed = True
                    i += 1
                    break
                code.append(lines[i])
                i += 1
            if not closed:
                logger.warning("unterminated code fence; treating rest of body as code")
            segments.append((CODE, code))
            at_boundary = True
            continue

        if _SNIPPET_BEGIN.match(line):
            flush_text()
            i += 1
            code = []
            while i < n and not _SNIPPET_END.match(lines[i]):
                if not _LANGUAGE_TAG.match(lines[i]):
                    code.append(_deindent(lines[i]))
                i += 1
            if i < n:
                i += 1
            segments.append((CODE, _trim_blank_edges(code)))
            at_boundary = True
            continue

        if _LANGUAGE_TAG.match(line):
            flush_text()
            i += 1
            at_boundary = True
            continue

        if _PRE_OPEN.match(line):
            flush_text()
            first = _PRE_OPEN.sub("", line, count=1)
            first = _CODE_TAG_LEAD.sub("", first, count=1)
            code = []
            tail = None
            if _PRE_CLOSE.search(first):
                inner = _PRE_CLOSE.split(first, maxsplit=1)
                content_part = _CODE_TAG_TRAIL.sub("", inner[0].rstrip())
                if content_part:
                    code.append(content_part)
                tail = inner[1]
                i += 1
            else:
                if first:
                    code.append(first)
                i += 1
                while i < n:
                    if _PRE_CLOSE.search(lines[i]):
                        inner = _PRE_CLOSE.split(lines[i], maxsplit=1)
                        last = _CODE_TAG_TRAIL.sub("", inner[0].rstrip())
                        if last:
                            code.append(last)
                        tail = inner[1]
                        i += 1
                        break
                    code.append(lines[i])
                    i += 1
            if code:
                code[0] = _CODE_TAG_LEAD.sub("", code[0], count=1)
                code[-1] = _CODE_TAG_TRAIL.sub("", code[-1])
            segments.append((CODE, _trim_blank_edges(code)))
            if tail and tail.strip():
                text_buf.append(tail)
            at_boundary = True
            continue

        if _SCRIPT_OPEN.match(line):
            flush_text()
            first = _SCRIPT_OPEN.sub("", line, count=1)
            code = []
            tail = None
            if _SCRIPT_CLOSE.search(first):
                inner = _SCRIPT_CLOSE.split(first, maxsplit=1)
                if inner[0].strip():
                    code.append(inner[0])
                tail = inner[1]
                i += 1
            else:
                if first:
                    code.append(first)
                i += 1
                while i < n:
                    if _SCRIPT_CLOSE.search(lines[i]):
                        inner = _SCRIPT_CLOSE.split(lines[i], maxsplit=1)
                        if inner[0].strip():
                            code.append(inner[0])
                        tail = inner[1]
                        i += 1
                        break
                    code.append(lines[i])
                    i += 1
            segments.append((CODE, _trim_blank_edges(code)))
            if tail and tail.strip():
                text_buf.append(tail)
            at_boundary = True
            continue

        if _is_blank(line):
            at_boundary = True
            if text_buf:
                text_buf.append(line)
        else:
            at_boundary = False
            text_buf.append(line)
        i += 1

    flush_text()

    blocks: list[tuple[str, str]] = []
    for block_type, seg_lines in segments:
        seg_lines = _trim_blank_edges(seg_lines)
        content = "\n".join(seg_lines)
        if content.strip() == "":
            continue
        if blocks and blocks[-1][0] == block_type:
            blocks[-1] = (block_type, blocks[-1][1] + "\n\n" + content)
        else:
            blocks.append((block_type, content))
    return blocks


def blockify_version(version, first_block_id: int) -> int:
    """Fill version.blocks from its body; return the next free block id."""
    block_id = first_block_id
    blocks = []
    for local_id, (block_type, content) in enumerate(extract_blocks(version.body), 1):
        blocks.append(
            PostBlockVersion(
                block_id=block_id,
                post_id=version.post_id,
                version_index=version.version_index,
                local_id=local_id,
                block_type=block_type,
                content=content,
            )
        )
        block_id += 1
    version.blocks = blocks
    return block_id
