"""Deterministic synthetic corpora with known edit scripts.

Posts are built from persistent blocks (each with a stable identity), so the
true predecessor connections across versions are known by construction. Every
block draws its wording from a large shared vocabulary, which keeps unrelated
blocks dissimilar while small edits keep a block close to its previous
content. Bodies render text blocks as paragraphs and code blocks as 4-space
indented lines, with block types alternating.

Edit profiles:
- "stable": in-place content edits plus appends/removals at the end of the
  post, so every surviving block keeps its local id.
- "structural": additionally inserts/deletes adjacent block pairs inside the
  post and swaps same-type blocks, shifting and permuting local ids.
"""

from __future__ import annotations

import csv
import io
import random
import string
from dataclasses import dataclass, field
from datetime import datetime, timedelta

from . import tables

_VOCAB_SIZE = 3000


def _build_vocab(rng: random.Random) -> list[str]:
    words = set()
    while len(words) < _VOCAB_SIZE:
        length = rng.randint(4, 9)
        words.add("".join(rng.choice(string.ascii_lowercase) for _ in range(length)))
    return sorted(words)


@dataclass
class _Block:
    uid: int
    block_type: str
    content: str


@dataclass
class SyntheticCorpus:
    post_lines: list[str]
    gt_rows: list[list[str]] = field(default_factory=list)
    comment_rows: list[list[str]] = field(default_factory=list)

    def posts_tsv(self) -> str:
        return "".join(line + "\n" for line in self.post_lines)

    def gt_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["postId", "predVersion", "predLocalId", "curVersion", "curLocalId", "blockType", "comment"]
        )
        writer.writerows(self.gt_rows)
        return out.getvalue()

    def comments_tsv(self) -> str:
        return "".join("\t".join(row) + "\n" for row in self.comment_rows)


class _Generator:
    def __init__(self, rng: random.Random, vocab: list[str]) -> None:
        self.rng = rng
        self.vocab = vocab
        self.next_uid = 1

    def _words(self, count: int) -> list[str]:
        return [self.rng.choice(self.vocab) for _ in range(count)]

    def _text_content(self) -> str:
        lines = []
        for _ in range(self.rng.randint(1, 3)):
            lines.append(" ".join(self._words(self.rng.randint(8, 16))))
        return "\n".join(lines)

    def _code_content(self) -> str:
        lines = []
        for _ in range(self.rng.randint(4, 9)):
            name, func, arg = self._words(3)
            lines.append(f"{name} = {func}({arg}, {self.rng.randint(0, 99)});")
        return "\n".join(lines)

    def new_block(self, block_type: str) -> _Block:
        content = self._text_content() if block_type == "text" else self._code_content()
        block = _Block(self.next_uid, block_type, content)
        self.next_uid += 1
        return block

    def modify(self, block: _Block) -> None:
        lines = block.content.split("\n")
        idx = self.rng.randrange(len(lines))
        if block.block_type == "code":
            name, func, arg = self._words(3)
            lines[idx] = f"{name} = {func}({arg}, {self.rng.randint(0, 99)});"
        else:
            words = lines[idx].split()
            for _ in range(self.rng.randint(1, 2)):
                words[self.rng.randrange(len(words))] = self.rng.choice(self.vocab)
            lines[idx] = " ".join(words)
        block.content = "\n".join(lines)


def _render(blocks: list[_Block]) -> str:
    parts = []
    for block in blocks:
        if block.block_type == "text":
            parts.append(block.content)
        else:
            parts.append("\n".join("    " + line for line in block.content.split("\n")))
    return "\n\n".join(parts)


def _apply_ops(gen: _Generator, blocks: list[_Block], structural: bool) -> list[_Block]:
    rng = gen.rng
    blocks = [_Block(b.uid, b.block_type, b.content) for b in blocks]
    ops = ["modify", "modify", "modify", "append", "trim"]
    if structural:
        ops += ["insert_pair", "delete_pair", "swap"]
    for _ in range(rng.randint(1, 3)):
        op = rng.choice(ops)
        if op == "modify":
            gen.modify(rng.choice(blocks))
        elif op == "append":
            tail_type = blocks[-1].block_type
            new_type = "code" if tail_type == "text" else "text"
            blocks.append(gen.new_block(new_type))
        elif op == "trim":
            if len(blocks) > 2:
                blocks.pop()
        elif op == "insert_pair":
            slot = rng.randint(0, len(blocks))
            if slot == 0:
                first_type = blocks[0].block_type
                pair = [
                    gen.new_block(first_type),
                    gen.new_block("code" if first_type == "text" else "text"),
                ]
            else:
                left_type = blocks[slot - 1].block_type
                pair_first = "code" if left_type == "text" else "text"
                pair = [gen.new_block(pair_first), gen.new_block(left_type)]
                if slot < len(blocks) and blocks[slot].block_type == pair[-1].block_type:
                    # Cannot happen with strict alternation; guard anyway.
                    continue
            blocks[slot:slot] = pair
        elif op == "delete_pair":
            if len(blocks) >= 4:
                start = rng.randrange(len(blocks) - 1)
                del blocks[start : start + 2]
        elif op == "swap":
            by_type: dict[str, list[int]] = {}
            for idx, block in enumerate(blocks):
                by_type.setdefault(block.block_type, []).append(idx)
            candidates = [v for v in by_type.values() if len(v) >= 2]
            if candidates:
                positions = rng.choice(candidates)
                i, j = rng.sample(positions, 2)
                blocks[i], blocks[j] = blocks[j], blocks[i]
    return blocks


_GAP_CHOICES = [
    (0, 23, 50),        # same day, in hours
    (1, 7, 25),         # days
    (8, 365, 20),
    (366, 900, 5),
]


def _next_date(rng: random.Random, current: datetime) -> datetime:
    roll = rng.randint(1, 100)
    acc = 0
    for low, high, weight in _GAP_CHOICES:
        acc += weight
        if roll <= acc:
            if low == 0:
                return current + timedelta(hours=rng.randint(1, high), minutes=rng.randint(0, 59))
            return current + timedelta(days=rng.randint(low, high), hours=rng.randint(0, 23))
    return current + timedelta(days=400)


def _stamp(moment: datetime) -> str:
    return moment.strftime("%Y-%m-%dT%H:%M:%S")


def make_corpus(
    seed: int,
    n_posts: int,
    min_versions: int = 3,
    max_versions: int = 3,
    profile: str = "stable",
    with_comments: bool = False,
    first_post_id: int = 1,
) -> SyntheticCorpus:
    rng = random.Random(seed)
    vocab = _build_vocab(rng)
    corpus = SyntheticCorpus(post_lines=[])
    record_id = 1
    next_user = 1000

    for post_id in range(first_post_id, first_post_id + n_posts):
        gen = _Generator(rng, vocab)
        author = next_user
        next_user += rng.randint(1, 3)
        n_versions = rng.randint(min_versions, max_versions)
        n_blocks = rng.randint(2, 5)
        first_type = rng.choice(["text", "code"])
        blocks = []
        for idx in range(n_blocks):
            block_type = first_type if idx % 2 == 0 else ("code" if first_type == "text" else "text")
            blocks.append(gen.new_block(block_type))

        moment = datetime(2019, 1, 1) + timedelta(
            days=rng.randint(0, 700), hours=rng.randint(0, 23), minutes=rng.randint(0, 59)
        )
        snapshots = [blocks]
        dates = [moment]
        for _ in range(n_versions - 1):
            blocks = _apply_ops(gen, blocks, structural=profile == "structural")
            moment = _next_date(rng, moment)
            snapshots.append(blocks)
            dates.append(moment)

        for version_index, (snapshot, date) in enumerate(zip(snapshots, dates), start=1):
            type_id = 2 if version_index == 1 else (8 if rng.random() < 0.02 else 5)
            editor = author if version_index == 1 or rng.random() < 0.8 else author + 7919
            if rng.random() < 0.03:
                editor_field = ""
            else:
                editor_field = str(editor)
            body = _render(snapshot)
            corpus.post_lines.append(
                "\t".join(
                    [
                        str(record_id),
                        str(post_id),
                        str(type_id),
                        _stamp(date),
                        editor_field,
                        tables.escape_field(body),
                    ]
                )
            )
            record_id += 1

        for version_index in range(2, len(snapshots) + 1):
            prev_snapshot = snapshots[version_index - 2]
            cur_snapshot = snapshots[version_index - 1]
            prev_locals = {b.uid: idx + 1 for idx, b in enumerate(prev_snapshot)}
            for cur_local, block in enumerate(cur_snapshot, start=1):
                pred_local = prev_locals.get(block.uid)
                if pred_local is None:
                    corpus.gt_rows.append(
                        [str(post_id), "", "", str(version_index), str(cur_local), block.block_type, "added"]
                    )
                else:
                    corpus.gt_rows.append(
                        [
                            str(post_id),
                            str(version_index - 1),
                            str(pred_local),
                            str(version_index),
                            str(cur_local),
                            block.block_type,
                            "",
                        ]
                    )

        if with_comments:
            for _ in range(rng.randint(0, 4)):
                anchor = rng.choice(dates)
                offset = timedelta(
                    hours=rng.randint(0, 72) * rng.choice([-1, 1]), minutes=rng.randint(0, 59)
                )
                when = max(dates[0], anchor + offset)
                corpus.comment_rows.append(
                    [str(post_id), _stamp(when), str(author + rng.randint(0, 5))]
                )

    return corpus
