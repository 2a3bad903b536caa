"""Link post block versions to predecessors in the previous version.

Per version transition, candidate predecessors are computed per block type:
content-equal candidates dominate; otherwise the configured metric (with a
backup for too-short inputs) scores non-equal same-type pairs and candidates
at the maximal passing score remain. Linking then proceeds in three passes:
unique candidates first, then context (matched neighbors above and below,
then below only, then above only, each looped until no change), then nearest
local id with ties to the smaller id. Every predecessor is claimed by at most
one successor.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import metrics
from .blockify import PostBlockVersion
from .linediff import DiffOp, line_diff
from .metrics import TooShortError

BOTH = "both"
BELOW = "below"
ABOVE = "above"


@dataclass(frozen=True)
class MetricConfiguration:
    name: str
    text_metric: str
    text_threshold: float
    code_metric: str
    code_threshold: float
    text_backup: str | None = None
    text_backup_threshold: float = 0.0
    code_backup: str | None = None
    code_backup_threshold: float = 0.0

    def for_type(self, block_type: str) -> tuple[str, float, str | None, float]:
        if block_type == "text":
            return (
                self.text_metric,
                self.text_threshold,
                self.text_backup,
                self.text_backup_threshold,
            )
        return (
            self.code_metric,
            self.code_threshold,
            self.code_backup,
            self.code_backup_threshold,
        )


PAPER_FINAL = MetricConfiguration(
    name="paper-final",
    text_metric="manhattanFourGramNormalized",
    text_threshold=0.17,
    code_metric="winnowingFourGramDiceNormalized",
    code_threshold=0.23,
    text_backup="cosineTokenNormalizedTermFrequency",
    text_backup_threshold=0.36,
    code_backup="cosineTokenNormalizedTermFrequency",
    code_backup_threshold=0.26,
)

EQUAL_BASELINE = MetricConfiguration(
    name="equal-baseline",
    text_metric="equal",
    text_threshold=1.0,
    code_metric="equal",
    code_threshold=1.0,
)

PRESETS = {cfg.name: cfg for cfg in (PAPER_FINAL, EQUAL_BASELINE)}


@dataclass
class CandidateSet:
    block: PostBlockVersion
    pred_equal: list[int]
    pred_sim: list[int]
    max_sim: float
    pred: list[int]


@dataclass
class PostBlockLifespan:
    root_post_block_id: int
    members: list[PostBlockVersion]


@dataclass
class PostBlockDiff:
    pred_block_id: int
    succ_block_id: int
    ops: list[DiffOp]


def _pair_score(
    config: MetricConfiguration, block_type: str, a: str, b: str
) -> tuple[float, float]:
    """(similarity, threshold in force) for a non-equal same-type pair."""
    metric, threshold, backup, backup_threshold = config.for_type(block_type)
    try:
        return metrics.resolve(metric)(a, b), threshold
    except TooShortError:
        if backup is not None:
            try:
                return metrics.resolve(backup)(a, b), backup_threshold
            except TooShortError:
                pass
        # Both metrics rejected the pair; the contents are known unequal.
        return 0.0, threshold


@dataclass
class _Transition:
    prev_blocks: list[PostBlockVersion]
    cur_blocks: list[PostBlockVersion]
    pred_sets: dict[int, list[int]] = field(default_factory=dict)
    succ_sets: dict[int, list[int]] = field(default_factory=dict)
    equal_pairs: set[tuple[int, int]] = field(default_factory=set)
    scores: dict[tuple[int, int], float] = field(default_factory=dict)
    max_sims: dict[int, float] = field(default_factory=dict)
    claimed: set[int] = field(default_factory=set)


def _build_transition(
    prev_blocks: list[PostBlockVersion],
    cur_blocks: list[PostBlockVersion],
    config: MetricConfiguration,
) -> _Transition:
    tr = _Transition(prev_blocks, cur_blocks)
    passing: dict[tuple[int, int], float] = {}
    for block_type in ("text", "code"):
        prevs = [p for p in prev_blocks if p.block_type == block_type]
        curs = [c for c in cur_blocks if c.block_type == block_type]
        for p in prevs:
            for c in curs:
                key = (p.local_id, c.local_id)
                if p.content == c.content:
                    tr.equal_pairs.add(key)
                    continue
                score, threshold = _pair_score(config, block_type, p.content, c.content)
                tr.scores[key] = score
                if score >= threshold:
                    passing[key] = score

        for c in curs:
            equal = [p.local_id for p in prevs if (p.local_id, c.local_id) in tr.equal_pairs]
            scored = {
                p.local_id: passing[(p.local_id, c.local_id)]
                for p in prevs
                if (p.local_id, c.local_id) in passing
            }
            max_sim = max(scored.values(), default=0.0)
            sim = sorted(l for l, s in scored.items() if s == max_sim) if scored else []
            tr.max_sims[c.local_id] = max_sim
            tr.pred_sets[c.local_id] = equal if equal else sim
        for p in prevs:
            equal = [c.local_id for c in curs if (p.local_id, c.local_id) in tr.equal_pairs]
            scored = {
                c.local_id: passing[(p.local_id, c.local_id)]
                for c in curs
                if (p.local_id, c.local_id) in passing
            }
            max_sim = max(scored.values(), default=0.0)
            sim = sorted(l for l, s in scored.items() if s == max_sim) if scored else []
            tr.succ_sets[p.local_id] = equal if equal else sim

    for c in cur_blocks:
        c.pred_count = len(tr.pred_sets[c.local_id])
    for p in prev_blocks:
        p.succ_count = len(tr.succ_sets[p.local_id])
    return tr


def compute_candidates(
    prev_blocks: list[PostBlockVersion],
    block: PostBlockVersion,
    config: MetricConfiguration,
) -> CandidateSet:
    """Candidate predecessors of one block, before any claiming."""
    prevs = [p for p in prev_blocks if p.block_type == block.block_type]
    equal = [p.local_id for p in prevs if p.content == block.content]
    scored: dict[int, float] = {}
    for p in prevs:
        if p.content == block.content:
            continue
        score, threshold = _pair_score(config, block.block_type, p.content, block.content)
        if score >= threshold:
            scored[p.local_id] = score
    max_sim = max(scored.values(), default=0.0)
    sim = sorted(l for l, s in scored.items() if s == max_sim) if scored else []
    return CandidateSet(
        block=block,
        pred_equal=equal,
        pred_sim=sim,
        max_sim=max_sim,
        pred=equal if equal else sim,
    )


def _link(tr: _Transition, block: PostBlockVersion, pred_local: int) -> None:
    pred = next(p for p in tr.prev_blocks if p.local_id == pred_local)
    block.predecessor_block_id = pred.block_id
    block.predecessor_local_id = pred.local_id
    if (pred_local, block.local_id) in tr.equal_pairs:
        block.matched_equal = True
        block.matched_similarity = None
    else:
        block.matched_equal = False
        block.matched_similarity = tr.scores[(pred_local, block.local_id)]
    tr.claimed.add(pred_local)


def _available(tr: _Transition, local_id: int) -> list[int]:
    return [l for l in tr.pred_sets[local_id] if l not in tr.claimed]


def _set_pred_context(tr: _Transition, mode: str) -> bool:
    by_local = {b.local_id: b for b in tr.cur_blocks}
    prev_by_local = {p.local_id: p for p in tr.prev_blocks}
    changed = False
    for block in tr.cur_blocks:
        if block.predecessor_local_id is not None:
            continue
        above = by_local.get(block.local_id - 1)
        below = by_local.get(block.local_id + 1)
        target: int | None = None
        if mode in (BOTH, ABOVE):
            if above is None or above.predecessor_local_id is None:
                continue
            target = above.predecessor_local_id + 1
        if mode in (BOTH, BELOW):
            if below is None or below.predecessor_local_id is None:
                continue
            below_target = below.predecessor_local_id - 1
            if mode == BOTH and below_target != target:
                continue
            if mode == BELOW:
                target = below_target
        beta = prev_by_local.get(target)
        if beta is None or beta.block_type != block.block_type:
            continue
        if target in tr.claimed or target not in tr.pred_sets[block.local_id]:
            continue
        _link(tr, block, target)
        changed = True
    return changed


def match_transition(
    prev_version, cur_version, config: MetricConfiguration
) -> _Transition:
    tr = _build_transition(prev_version.blocks, cur_version.blocks, config)

    # Pass 1: unique candidate whose own successor set is a singleton.
    for block in tr.cur_blocks:
        if block.predecessor_local_id is not None:
            continue
        available = _available(tr, block.local_id)
        if len(available) == 1 and len(tr.succ_sets[available[0]]) == 1:
            _link(tr, block, available[0])

    # Pass 2: context, each mode looped until it makes no connection.
    for mode in (BOTH, BELOW, ABOVE):
        while _set_pred_context(tr, mode):
            pass

    # Pass 3: position.
    set_pred_position(tr)
    return tr


def set_pred_position(tr: _Transition) -> None:
    """Among remaining candidates, nearest local id wins; ties to smaller."""
    for block in tr.cur_blocks:
        if block.predecessor_local_id is not None:
            continue
        available = _available(tr, block.local_id)
        if not available:
            continue
        best = min(available, key=lambda l: (abs(l - block.local_id), l))
        _link(tr, block, best)


def match_versions(versions: list, config: MetricConfiguration) -> list:
    """Link blocks across all adjacent version pairs; idempotent per call."""
    for version in versions:
        for block in version.blocks:
            block.reset_links()
    for prev, cur in zip(versions, versions[1:]):
        match_transition(prev, cur, config)
    for version in versions:
        prev_blocks = (
            {b.block_id: b for b in versions[version.version_index - 2].blocks}
            if version.version_index >= 2
            else {}
        )
        for block in version.blocks:
            if block.predecessor_block_id is None:
                block.root_post_block_id = block.block_id
            else:
                block.root_post_block_id = prev_blocks[
                    block.predecessor_block_id
                ].root_post_block_id
    return versions


def build_lifespans(versions: list) -> list[PostBlockLifespan]:
    spans: dict[int, PostBlockLifespan] = {}
    for version in versions:
        for block in version.blocks:
            root = block.root_post_block_id
            if root not in spans:
                spans[root] = PostBlockLifespan(root_post_block_id=root, members=[])
            spans[root].members.append(block)
    return [spans[root] for root in sorted(spans)]


def block_diffs(versions: list) -> list[PostBlockDiff]:
    """Line diffs for every linked pair whose content changed."""
    out: list[PostBlockDiff] = []
    for prev, cur in zip(versions, versions[1:]):
        by_id = {b.block_id: b for b in prev.blocks}
        for block in cur.blocks:
            if block.predecessor_block_id is None or block.matched_equal:
                continue
            pred = by_id[block.predecessor_block_id]
            out.append(
                PostBlockDiff(
                    pred_block_id=pred.block_id,
                    succ_block_id=block.block_id,
                    ops=line_diff(pred.content, block.content),
                )
            )
    return out
