"""Descriptive statistics and evolution measures over a matched corpus.

Statistical conventions, fixed here because callers depend on them:
- standard deviation is the sample (n-1) form; a single value has SD 0,
- quartiles use linear interpolation between order statistics,
- rank correlation uses mean ranks for ties; zero variance on either side
  yields 0.0,
- the rank-sum test enumerates rank assignments exactly for combined n <= 10
  and otherwise uses the normal approximation with tie-corrected variance and
  no continuity correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime
from itertools import combinations

import numpy as np

from .linediff import DELETE, INSERT, line_diff
from .matcher import build_lifespans

_CORRELATION_BANDS = [
    (0.9, "very high"),
    (0.7, "high"),
    (0.5, "moderate"),
    (0.3, "low"),
]

_EFFECT_BANDS = [
    (0.8, "large"),
    (0.5, "medium"),
    (0.2, "small"),
]


@dataclass(frozen=True)
class StatsSummary:
    mean: float
    standard_deviation: float
    median: float
    first_quartile: float
    third_quartile: float
    n: int

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "standardDeviation": self.standard_deviation,
            "median": self.median,
            "firstQuartile": self.first_quartile,
            "thirdQuartile": self.third_quartile,
            "n": self.n,
        }


def describe(values) -> StatsSummary:
    data = np.asarray(list(values), dtype=np.float64)
    if data.size == 0:
        raise ValueError("describe() needs at least one value")
    sd = float(np.std(data, ddof=1)) if data.size > 1 else 0.0
    q1, median, q3 = (float(v) for v in np.percentile(data, [25, 50, 75]))
    return StatsSummary(float(np.mean(data)), sd, median, q1, q3, int(data.size))


def _mean_ranks(values) -> np.ndarray:
    data = np.asarray(values, dtype=np.float64)
    order = np.argsort(data, kind="stable")
    ranks = np.empty(data.size, dtype=np.float64)
    sorted_vals = data[order]
    i = 0
    while i < data.size:
        j = i
        while j + 1 < data.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def correlation_label(rho: float) -> str:
    magnitude = abs(rho)
    for cutoff, label in _CORRELATION_BANDS:
        if magnitude >= cutoff:
            return label
    return "little"


def spearman(x, y) -> float:
    xs = list(x)
    ys = list(y)
    if len(xs) != len(ys):
        raise ValueError("spearman() needs equal-length inputs")
    if len(xs) < 2:
        raise ValueError("spearman() needs at least two pairs")
    rx = _mean_ranks(xs)
    ry = _mean_ranks(ys)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denom = math.sqrt(float(dx @ dx) * float(dy @ dy))
    if denom == 0:
        return 0.0
    return float(dx @ dy) / denom


def effect_label(d: float) -> str:
    magnitude = abs(d)
    for cutoff, label in _EFFECT_BANDS:
        if magnitude >= cutoff:
            return label
    return "negligible"


def cohens_d(a, b) -> float:
    xs = np.asarray(list(a), dtype=np.float64)
    ys = np.asarray(list(b), dtype=np.float64)
    if xs.size < 2 or ys.size < 2:
        raise ValueError("cohens_d() needs at least two values per sample")
    pooled_var = (
        (xs.size - 1) * np.var(xs, ddof=1) + (ys.size - 1) * np.var(ys, ddof=1)
    ) / (xs.size + ys.size - 2)
    if pooled_var == 0:
        raise ValueError("cohens_d() undefined for zero pooled variance")
    return float((xs.mean() - ys.mean()) / math.sqrt(pooled_var))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_ranksum(a, b) -> float:
    xs = list(a)
    ys = list(b)
    if not xs or not ys:
        raise ValueError("wilcoxon_ranksum() needs nonempty samples")
    n1 = len(xs)
    n = n1 + len(ys)
    ranks = _mean_ranks(xs + ys)
    w_obs = float(ranks[:n1].sum())
    mu = n1 * (n + 1) / 2.0

    if n <= 10:
        threshold = abs(w_obs - mu) - 1e-12
        hits = 0
        total = 0
        for combo in combinations(range(n), n1):
            total += 1
            w = float(ranks[list(combo)].sum())
            if abs(w - mu) >= threshold:
                hits += 1
        return hits / total

    n2 = n - n1
    _, counts = np.unique(ranks, return_counts=True)
    tie_term = float(((counts**3) - counts).sum()) / (n * (n - 1))
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if sigma_sq <= 0:
        return 1.0
    z = (w_obs - mu) / math.sqrt(sigma_sq)
    return min(1.0, 2.0 * _normal_sf(abs(z)))


def _shares(counter: dict) -> dict:
    total = sum(counter.values())
    if total == 0:
        return {}
    return {key: count / total for key, count in sorted(counter.items())}


def _day(moment: datetime) -> int:
    return moment.date().toordinal()


def _timespan_bucket(days: int) -> str:
    if days <= 0:
        return "sameDay"
    if days <= 7:
        return "withinWeek"
    if days <= 365:
        return "withinYear"
    return "beyondYear"


@dataclass
class EvolutionReport:
    counts: dict = field(default_factory=dict)
    block_counts: dict = field(default_factory=dict)
    block_lines: dict = field(default_factory=dict)
    block_chars: dict = field(default_factory=dict)
    lifespan_versions: dict = field(default_factory=dict)
    lines_added: StatsSummary | None = None
    lines_deleted: StatsSummary | None = None
    single_line_edit_share: float | None = None
    cochange_shares: dict = field(default_factory=dict)
    local_id_diff_shares: dict = field(default_factory=dict)
    timespan_buckets: dict = field(default_factory=dict)
    editor_shares: dict = field(default_factory=dict)
    comment_timing: dict = field(default_factory=dict)
    correlations: list = field(default_factory=list)
    quasi_experiments: list = field(default_factory=list)

    def as_dict(self) -> dict:
        def conv(value):
            if isinstance(value, StatsSummary):
                return value.as_dict()
            if isinstance(value, dict):
                return {str(k): conv(v) for k, v in value.items()}
            if isinstance(value, list):
                return [conv(v) for v in value]
            return value

        return {
            "counts": conv(self.counts),
            "blockCounts": conv(self.block_counts),
            "blockLines": conv(self.block_lines),
            "blockChars": conv(self.block_chars),
            "lifespanVersions": conv(self.lifespan_versions),
            "linesAdded": conv(self.lines_added),
            "linesDeleted": conv(self.lines_deleted),
            "singleLineEditShare": self.single_line_edit_share,
            "cochangeShares": conv(self.cochange_shares),
            "localIdDiffShares": conv(self.local_id_diff_shares),
            "timespanBuckets": conv(self.timespan_buckets),
            "editorShares": conv(self.editor_shares),
            "commentTiming": conv(self.comment_timing),
            "correlations": conv(self.correlations),
            "quasiExperiments": conv(self.quasi_experiments),
        }


def _changed_lines(pred_content: str, cur_content: str) -> tuple[int, int]:
    added = deleted = 0
    for op in line_diff(pred_content, cur_content):
        if op.op == INSERT:
            added += 1
        elif op.op == DELETE:
            deleted += 1
    return added, deleted


def _version_touches(versions) -> list[dict]:
    """Per post version (>= 2): which block types were modified/added/removed."""
    touches = []
    for idx in range(1, len(versions)):
        prev = versions[idx - 1]
        cur = versions[idx]
        touched = {"text": False, "code": False}
        linked_preds = set()
        for block in cur.blocks:
            if block.predecessor_local_id is None:
                touched[block.block_type] = True
            else:
                linked_preds.add((block.block_type, block.predecessor_local_id))
                if not block.matched_equal:
                    touched[block.block_type] = True
        for block in prev.blocks:
            if (block.block_type, block.local_id) not in linked_preds:
                touched[block.block_type] = True
        touches.append({"touched": touched, "prev": prev, "cur": cur})
    return touches


def _comment_timing(corpus: dict, comments) -> dict:
    events: dict[int, list[tuple[datetime, str]]] = {}
    for post_id, versions in corpus.items():
        events[post_id] = [
            (v.creation_date, "creation" if v.version_index == 1 else "edit")
            for v in versions
        ]

    day_kinds: dict[tuple[int, int], set] = {}
    for post_id, post_events in events.items():
        for moment, kind in post_events:
            day_kinds.setdefault((post_id, _day(moment)), set()).add(
                "created" if kind == "creation" else "edited"
            )
    known_comments = []
    for post_id, moment, _user in comments:
        if post_id not in events:
            continue
        known_comments.append((post_id, moment))
        day_kinds.setdefault((post_id, _day(moment)), set()).add("commented")

    day_categories: dict[str, int] = {}
    for kinds in day_kinds.values():
        if "commented" in kinds and ("created" in kinds or "edited" in kinds):
            category = "eventAndComment"
        elif kinds == {"created"}:
            category = "createdOnly"
        elif kinds == {"edited"}:
            category = "editedOnly"
        elif kinds == {"created", "edited"}:
            category = "createdAndEdited"
        else:
            category = "commentedOnly"
        day_categories[category] = day_categories.get(category, 0) + 1

    on_event_day = 0
    assigned = {"creation": 0, "edit": 0}
    before_after = {"before": 0, "after": 0}
    offsets_before: list[float] = []
    offsets_after: list[float] = []
    for post_id, moment in known_comments:
        same_day_events = [
            (when, kind)
            for when, kind in events[post_id]
            if _day(when) == _day(moment)
        ]
        if not same_day_events:
            continue
        on_event_day += 1
        # Closest event wins; exact distance ties go to the earlier event.
        _, when, kind = min(
            (abs((moment - when).total_seconds()), when, kind)
            for when, kind in same_day_events
        )
        assigned[kind] += 1
        if kind == "edit":
            offset_hours = (moment - when).total_seconds() / 3600.0
            if offset_hours < 0:
                before_after["before"] += 1
                offsets_before.append(offset_hours)
            else:
                before_after["after"] += 1
                offsets_after.append(offset_hours)

    timing = {
        "dayCategoryShares": _shares(day_categories),
        "commentsTotal": len(known_comments),
        "commentOnEventDayShare": (
            on_event_day / len(known_comments) if known_comments else None
        ),
        "assignedShares": _shares(assigned),
        "editRelativeShares": _shares(before_after),
        "offsetsBeforeHours": describe(offsets_before) if offsets_before else None,
        "offsetsAfterHours": describe(offsets_after) if offsets_after else None,
    }
    return timing


def evolution_report(corpus: dict, comments=(), gh_files: dict | None = None) -> EvolutionReport:
    """Compute evolution measures over a blockified, matched corpus.

    corpus maps post id to its version list; comments are (postId, datetime,
    userId) triples; gh_files optionally maps post id to the number of
    distinct external files referencing it.
    """
    report = EvolutionReport()
    comments = list(comments)

    block_counts = {"text": [], "code": []}
    block_lines = {"text": [], "code": []}
    block_chars = {"text": [], "code": []}
    n_versions = 0
    n_blocks = 0
    for versions in corpus.values():
        for version in versions:
            n_versions += 1
            per_type = {"text": 0, "code": 0}
            for block in version.blocks:
                n_blocks += 1
                per_type[block.block_type] += 1
                block_lines[block.block_type].append(len(block.lines))
                block_chars[block.block_type].append(len(block.content))
            for block_type in ("text", "code"):
                block_counts[block_type].append(per_type[block_type])
    report.counts = {
        "posts": len(corpus),
        "versions": n_versions,
        "blocks": n_blocks,
        "comments": len(comments),
    }
    for block_type in ("text", "code"):
        if block_counts[block_type]:
            report.block_counts[block_type] = describe(block_counts[block_type])
        if block_lines[block_type]:
            report.block_lines[block_type] = describe(block_lines[block_type])
            report.block_chars[block_type] = describe(block_chars[block_type])

    lifespan_lengths = {"text": [], "code": []}
    for versions in corpus.values():
        for lifespan in build_lifespans(versions):
            block_type = lifespan.members[0].block_type
            lifespan_lengths[block_type].append(len(lifespan.members))
    for block_type in ("text", "code"):
        if lifespan_lengths[block_type]:
            report.lifespan_versions[block_type] = describe(lifespan_lengths[block_type])

    added_counts: list[int] = []
    deleted_counts: list[int] = []
    cochange = {"both": 0, "textOnly": 0, "codeOnly": 0}
    local_id_diffs: dict[int, int] = {}
    single_line = 0
    edits_with_changes = 0
    for versions in corpus.values():
        for info in _version_touches(versions):
            prev = info["prev"]
            cur = info["cur"]
            prev_by_local = {
                (b.block_type, b.local_id): b for b in prev.blocks
            }
            version_added = version_deleted = 0
            for block in cur.blocks:
                if block.predecessor_local_id is not None:
                    diff = block.local_id - block.predecessor_local_id
                    local_id_diffs[diff] = local_id_diffs.get(diff, 0) + 1
                    if not block.matched_equal:
                        pred = prev_by_local[(block.block_type, block.predecessor_local_id)]
                        added, deleted = _changed_lines(pred.content, block.content)
                        added_counts.append(added)
                        deleted_counts.append(deleted)
                        version_added += added
                        version_deleted += deleted
            touched = info["touched"]
            if touched["text"] or touched["code"]:
                edits_with_changes += 1
                if touched["text"] and touched["code"]:
                    cochange["both"] += 1
                elif touched["text"]:
                    cochange["textOnly"] += 1
                else:
                    cochange["codeOnly"] += 1
                # A rewrite of one line diffs as one delete plus one add, so
                # "single line" means at most one of each across the version.
                if 1 <= version_added + version_deleted and version_added <= 1 and version_deleted <= 1:
                    single_line += 1

    if added_counts:
        report.lines_added = describe(added_counts)
        report.lines_deleted = describe(deleted_counts)
    report.cochange_shares = _shares(cochange)
    report.local_id_diff_shares = _shares(local_id_diffs)
    if edits_with_changes:
        report.single_line_edit_share = single_line / edits_with_changes

    first_buckets: dict[str, int] = {}
    later_buckets: dict[str, int] = {}
    all_buckets: dict[str, int] = {}
    editors = {"author": 0, "other": 0, "unknown": 0}
    for versions in corpus.values():
        created = versions[0].creation_date
        author = versions[0].editor_user_id
        for version in versions[1:]:
            days = _day(version.creation_date) - _day(created)
            bucket = _timespan_bucket(days)
            target = first_buckets if version.version_index == 2 else later_buckets
            target[bucket] = target.get(bucket, 0) + 1
            all_buckets[bucket] = all_buckets.get(bucket, 0) + 1
            if version.editor_user_id is None or author is None:
                editors["unknown"] += 1
            elif version.editor_user_id == author:
                editors["author"] += 1
            else:
                editors["other"] += 1
    report.timespan_buckets = {
        "firstEdit": _shares(first_buckets),
        "laterEdits": _shares(later_buckets),
        "allEdits": _shares(all_buckets),
    }
    report.editor_shares = _shares(editors)

    report.comment_timing = _comment_timing(corpus, comments)

    comment_counts = {post_id: 0 for post_id in corpus}
    for post_id, _moment, _user in comments:
        if post_id in comment_counts:
            comment_counts[post_id] += 1
    post_ids = sorted(corpus)
    version_counts = [len(corpus[post_id]) for post_id in post_ids]
    comment_totals = [comment_counts[post_id] for post_id in post_ids]
    if len(post_ids) >= 2:
        pairs = [("versionCount~commentCount", comment_totals)]
        if gh_files is not None:
            pairs.append(
                ("versionCount~ghFileCount", [gh_files.get(p, 0) for p in post_ids])
            )
        for name, other in pairs:
            rho = spearman(version_counts, other)
            report.correlations.append(
                {"pair": name, "rho": rho, "label": correlation_label(rho), "n": len(post_ids)}
            )

    report.quasi_experiments = _quasi_experiments(version_counts, comment_totals)
    return report


def _quasi_experiments(version_counts: list[int], comment_totals: list[int]) -> list[dict]:
    experiments = []
    splits = [
        (
            "commentCount~versionSplit",
            [c for v, c in zip(version_counts, comment_totals) if v == 1],
            [c for v, c in zip(version_counts, comment_totals) if v > 1],
            "versionCount==1",
            "versionCount>1",
        ),
        (
            "versionCount~commentSplit",
            [v for v, c in zip(version_counts, comment_totals) if c <= 1],
            [v for v, c in zip(version_counts, comment_totals) if c > 1],
            "commentCount<=1",
            "commentCount>1",
        ),
    ]
    for name, group_a, group_b, label_a, label_b in splits:
        entry: dict = {"name": name, "groupA": label_a, "groupB": label_b}
        entry["descA"] = describe(group_a) if group_a else None
        entry["descB"] = describe(group_b) if group_b else None
        if group_a and group_b:
            entry["p"] = wilcoxon_ranksum(group_a, group_b)
            try:
                d = cohens_d(group_a, group_b)
                entry["d"] = d
                entry["effect"] = effect_label(d)
            except ValueError:
                entry["d"] = None
                entry["effect"] = None
        else:
            entry["p"] = None
            entry["d"] = None
            entry["effect"] = None
        experiments.append(entry)
    return experiments
