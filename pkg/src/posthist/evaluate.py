"""Score metric configurations against ground truth.

A connection is (postId, curVersion, curLocalId, predLocalId) for one block
type. Against a ground-truth set GT and computed set C, the counts are
tp = |C intersect GT|, fp = |C \\ GT|, fn = |GT \\ C|, tn = nPos - |C union GT|
with nPos the number of blocks of that type in versions 2..n, so
tp + fp + tn + fn = nPos always holds.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import tables
from .matcher import MetricConfiguration, match_versions
from .metrics import descriptor, enumerate_metrics

GT_COLUMNS = [
    "postId",
    "predVersion",
    "predLocalId",
    "curVersion",
    "curLocalId",
    "blockType",
    "comment",
]

Connection = tuple[int, int, int, int]


class GroundTruthError(ValueError):
    def __init__(self, row: int, message: str) -> None:
        super().__init__(f"row {row}: {message}")
        self.row = row


@dataclass
class GroundTruth:
    name: str
    connections: dict[str, set[Connection]] = field(
        default_factory=lambda: {"text": set(), "code": set()}
    )
    no_pred: set[tuple[int, int, int]] = field(default_factory=set)
    comments: dict[tuple[int, int, int], str] = field(default_factory=dict)
    block_types: dict[tuple[int, int, int], str] = field(default_factory=dict)
    post_ids: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int
    n_pos: int


@dataclass
class EvaluationResult:
    config: MetricConfiguration
    sample: str
    text: ConfusionCounts
    code: ConfusionCounts
    mcc_text: float
    mcc_code: float
    runtime_s: float


@dataclass
class RankedConfig:
    config: MetricConfiguration
    mcc_sum: float
    runtime_s: float


def load_ground_truth(path, corpus: dict, name: str | None = None) -> GroundTruth:
    """Read and validate a ground-truth CSV against a reconstructed corpus.

    Rows with empty predecessor fields record an explicit no-predecessor
    decision. An optional header row is skipped.
    """
    gt = GroundTruth(name=name or str(path))
    posts: set[int] = set()
    targets: set[tuple[int, int, int]] = set()
    if hasattr(path, "read"):
        fh = path
        close = False
    else:
        fh = open(path, encoding="utf-8", newline="")
        close = True
    try:
        for row_no, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            if row_no == 1 and row[0].strip() == "postId":
                continue
            if len(row) < 6:
                raise GroundTruthError(row_no, f"expected >= 6 columns, got {len(row)}")
            try:
                post_id = int(row[0])
                cur_version = int(row[3])
                cur_local = int(row[4])
            except ValueError as exc:
                raise GroundTruthError(row_no, f"bad integer field: {exc}") from None
            block_type = row[5].strip()
            if block_type not in ("text", "code"):
                raise GroundTruthError(row_no, f"unknown blockType {row[5]!r}")
            comment = row[6] if len(row) > 6 else ""

            versions = corpus.get(post_id)
            if versions is None:
                raise GroundTruthError(row_no, f"unknown post {post_id}")
            if not 2 <= cur_version <= len(versions):
                raise GroundTruthError(
                    row_no, f"post {post_id} has no version pair ending at {cur_version}"
                )
            cur_blocks = {b.local_id: b for b in versions[cur_version - 1].blocks}
            if cur_local not in cur_blocks:
                raise GroundTruthError(
                    row_no,
                    f"post {post_id} v{cur_version} has no block with local id {cur_local}",
                )
            if cur_blocks[cur_local].block_type != block_type:
                raise GroundTruthError(
                    row_no,
                    f"block {cur_local} in post {post_id} v{cur_version} is "
                    f"{cur_blocks[cur_local].block_type}, row says {block_type}",
                )
            target = (post_id, cur_version, cur_local)
            if target in targets:
                raise GroundTruthError(
                    row_no, f"duplicate connection for block {target}"
                )
            targets.add(target)
            posts.add(post_id)
            gt.block_types[target] = block_type
            if comment:
                gt.comments[target] = comment

            pred_version_field = row[1].strip()
            pred_local_field = row[2].strip()
            if not pred_version_field and not pred_local_field:
                gt.no_pred.add(target)
                continue
            try:
                pred_version = int(pred_version_field)
                pred_local = int(pred_local_field)
            except ValueError as exc:
                raise GroundTruthError(row_no, f"bad integer field: {exc}") from None
            if pred_version != cur_version - 1:
                raise GroundTruthError(
                    row_no,
                    f"predVersion {pred_version} is not the version before {cur_version}",
                )
            pred_blocks = {b.local_id: b for b in versions[pred_version - 1].blocks}
            if pred_local not in pred_blocks:
                raise GroundTruthError(
                    row_no,
                    f"post {post_id} v{pred_version} has no block with local id {pred_local}",
                )
            if pred_blocks[pred_local].block_type != block_type:
                raise GroundTruthError(
                    row_no,
                    f"connection joins {pred_blocks[pred_local].block_type} to {block_type}",
                )
            gt.connections[block_type].add((post_id, cur_version, cur_local, pred_local))
    finally:
        if close:
            fh.close()
    gt.post_ids = sorted(posts)
    return gt


def write_ground_truth(path, gt: GroundTruth) -> None:
    entries: dict[tuple[int, int, int], tuple[str, str, str]] = {}
    for block_type, conns in gt.connections.items():
        for post_id, cur_version, cur_local, pred_local in conns:
            entries[(post_id, cur_version, cur_local)] = (
                str(cur_version - 1),
                str(pred_local),
                block_type,
            )
    for target in gt.no_pred:
        if target not in entries:
            entries[target] = ("", "", gt.block_types.get(target, ""))
    rows: list[list[str]] = [list(GT_COLUMNS)]
    for (post_id, cur_version, cur_local), (pv, pl, bt) in sorted(entries.items()):
        comment = gt.comments.get((post_id, cur_version, cur_local), "")
        rows.append([str(post_id), pv, pl, str(cur_version), str(cur_local), bt, comment])
    out = io.StringIO()
    csv.writer(out, lineterminator="\n").writerows(rows)
    tables.atomic_write(path, out.getvalue())


def connections_of(versions: list, block_type: str) -> set[Connection]:
    out: set[Connection] = set()
    for version in versions[1:]:
        for block in version.blocks:
            if block.block_type == block_type and block.predecessor_local_id is not None:
                out.add(
                    (
                        version.post_id,
                        version.version_index,
                        block.local_id,
                        block.predecessor_local_id,
                    )
                )
    return out


def possible_connections(versions: list, block_type: str) -> int:
    return sum(
        1
        for version in versions[1:]
        for block in version.blocks
        if block.block_type == block_type
    )


def confusion(
    connections: set[Connection], gt_connections: set[Connection], n_pos: int
) -> ConfusionCounts:
    tp = len(connections & gt_connections)
    fp = len(connections - gt_connections)
    fn = len(gt_connections - connections)
    tn = n_pos - len(connections | gt_connections)
    counts = ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn, n_pos=n_pos)
    assert tp + fp + tn + fn == n_pos, f"count identity violated: {counts}"
    return counts


def mcc(counts: ConfusionCounts) -> float:
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom)


def evaluate_config(
    corpus: dict, gt: GroundTruth, config: MetricConfiguration
) -> EvaluationResult:
    """Match the ground-truth posts under config and score the connections.

    Runtime covers the matching phase only.
    """
    posts = [corpus[post_id] for post_id in gt.post_ids]
    start = time.perf_counter()
    for versions in posts:
        match_versions(versions, config)
    runtime = time.perf_counter() - start

    result = {}
    for block_type in ("text", "code"):
        computed: set[Connection] = set()
        n_pos = 0
        for versions in posts:
            computed |= connections_of(versions, block_type)
            n_pos += possible_connections(versions, block_type)
        result[block_type] = confusion(computed, gt.connections[block_type], n_pos)
    return EvaluationResult(
        config=config,
        sample=gt.name,
        text=result["text"],
        code=result["code"],
        mcc_text=mcc(result["text"]),
        mcc_code=mcc(result["code"]),
        runtime_s=runtime,
    )


def _threshold_grid(step: float) -> list[float]:
    count = round(1.0 / step)
    return [round(i * step, 10) for i in range(count + 1)]


def config_name(metric: str, threshold: float) -> str:
    return f"{metric}@{threshold:g}"


def stage1_configs(
    metric_names: list[str] | None = None, thresholds: list[float] | None = None
) -> list[MetricConfiguration]:
    """Same metric and threshold for text and code, no backups."""
    names = metric_names or [d.name for d in enumerate_metrics()]
    grid = thresholds if thresholds is not None else _threshold_grid(0.1)
    return [
        MetricConfiguration(
            name=config_name(m, t),
            text_metric=m,
            text_threshold=t,
            code_metric=m,
            code_threshold=t,
        )
        for m in names
        for t in grid
    ]


def stage2_configs(
    metric_names: list[str], thresholds: list[float] | None = None
) -> list[MetricConfiguration]:
    if not metric_names:
        raise ValueError("stage 2 needs an explicit metric selection")
    grid = thresholds if thresholds is not None else _threshold_grid(0.01)
    return stage1_configs(metric_names, grid)


def stage3_configs(
    text: list[tuple[str, float]],
    text_backup: list[tuple[str, float]],
    code: list[tuple[str, float]],
    code_backup: list[tuple[str, float]],
) -> list[MetricConfiguration]:
    """Cross product of independent text/code configurations with backups."""
    if not (text and text_backup and code and code_backup):
        raise ValueError("stage 3 needs all four selections")
    out = []
    for tm, tt in text:
        for tbm, tbt in text_backup:
            for cm, ct in code:
                for cbm, cbt in code_backup:
                    out.append(
                        MetricConfiguration(
                            name="|".join(
                                (
                                    config_name(tm, tt),
                                    config_name(tbm, tbt),
                                    config_name(cm, ct),
                                    config_name(cbm, cbt),
                                )
                            ),
                            text_metric=tm,
                            text_threshold=tt,
                            code_metric=cm,
                            code_threshold=ct,
                            text_backup=tbm,
                            text_backup_threshold=tbt,
                            code_backup=cbm,
                            code_backup_threshold=cbt,
                        )
                    )
    return out


_WORKER_STATE: dict = {}


def _init_worker(corpus, gts) -> None:
    _WORKER_STATE["corpus"] = corpus
    _WORKER_STATE["gts"] = gts


def _eval_one(config: MetricConfiguration) -> list[EvaluationResult]:
    return [
        evaluate_config(_WORKER_STATE["corpus"], gt, config)
        for gt in _WORKER_STATE["gts"]
    ]


def run_sweep(
    corpus: dict,
    ground_truths: list[GroundTruth],
    configs: list[MetricConfiguration],
    parallelism: int = 1,
) -> list[EvaluationResult]:
    """One EvaluationResult per (config, sample), in config order."""
    if not configs:
        raise ValueError("empty configuration selection")
    results: list[EvaluationResult] = []
    if parallelism <= 1:
        for config in configs:
            for gt in ground_truths:
                results.append(evaluate_config(corpus, gt, config))
        return results
    with ProcessPoolExecutor(
        max_workers=parallelism,
        initializer=_init_worker,
        initargs=(corpus, ground_truths),
    ) as pool:
        for batch in pool.map(_eval_one, configs, chunksize=8):
            results.extend(batch)
    return results


def rank_results(results: list[EvaluationResult]) -> list[RankedConfig]:
    """Aggregate per configuration: summed text+code MCC desc, runtime asc."""
    grouped: dict[str, RankedConfig] = {}
    for res in results:
        entry = grouped.get(res.config.name)
        if entry is None:
            grouped[res.config.name] = RankedConfig(
                config=res.config,
                mcc_sum=res.mcc_text + res.mcc_code,
                runtime_s=res.runtime_s,
            )
        else:
            entry.mcc_sum += res.mcc_text + res.mcc_code
            entry.runtime_s += res.runtime_s
    return sorted(
        grouped.values(), key=lambda r: (-r.mcc_sum, r.runtime_s, r.config.name)
    )


def _quantile(values: list[float], q: float) -> float:
    """Linear-interpolation quantile of a nonempty list."""
    ordered = sorted(values)
    if len(ordered) == 1:
        return ordered[0]
    pos = q * (len(ordered) - 1)
    low = int(math.floor(pos))
    high = min(low + 1, len(ordered) - 1)
    frac = pos - low
    return ordered[low] * (1 - frac) + ordered[high] * frac


def quantile_filter(
    results: list[EvaluationResult], q: float = 0.95, backup: bool = False
) -> list[str]:
    """Metrics whose best-threshold MCC reaches the q-quantile on every
    sample for at least one block type. With backup=True only metrics that
    accept every nonempty string are considered."""
    best: dict[str, dict[str, dict[str, float]]] = {"text": {}, "code": {}}
    samples: set[str] = set()
    for res in results:
        metric = res.config.text_metric
        samples.add(res.sample)
        for block_type, value in (("text", res.mcc_text), ("code", res.mcc_code)):
            per_metric = best[block_type].setdefault(metric, {})
            per_metric[res.sample] = max(per_metric.get(res.sample, -1.0), value)

    if backup:
        eligible = {
            m
            for m in best["text"]
            if descriptor(m).min_input_length <= 1 and descriptor(m).unit != "shingle"
        }
    else:
        eligible = set(best["text"])

    cutoffs: dict[str, dict[str, float]] = {"text": {}, "code": {}}
    for block_type in ("text", "code"):
        for sample in samples:
            values = [
                per_sample[sample]
                for per_sample in best[block_type].values()
                if sample in per_sample
            ]
            cutoffs[block_type][sample] = _quantile(values, q)

    selected = []
    for metric in sorted(eligible):
        for block_type in ("text", "code"):
            per_sample = best[block_type].get(metric, {})
            if samples and all(
                per_sample.get(s, -1.0) >= cutoffs[block_type][s] for s in samples
            ):
                selected.append(metric)
                break
    return selected


def write_results(path, results: list[EvaluationResult]) -> None:
    rows = []
    for res in results:
        rows.append(
            [
                res.config.name,
                f"{res.mcc_text:.6f}",
                f"{res.mcc_code:.6f}",
                str(res.text.tp),
                str(res.text.fp),
                str(res.text.tn),
                str(res.text.fn),
                str(res.code.tp),
                str(res.code.fp),
                str(res.code.tn),
                str(res.code.fn),
                f"{res.runtime_s * 1000:.3f}",
            ]
        )
    tables.write_rows(path, rows)
