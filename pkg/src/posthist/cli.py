"""Command-line entry point.

Subcommands: reconstruct, evaluate, analyze, scan, metrics, serve. Usage
errors exit 2 (argparse), data errors exit 1. POSTHIST_LOG sets the log
level. Outputs are written atomically; output directories must be empty
unless --force is given.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import analyze, evaluate, links, pipeline, tables
from .ingest import IngestError, parse_timestamp, read_post_history
from .matcher import PRESETS, MetricConfiguration
from .metrics import TooShortError, UnknownMetricError, enumerate_metrics, resolve

logger = logging.getLogger(__name__)


@dataclasses.dataclass
class RunManifest:
    command: str
    inputs: list[str]
    config: object
    out: str | None
    parallelism: int
    deterministic: bool = True


class CliError(Exception):
    pass


def _configure_logging() -> None:
    level_name = os.environ.get("POSTHIST_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def _prepare_out_dir(path_str: str, force: bool) -> Path:
    out = Path(path_str)
    if out.exists():
        if not out.is_dir():
            raise CliError(f"--out {out} exists and is not a directory")
        if any(out.iterdir()) and not force:
            raise CliError(f"--out {out} is not empty (use --force to write anyway)")
    else:
        out.mkdir(parents=True)
    return out


def _write_manifest(out_dir: Path, manifest: RunManifest) -> None:
    payload = json.dumps(dataclasses.asdict(manifest), indent=2, sort_keys=True) + "\n"
    tables.atomic_write(out_dir / "manifest.json", payload)


def _config_from_entry(name: str, entry: dict) -> MetricConfiguration:
    def pair(key: str) -> tuple[str, float] | None:
        value = entry.get(key)
        if value is None:
            return None
        metric, threshold = value
        return str(metric), float(threshold)

    text = pair("text")
    code = pair("code")
    if text is None or code is None:
        raise CliError("config file needs 'text' and 'code' [metric, threshold] pairs")
    text_backup = pair("textBackup")
    code_backup = pair("codeBackup")
    return MetricConfiguration(
        name=name,
        text_metric=text[0],
        text_threshold=text[1],
        code_metric=code[0],
        code_threshold=code[1],
        text_backup=text_backup[0] if text_backup else None,
        text_backup_threshold=text_backup[1] if text_backup else 0.0,
        code_backup=code_backup[0] if code_backup else None,
        code_backup_threshold=code_backup[1] if code_backup else 0.0,
    )


def _load_config(spec_str: str) -> MetricConfiguration:
    if spec_str in PRESETS:
        return PRESETS[spec_str]
    path = Path(spec_str)
    if not path.exists():
        raise CliError(
            f"unknown config {spec_str!r}: not a preset ({', '.join(sorted(PRESETS))}) "
            "and no such file"
        )
    entry = _load_json(path)
    name = entry.get("name", path.stem)
    return _config_from_entry(str(name), entry)


def _load_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}") from None


def _config_manifest_value(spec_str: str) -> object:
    if spec_str in PRESETS:
        return spec_str
    return _load_json(Path(spec_str))


def _cmd_reconstruct(args) -> int:
    config = _load_config(args.config)
    out = _prepare_out_dir(args.out, args.force)
    corpus = pipeline.reconstruct_file(args.input, config)
    pipeline.write_tables(out, corpus)
    _write_manifest(
        out,
        RunManifest(
            command="reconstruct",
            inputs=[args.input],
            config=_config_manifest_value(args.config),
            out=args.out,
            parallelism=args.parallelism,
        ),
    )
    logger.info("reconstructed %d posts into %s", len(corpus), out)
    return 0


def _stage_configs(stage: int, config_arg: str | None) -> list[MetricConfiguration]:
    if stage == 1:
        return evaluate.stage1_configs()
    if config_arg is None:
        raise CliError(f"--stage {stage} needs --config with a selections file")
    payload = _load_json(Path(config_arg))
    if stage == 2:
        metric_names = payload.get("metrics")
        if not isinstance(metric_names, list) or not metric_names:
            raise CliError("stage 2 selections file needs a nonempty 'metrics' list")
        return evaluate.stage2_configs([str(m) for m in metric_names])
    if stage == 3:
        selections = {}
        for key in ("text", "textBackup", "code", "codeBackup"):
            pairs = payload.get(key)
            if not isinstance(pairs, list) or not pairs:
                raise CliError(f"stage 3 selections file needs a nonempty {key!r} list")
            selections[key] = [(str(m), float(t)) for m, t in pairs]
        return evaluate.stage3_configs(
            selections["text"],
            selections["textBackup"],
            selections["code"],
            selections["codeBackup"],
        )
    raise CliError(f"unknown stage {stage}")


def _cmd_evaluate(args) -> int:
    if args.stage is None and args.config is None:
        raise CliError("evaluate needs --config or --stage")
    corpus = pipeline.reconstruct_file(args.input, PRESETS["equal-baseline"])
    ground_truths = [
        evaluate.load_ground_truth(gt_path, corpus, name=Path(gt_path).stem)
        for gt_path in args.gt
    ]
    if not ground_truths:
        raise CliError("evaluate needs at least one --gt sample")
    if args.stage is None:
        configs = [_load_config(args.config)]
    else:
        configs = _stage_configs(args.stage, args.config)
    results = evaluate.run_sweep(corpus, ground_truths, configs, parallelism=args.parallelism)
    evaluate.write_results(args.out, results)
    logger.info("wrote %d result rows to %s", len(results), args.out)
    return 0


def _read_comments(path: Path) -> list[tuple[int, object, int | None]]:
    comments = []
    for row_no, row in enumerate(tables.read_rows(path), start=1):
        if row_no == 1 and row and row[0] == "postId":
            continue
        if len(row) < 2:
            raise CliError(f"{path}:{row_no}: comment rows need postId and creationDate")
        try:
            post_id = int(row[0])
            moment = parse_timestamp(row[1])
            user_id = int(row[2]) if len(row) > 2 and row[2] else None
        except ValueError as exc:
            raise CliError(f"{path}:{row_no}: {exc}") from None
        comments.append((post_id, moment, user_id))
    return comments


_REPORT_TABLES = (
    ("block_counts.tsv", "blockCounts"),
    ("block_lines.tsv", "blockLines"),
    ("block_chars.tsv", "blockChars"),
    ("lifespan_versions.tsv", "lifespanVersions"),
)
_SHARE_TABLES = (
    ("cochange.tsv", "cochangeShares"),
    ("local_id_diffs.tsv", "localIdDiffShares"),
    ("editors.tsv", "editorShares"),
)


def _write_report_tables(out: Path, report_dict: dict) -> None:
    stats_header = ["measure", "mean", "standardDeviation", "median", "firstQuartile", "thirdQuartile", "n"]

    def stats_row(measure: str, stats: dict) -> list[str]:
        return [
            measure,
            repr(stats["mean"]),
            repr(stats["standardDeviation"]),
            repr(stats["median"]),
            repr(stats["firstQuartile"]),
            repr(stats["thirdQuartile"]),
            str(stats["n"]),
        ]

    for filename, key in _REPORT_TABLES:
        rows = [stats_header]
        for measure, stats in sorted(report_dict[key].items()):
            rows.append(stats_row(measure, stats))
        tables.write_rows(out / filename, rows)

    for filename, key in _SHARE_TABLES:
        rows = [["key", "share"]]
        for share_key, share in sorted(report_dict[key].items()):
            rows.append([share_key, repr(share)])
        tables.write_rows(out / filename, rows)

    rows = [["subset", "bucket", "share"]]
    for subset, shares in sorted(report_dict["timespanBuckets"].items()):
        for bucket, share in sorted(shares.items()):
            rows.append([subset, bucket, repr(share)])
    tables.write_rows(out / "timespans.tsv", rows)

    rows = [["pair", "rho", "label", "n"]]
    for entry in report_dict["correlations"]:
        rows.append([entry["pair"], repr(entry["rho"]), entry["label"], str(entry["n"])])
    tables.write_rows(out / "correlations.tsv", rows)

    rows = [stats_header]
    for measure in ("linesAdded", "linesDeleted"):
        if report_dict[measure] is not None:
            rows.append(stats_row(measure, report_dict[measure]))
    share = report_dict["singleLineEditShare"]
    if share is not None:
        rows.append(["singleLineEditShare", repr(share), "", "", "", "", ""])
    tables.write_rows(out / "lines.tsv", rows)

    timing = report_dict["commentTiming"]
    rows = [["key", "value"]]
    for group in ("dayCategoryShares", "assignedShares", "editRelativeShares"):
        for share_key, share in sorted(timing[group].items()):
            rows.append([f"{group}.{share_key}", repr(share)])
    rows.append(["commentsTotal", str(timing["commentsTotal"])])
    if timing["commentOnEventDayShare"] is not None:
        rows.append(["commentOnEventDayShare", repr(timing["commentOnEventDayShare"])])
    for group in ("offsetsBeforeHours", "offsetsAfterHours"):
        stats = timing[group]
        if stats is not None:
            for stat_key, value in stats.items():
                rows.append([f"{group}.{stat_key}", repr(value)])
    tables.write_rows(out / "comment_timing.tsv", rows)

    rows = [["name", "groupA", "groupB", "nA", "nB", "p", "d", "effect"]]
    for entry in report_dict["quasiExperiments"]:
        rows.append(
            [
                entry["name"],
                entry["groupA"],
                entry["groupB"],
                str(entry["descA"]["n"]) if entry["descA"] else "0",
                str(entry["descB"]["n"]) if entry["descB"] else "0",
                repr(entry["p"]) if entry["p"] is not None else "",
                repr(entry["d"]) if entry["d"] is not None else "",
                entry["effect"] or "",
            ]
        )
    tables.write_rows(out / "quasi_experiments.tsv", rows)


def _cmd_analyze(args) -> int:
    src = Path(args.input)
    corpus = pipeline.read_tables(src)
    comments_path = src / "comments.tsv"
    comments = _read_comments(comments_path) if comments_path.exists() else []
    report = analyze.evolution_report(corpus, comments)
    report_dict = report.as_dict()

    if args.out:
        out = _prepare_out_dir(args.out, args.force)
    else:
        out = src
    tables.atomic_write(out / "report.json", json.dumps(report_dict, indent=2, sort_keys=True) + "\n")
    _write_report_tables(out, report_dict)
    logger.info("wrote evolution report to %s", out)
    return 0


def _cmd_scan(args) -> int:
    root = args.root or args.input
    if root is None:
        raise CliError("scan needs --root (or --input) pointing at a directory tree")
    refs = links.scan_tree(root)
    rows = [["repoName", "branchFilepath", "lineNumber", "rawUrl", "sharingLink", "postId", "postKind"]]
    for ref in refs:
        rows.append(
            [
                ref.repo_name,
                ref.branch_filepath,
                str(ref.line_number),
                ref.raw_url,
                ref.sharing_link,
                str(ref.post_id),
                ref.post_kind,
            ]
        )
    tables.write_rows(args.out, rows)
    logger.info("wrote %d references to %s", len(refs), args.out)
    return 0


def _cmd_metrics_list(_args) -> int:
    for desc in enumerate_metrics():
        print(
            "\t".join(
                [
                    desc.name,
                    desc.family,
                    desc.unit,
                    str(desc.n or ""),
                    desc.coefficient or "",
                    desc.weighting or "",
                    desc.distance or "",
                    desc.method or "",
                    "normalized" if desc.normalized else "raw",
                    "padded" if desc.padded else "",
                ]
            )
        )
    return 0


def _cmd_metrics_score(args) -> int:
    metric = resolve(args.metric)
    try:
        a = Path(args.a).read_text(encoding="utf-8")
        b = Path(args.b).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(str(exc)) from None
    try:
        score = metric(a, b)
    except TooShortError:
        raise CliError(f"inputs too short for {args.metric}") from None
    print(f"{score:.6f}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config)
    corpus = pipeline.reconstruct_file(args.input, config)
    app = create_app(corpus, args.out, sample_name=Path(args.out).stem)
    logger.info("serving %d posts on port %d", len(corpus), args.port)
    uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posthist",
        description="Reconstruct, evaluate, and analyze post edit histories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reconstruct", help="build the full table set from a history file")
    p.add_argument("--input", required=True, help="post history TSV")
    p.add_argument("--config", default="paper-final", help="preset name or config JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--force", action="store_true", help="write into a non-empty directory")
    p.set_defaults(handler=_cmd_reconstruct)

    p = sub.add_parser("evaluate", help="score configurations against ground truth")
    p.add_argument("--input", required=True, help="post history TSV")
    p.add_argument("--gt", action="append", default=[], help="ground-truth CSV (repeatable)")
    p.add_argument("--config", help="preset, config JSON, or stage selections JSON")
    p.add_argument("--stage", type=int, choices=(1, 2, 3), help="sweep stage")
    p.add_argument("--out", required=True, help="results TSV path")
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("analyze", help="evolution statistics over reconstructed tables")
    p.add_argument("--input", required=True, help="directory written by reconstruct")
    p.add_argument("--out", help="report directory (defaults to --input)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("scan", help="scan a directory tree for post references")
    p.add_argument("--root", help="tree to scan")
    p.add_argument("--input", help="alias for --root")
    p.add_argument("--out", required=True, help="references TSV path")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("metrics", help="similarity metric catalog")
    metrics_sub = p.add_subparsers(dest="metrics_command", required=True)
    lp = metrics_sub.add_parser("list", help="print the catalog")
    lp.set_defaults(handler=_cmd_metrics_list)
    sp = metrics_sub.add_parser("score", help="score two files with one metric")
    sp.add_argument("--metric", required=True)
    sp.add_argument("--a", required=True, help="first input file")
    sp.add_argument("--b", required=True, help="second input file")
    sp.set_defaults(handler=_cmd_metrics_score)

    p = sub.add_parser("serve", help="annotation service over a reconstructed corpus")
    p.add_argument("--input", required=True, help="post history TSV")
    p.add_argument("--config", default="paper-final")
    p.add_argument("--port", type=int, default=8330)
    p.add_argument("--out", required=True, help="annotation CSV path")
    p.set_defaults(handler=_cmd_serve)

    return parser


_DATA_ERRORS = (
    CliError,
    IngestError,
    evaluate.GroundTruthError,
    pipeline.TableError,
    UnknownMetricError,
    OSError,
    ValueError,
)


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _DATA_ERRORS as exc:
        print(f"posthist {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
