import json
import shutil

import pytest

from posthist.cli import main

from conftest import FIXTURES

POSTS = FIXTURES / "synthetic50" / "posts.tsv"
GT = FIXTURES / "synthetic50" / "gt.csv"


def run(*argv):
    return main([str(a) for a in argv])


def test_no_arguments_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        run()
    assert err.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as err:
        run("frobnicate")
    assert err.value.code == 2


def test_reconstruct_writes_tables_and_manifest(tmp_path):
    out = tmp_path / "out"
    assert run("reconstruct", "--input", POSTS, "--out", out) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "PostBlockDiff.tsv",
        "PostBlockVersion.tsv",
        "PostVersion.tsv",
        "PostVersionUrl.tsv",
        "manifest.json",
    ]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "reconstruct"
    assert manifest["config"] == "paper-final"
    assert manifest["inputs"] == [str(POSTS)]
    assert manifest["deterministic"] is True


def test_reconstruct_refuses_nonempty_out(tmp_path, capsys):
    out = tmp_path / "out"
    out.mkdir()
    (out / "keep.txt").write_text("x")
    assert run("reconstruct", "--input", POSTS, "--out", out) == 1
    assert "--force" in capsys.readouterr().err
    assert run("reconstruct", "--input", POSTS, "--out", out, "--force") == 0


def test_reconstruct_missing_input(tmp_path, capsys):
    assert run("reconstruct", "--input", tmp_path / "nope.tsv", "--out", tmp_path / "o") == 1
    assert "nope.tsv" in capsys.readouterr().err


def test_reconstruct_unknown_config(tmp_path, capsys):
    code = run(
        "reconstruct", "--input", POSTS, "--out", tmp_path / "o", "--config", "mystery"
    )
    assert code == 1
    assert "mystery" in capsys.readouterr().err


def test_reconstruct_with_config_file(tmp_path):
    config = tmp_path / "custom.json"
    config.write_text(
        json.dumps({"name": "custom", "text": ["equal", 1.0], "code": ["equal", 1.0]})
    )
    out = tmp_path / "out"
    assert run("reconstruct", "--input", POSTS, "--out", out, "--config", config) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["name"] == "custom"


def test_evaluate_single_config(tmp_path):
    out = tmp_path / "results.tsv"
    code = run(
        "evaluate", "--input", POSTS, "--gt", GT, "--config", "paper-final", "--out", out
    )
    assert code == 0
    (row,) = out.read_text().splitlines()
    fields = row.split("\t")
    assert fields[0] == "paper-final"
    assert fields[1] == "1.000000" and fields[2] == "1.000000"
    assert len(fields) == 12


def test_evaluate_needs_config_or_stage(tmp_path, capsys):
    code = run("evaluate", "--input", POSTS, "--gt", GT, "--out", tmp_path / "r.tsv")
    assert code == 1
    assert "--config or --stage" in capsys.readouterr().err


def test_evaluate_needs_gt(tmp_path, capsys):
    code = run(
        "evaluate", "--input", POSTS, "--config", "paper-final", "--out", tmp_path / "r.tsv"
    )
    assert code == 1
    assert "--gt" in capsys.readouterr().err


def test_evaluate_stage2_selections(tmp_path):
    selections = tmp_path / "sel.json"
    selections.write_text(json.dumps({"metrics": ["equal"]}))
    out = tmp_path / "results.tsv"
    code = run(
        "evaluate", "--input", POSTS, "--gt", GT, "--stage", "2",
        "--config", selections, "--out", out,
    )
    assert code == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 101


def test_evaluate_stage_needs_selections(tmp_path, capsys):
    code = run(
        "evaluate", "--input", POSTS, "--gt", GT, "--stage", "3", "--out", tmp_path / "r.tsv"
    )
    assert code == 1
    assert "selections" in capsys.readouterr().err


def test_evaluate_bad_selections_json(tmp_path, capsys):
    bad = tmp_path / "sel.json"
    bad.write_text("{not json")
    code = run(
        "evaluate", "--input", POSTS, "--gt", GT, "--stage", "2",
        "--config", bad, "--out", tmp_path / "r.tsv",
    )
    assert code == 1
    assert "invalid JSON" in capsys.readouterr().err


def test_analyze_writes_report(tmp_path):
    out = tmp_path / "tables"
    assert run("reconstruct", "--input", POSTS, "--out", out) == 0
    shutil.copy(FIXTURES / "synthetic50" / "comments.tsv", out / "comments.tsv")
    report_dir = tmp_path / "report"
    assert run("analyze", "--input", out, "--out", report_dir) == 0
    names = {p.name for p in report_dir.iterdir()}
    assert {
        "report.json",
        "block_counts.tsv",
        "block_lines.tsv",
        "block_chars.tsv",
        "lifespan_versions.tsv",
        "cochange.tsv",
        "local_id_diffs.tsv",
        "editors.tsv",
        "timespans.tsv",
        "correlations.tsv",
        "lines.tsv",
        "comment_timing.tsv",
        "quasi_experiments.tsv",
    } <= names
    report = json.loads((report_dir / "report.json").read_text())
    assert report["counts"]["posts"] == 50
    assert report["counts"]["comments"] > 0


def test_analyze_defaults_to_input_dir(tmp_path):
    out = tmp_path / "tables"
    assert run("reconstruct", "--input", POSTS, "--out", out) == 0
    assert run("analyze", "--input", out) == 0
    assert (out / "report.json").exists()


def test_analyze_rejects_missing_tables(tmp_path, capsys):
    missing = tmp_path / "empty"
    missing.mkdir()
    assert run("analyze", "--input", missing) == 1
    capsys.readouterr()


def test_scan_writes_references(tmp_path):
    tree = tmp_path / "tree"
    tree.mkdir()
    (tree / "a.py").write_text("# https://stackoverflow.com/q/11\n")
    out = tmp_path / "refs.tsv"
    assert run("scan", "--root", tree, "--out", out) == 0
    rows = out.read_text().splitlines()
    assert rows[0].split("\t") == [
        "repoName",
        "branchFilepath",
        "lineNumber",
        "rawUrl",
        "sharingLink",
        "postId",
        "postKind",
    ]
    assert rows[1].split("\t") == [
        "tree",
        "a.py",
        "1",
        "https://stackoverflow.com/q/11",
        "https://stackoverflow.com/q/11",
        "11",
        "question",
    ]


def test_scan_needs_root(tmp_path, capsys):
    assert run("scan", "--out", tmp_path / "refs.tsv") == 1
    assert "--root" in capsys.readouterr().err


def test_metrics_list(capsys):
    assert run("metrics", "list") == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 134
    assert lines[0].split("\t")[0]


def test_metrics_score(tmp_path, capsys):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("a b c")
    b.write_text("a b d")
    assert run("metrics", "score", "--metric", "tokenJaccard", "--a", a, "--b", b) == 0
    assert capsys.readouterr().out == "0.500000\n"


def test_metrics_score_too_short(tmp_path, capsys):
    a = tmp_path / "a.txt"
    a.write_text("")
    assert run("metrics", "score", "--metric", "tokenJaccard", "--a", a, "--b", a) == 1
    assert "too short" in capsys.readouterr().err


def test_metrics_score_unknown_metric(tmp_path, capsys):
    a = tmp_path / "a.txt"
    a.write_text("x")
    assert run("metrics", "score", "--metric", "bogus", "--a", a, "--b", a) == 1
    assert "bogus" in capsys.readouterr().err
