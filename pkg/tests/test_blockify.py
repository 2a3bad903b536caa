from pathlib import Path

import pytest

from posthist import blockify, tables
from posthist.ingest import PostVersion

EXTRACTION_DIR = Path(__file__).parent / "fixtures" / "extraction"
CASES = sorted(p.stem.replace(".body", "") for p in EXTRACTION_DIR.glob("*.body.md"))


def load_case(name):
    body = (EXTRACTION_DIR / f"{name}.body.md").read_text(encoding="utf-8")
    expected = [
        (row[0], row[1]) for row in tables.read_rows(EXTRACTION_DIR / f"{name}.blocks.tsv")
    ]
    return body, expected


@pytest.mark.parametrize("name", CASES)
def test_fixture_blocks(name):
    body, expected = load_case(name)
    assert blockify.extract_blocks(body) == expected


@pytest.mark.parametrize("name", CASES)
def test_fixture_alternation_and_no_blank_blocks(name):
    body, _ = load_case(name)
    blocks = blockify.extract_blocks(body)
    for (ta, _), (tb, _) in zip(blocks, blocks[1:]):
        assert ta != tb
    for _, content in blocks:
        assert content.strip() != ""


@pytest.mark.parametrize("name", CASES)
def test_fixture_round_trip(name):
    """Canonical re-render (code indented by 4) re-extracts to the same list."""
    body, _ = load_case(name)
    blocks = blockify.extract_blocks(body)
    parts = []
    for block_type, content in blocks:
        if block_type == "code":
            parts.append("\n".join("    " + line for line in content.split("\n")))
        else:
            parts.append(content)
    rendered = "\n\n".join(parts)
    assert blockify.extract_blocks(rendered) == blocks


def test_text_idempotence():
    blocks = blockify.extract_blocks("just a plain paragraph with `inline` code")
    assert len(blocks) == 1
    again = blockify.extract_blocks(blocks[0][1])
    assert again == blocks


def test_unterminated_fence_warns(caplog):
    with caplog.at_level("WARNING"):
        blocks = blockify.extract_blocks("```\nabc")
    assert blocks == [("code", "abc")]
    assert any("fence" in m for m in caplog.messages)


def test_blockify_version_assigns_ids():
    version = PostVersion(
        post_id=7,
        version_index=2,
        source_record_id=1,
        creation_date=None,
        editor_user_id=None,
        body="hello\n\n    code line",
    )
    next_id = blockify.blockify_version(version, 100)
    assert next_id == 102
    assert [b.block_id for b in version.blocks] == [100, 101]
    assert [b.local_id for b in version.blocks] == [1, 2]
    assert [b.block_type for b in version.blocks] == ["text", "code"]
    assert all(b.post_id == 7 and b.version_index == 2 for b in version.blocks)


def test_lines_property():
    version = PostVersion(1, 1, 1, None, None, "a\nb\n\n    x")
    blockify.blockify_version(version, 1)
    assert version.blocks[0].lines == ["a", "b"]
    assert version.blocks[1].lines == ["x"]
