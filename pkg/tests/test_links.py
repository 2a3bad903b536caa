from posthist import links


def test_extract_urls_offsets_and_order():
    content = "see https://a.example/x and http://b.example/y?q=1 end"
    found = links.extract_urls(content)
    assert found == [
        ("https://a.example/x", 4),
        ("http://b.example/y?q=1", 28),
    ]


def test_extract_urls_strips_trailing_punctuation():
    found = links.extract_urls("link (https://a.example/x), done.")
    assert found == [("https://a.example/x", 6)]


def test_extract_urls_none():
    assert links.extract_urls("no links here") == []


def test_normalize_question_forms():
    for url in (
        "https://stackoverflow.com/q/12345",
        "https://stackoverflow.com/q/12345/6789",
        "http://stackoverflow.com/questions/12345/some-title",
        "https://www.stackoverflow.com/questions/12345",
        "https://stackoverflow.com/questions/12345/some-title?noredirect=1",
    ):
        assert links.normalize_so_link(url) == (
            "https://stackoverflow.com/q/12345",
            12345,
            "question",
        ), url


def test_normalize_answer_forms():
    for url in (
        "https://stackoverflow.com/a/7777",
        "https://stackoverflow.com/a/7777/123",
        "https://stackoverflow.com/questions/12345/title/7777",
        "https://stackoverflow.com/questions/12345/title#7777",
        "https://stackoverflow.com/questions/12345/title#answer-7777",
    ):
        assert links.normalize_so_link(url) == (
            "https://stackoverflow.com/a/7777",
            7777,
            "answer",
        ), url


def test_normalize_rejects_non_post_links():
    for url in (
        "https://stackoverflow.com/users/1/someone",
        "https://stackoverflow.com/questions/tagged/python",
        "https://stackoverflow.com/",
        "https://example.com/q/12345",
        "not a url",
    ):
        assert links.normalize_so_link(url) is None, url


def test_scan_lines_records_positions():
    lines = [
        "intro",
        "ref https://stackoverflow.com/q/42 inline",
        "skip https://stackoverflow.com/users/9/x",
    ]
    (ref,) = links.scan_lines("repo", "src/main.py", lines)
    assert ref.repo_name == "repo"
    assert ref.branch_filepath == "src/main.py"
    assert ref.line_number == 2
    assert ref.raw_url == "https://stackoverflow.com/q/42"
    assert ref.sharing_link == "https://stackoverflow.com/q/42"
    assert ref.post_id == 42 and ref.post_kind == "question"


def test_scan_pattern_truncates_at_dot():
    (ref,) = links.scan_lines(
        "repo", "f", ["see https://stackoverflow.com/questions/42/how-to.html"]
    )
    assert ref.raw_url == "https://stackoverflow.com/questions/42/how-to"


def test_scan_tree_skips_binary_and_sorts(tmp_path):
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "b.py").write_text(
        "# https://stackoverflow.com/a/7\n", encoding="utf-8"
    )
    (tmp_path / "a.txt").write_text(
        "https://stackoverflow.com/q/3\n", encoding="utf-8"
    )
    (tmp_path / "blob.bin").write_bytes(b"\x00https://stackoverflow.com/q/9")
    refs = links.scan_tree(tmp_path)
    assert [(r.branch_filepath, r.post_id) for r in refs] == [
        ("a.txt", 3),
        ("sub/b.py", 7),
    ]
    assert all(r.repo_name == tmp_path.resolve().name for r in refs)
