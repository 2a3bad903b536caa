import io

import pytest

from posthist import evaluate, ingest, matcher, pipeline
from posthist.synthetic import make_corpus


def _reconstruct(corpus_text):
    records = list(ingest.parse_post_history(io.StringIO(corpus_text)))
    return pipeline.reconstruct(records, matcher.PRESETS["paper-final"])


def test_generation_is_deterministic():
    a = make_corpus(seed=3, n_posts=5)
    b = make_corpus(seed=3, n_posts=5)
    assert a.posts_tsv() == b.posts_tsv()
    assert a.gt_csv() == b.gt_csv()
    c = make_corpus(seed=4, n_posts=5)
    assert c.posts_tsv() != a.posts_tsv()


def test_posts_parse_and_alternate():
    generated = make_corpus(seed=9, n_posts=8, min_versions=2, max_versions=5,
                            profile="structural")
    corpus = _reconstruct(generated.posts_tsv())
    assert len(corpus) == 8
    for versions in corpus.values():
        for version in versions:
            types = [b.block_type for b in version.blocks]
            assert all(t1 != t2 for t1, t2 in zip(types, types[1:])), types
            assert version.blocks, "every version keeps at least one block"


def test_ground_truth_validates_against_corpus():
    generated = make_corpus(seed=21, n_posts=10, min_versions=2, max_versions=6,
                            profile="structural")
    corpus = _reconstruct(generated.posts_tsv())
    gt = evaluate.load_ground_truth(io.StringIO(generated.gt_csv()), corpus)
    assert gt.post_ids == sorted(corpus)
    # Every version pair of every post is covered by a row (link or no-pred).
    covered = set(gt.no_pred)
    for conns in gt.connections.values():
        covered |= {(p, v, l) for p, v, l, _ in conns}
    expected = {
        (post_id, v.version_index, b.local_id)
        for post_id, versions in corpus.items()
        for v in versions[1:]
        for b in v.blocks
    }
    assert covered == expected


def test_stable_profile_keeps_local_ids():
    generated = make_corpus(seed=7, n_posts=10, min_versions=3, max_versions=5,
                            profile="stable")
    corpus = _reconstruct(generated.posts_tsv())
    gt = evaluate.load_ground_truth(io.StringIO(generated.gt_csv()), corpus)
    for block_type in ("text", "code"):
        for _post, _version, cur_local, pred_local in gt.connections[block_type]:
            assert cur_local == pred_local


def test_structural_profile_shifts_some_local_ids():
    generated = make_corpus(seed=50, n_posts=30, min_versions=3, max_versions=6,
                            profile="structural")
    corpus = _reconstruct(generated.posts_tsv())
    gt = evaluate.load_ground_truth(io.StringIO(generated.gt_csv()), corpus)
    shifted = sum(
        1
        for block_type in ("text", "code")
        for _p, _v, cur_local, pred_local in gt.connections[block_type]
        if cur_local != pred_local
    )
    assert shifted > 0


def test_comments_reference_known_posts():
    generated = make_corpus(seed=13, n_posts=6, with_comments=True)
    post_ids = set()
    for line in generated.posts_tsv().splitlines():
        post_ids.add(int(line.split("\t")[1]))
    lines = generated.comments_tsv().splitlines()
    assert lines
    for line in lines:
        post_id, stamp, user = line.split("\t")
        assert int(post_id) in post_ids
        parsed = ingest.parse_timestamp(stamp)
        assert parsed.year >= 2015


def test_first_post_id_offset():
    generated = make_corpus(seed=2, n_posts=3, first_post_id=100)
    ids = sorted({int(line.split("\t")[1]) for line in generated.posts_tsv().splitlines()})
    assert ids == [100, 101, 102]


def test_paper_final_beats_equal_baseline():
    generated = make_corpus(seed=33, n_posts=15, min_versions=3, max_versions=5,
                            profile="structural")
    corpus = _reconstruct(generated.posts_tsv())
    gt = evaluate.load_ground_truth(io.StringIO(generated.gt_csv()), corpus)
    final = evaluate.evaluate_config(corpus, gt, matcher.PAPER_FINAL)
    baseline = evaluate.evaluate_config(corpus, gt, matcher.EQUAL_BASELINE)
    assert final.mcc_text + final.mcc_code > baseline.mcc_text + baseline.mcc_code
    assert final.mcc_text > 0.9 and final.mcc_code > 0.9
