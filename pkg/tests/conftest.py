import io
from pathlib import Path

import pytest

from posthist import ingest, matcher, pipeline

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture_records(name: str = "synthetic50"):
    return ingest.read_post_history(FIXTURES / name / "posts.tsv")


def build_corpus(posts_text: str, config=None):
    records = list(ingest.parse_post_history(io.StringIO(posts_text)))
    return pipeline.reconstruct(records, config or matcher.PRESETS["paper-final"])


@pytest.fixture(scope="session")
def synthetic50_corpus():
    records = load_fixture_records()
    return pipeline.reconstruct(records, matcher.PRESETS["paper-final"])


@pytest.fixture(scope="session")
def synthetic50_gt(synthetic50_corpus):
    from posthist import evaluate

    return evaluate.load_ground_truth(
        FIXTURES / "synthetic50" / "gt.csv", synthetic50_corpus, name="synthetic50"
    )
