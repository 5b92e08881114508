import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"

# make `import oracles` work from any test module
sys.path.insert(0, str(TESTS_DIR))

from sufa.coref import tag_corpus  # noqa: E402
from sufa.corpus import attach_metadata, load_metadata, parse_conllu  # noqa: E402
from sufa.lexicon import default_lexicons  # noqa: E402


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def news_corpus():
    """The 4-outlet fixture corpus, metadata attached, untagged."""
    sentences = parse_conllu(read_fixture("corpus/news.conllu"))
    sidecar = load_metadata(read_fixture("corpus/meta.json"))
    return attach_metadata(sentences, sidecar)


@pytest.fixture(scope="session")
def tagged_corpus(news_corpus):
    """The fixture corpus after rule-based entity tagging (no chains)."""
    return tag_corpus(news_corpus, default_lexicons())


@pytest.fixture(scope="session")
def lexicons():
    return default_lexicons()
