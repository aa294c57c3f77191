import pytest

from postimager.corpus import DEMO_CORPUS_PATH, build_index, load_corpus


@pytest.fixture(scope="session")
def demo_posts():
    return load_corpus(DEMO_CORPUS_PATH)


@pytest.fixture(scope="session")
def demo_index(demo_posts):
    return build_index(demo_posts)
