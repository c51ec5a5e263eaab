import pytest

from accord.fixtures import fixture_lexicon, fixture_text, fixture_trees
from accord.profile import default_profile


@pytest.fixture(scope="session")
def lexicon():
    return fixture_lexicon()


@pytest.fixture(scope="session")
def trees():
    return fixture_trees()


@pytest.fixture(scope="session")
def lexicon_text():
    return fixture_text("fr.lex")


@pytest.fixture(scope="session")
def sentences_text():
    return fixture_text("sentences.tsv")


@pytest.fixture
def profile():
    return default_profile()
