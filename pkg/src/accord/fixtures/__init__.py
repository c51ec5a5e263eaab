"""Bundled fixture data: the worked-example lexicon and treebank."""

from __future__ import annotations

from importlib import resources

from ..deptree import DepTree, parse_treebank
from ..lexicon import Lexicon, load_lexicon

LEXICON_FILE = "fr.lex"
SENTENCES_FILE = "sentences.tsv"


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def fixture_lexicon() -> Lexicon:
    return load_lexicon(fixture_text(LEXICON_FILE))


def fixture_trees() -> dict[str, DepTree]:
    return {tree.sentence_id: tree for tree in parse_treebank(fixture_text(SENTENCES_FILE))}
