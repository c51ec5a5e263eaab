"""Dependency-tree data model and treebank file round-trip.

Input sentences arrive pre-parsed: one block per sentence, one node per
line, columns ``ID FORM LEMMA CAT FEATS HEAD DEPREL``.  Node ids double as
linear positions (1-based), which is what the preceding-object condition of
the past-participle rule consumes.  Trees are immutable values; correction
produces new trees.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, TextIO

from .errors import AccordError
from .features import FeatureMap, format_feats, parse_feats
from .lexicon import CATEGORIES

DEPRELS = frozenset(
    {"det", "adj", "subj", "obj", "relcl", "aux", "ppart", "prep", "pobj", "attr", "root"}
)


class TreebankFormatError(AccordError):
    """Malformed treebank input; message carries sentence id and line number."""


@dataclass(frozen=True)
class DepNode:
    id: int
    surface: str
    lemma: str
    category: str
    features: FeatureMap
    head: int
    deprel: str

    def bears(self, variable: str) -> bool:
        return variable in self.features

    def values(self, variable: str) -> frozenset[str]:
        return self.features[variable]


@dataclass(frozen=True)
class DepTree:
    nodes: tuple[DepNode, ...]
    sentence_id: str

    def __post_init__(self):
        _validate(self)

    def node(self, node_id: int) -> DepNode:
        return self.nodes[node_id - 1]

    def root(self) -> DepNode:
        for n in self.nodes:
            if n.head == 0:
                return n
        raise AssertionError("validated tree must have a root")

    def children(self, node_id: int) -> list[DepNode]:
        return [n for n in self.nodes if n.head == node_id]

    def depth(self, node_id: int) -> int:
        d = 0
        n = self.node(node_id)
        while n.head != 0:
            n = self.node(n.head)
            d += 1
        return d

    def ancestors(self, node_id: int) -> list[DepNode]:
        """Chain from the node's governor up to the root."""
        out = []
        n = self.node(node_id)
        while n.head != 0:
            n = self.node(n.head)
            out.append(n)
        return out

    def render_text(self) -> str:
        """Surface string; elided forms (ending in an apostrophe) take no space."""
        parts: list[str] = []
        for n in self.nodes:
            parts.append(n.surface)
            parts.append("" if n.surface.endswith("'") else " ")
        return "".join(parts).strip()

    def with_nodes(self, new_nodes: dict[int, DepNode]) -> "DepTree":
        nodes = tuple(new_nodes.get(n.id, n) for n in self.nodes)
        return replace(self, nodes=nodes)


def precedes(a: DepNode, b: DepNode) -> bool:
    """True iff ``a`` is linearly before ``b`` (strict)."""
    return a.id < b.id


def _validate(tree: DepTree) -> None:
    sid = tree.sentence_id
    n = len(tree.nodes)
    if n == 0:
        raise TreebankFormatError(f"sentence {sid!r}: empty tree")
    ids = [node.id for node in tree.nodes]
    if ids != list(range(1, n + 1)):
        seen = set()
        for i in ids:
            if i in seen:
                raise TreebankFormatError(f"sentence {sid!r}: duplicate id {i}")
            seen.add(i)
        raise TreebankFormatError(
            f"sentence {sid!r}: ids must be 1..{n} in order, got {ids}"
        )
    roots = [node for node in tree.nodes if node.head == 0]
    if len(roots) != 1:
        raise TreebankFormatError(
            f"sentence {sid!r}: expected exactly one root, found {len(roots)}"
        )
    for node in tree.nodes:
        if node.head < 0 or node.head > n:
            raise TreebankFormatError(
                f"sentence {sid!r}: node {node.id} head {node.head} out of range"
            )
        if node.head == node.id:
            raise TreebankFormatError(
                f"sentence {sid!r}: node {node.id} is its own head"
            )
        if node.head == 0 and node.deprel != "root":
            raise TreebankFormatError(
                f"sentence {sid!r}: root node {node.id} must use deprel 'root'"
            )
        if node.head != 0 and node.deprel == "root":
            raise TreebankFormatError(
                f"sentence {sid!r}: non-root node {node.id} uses deprel 'root'"
            )
    # Every node must reach the root; a failure indicates a head cycle.
    for node in tree.nodes:
        visited = {node.id}
        cur = node
        while cur.head != 0:
            if cur.head in visited:
                raise TreebankFormatError(
                    f"sentence {sid!r}: cycle through node {cur.head}"
                )
            visited.add(cur.head)
            cur = tree.nodes[cur.head - 1]


def parse_treebank(source: str | TextIO) -> list[DepTree]:
    """Parse blank-line-separated sentence blocks into validated trees."""
    text = source if isinstance(source, str) else source.read()
    trees: list[DepTree] = []
    pending: list[DepNode] = []
    sentence_id: str | None = None

    def flush(lineno: int):
        nonlocal pending, sentence_id
        if not pending:
            sentence_id = None
            return
        if sentence_id is None:
            raise TreebankFormatError(
                f"line {lineno}: sentence block without a '# sent_id =' header"
            )
        trees.append(DepTree(nodes=tuple(pending), sentence_id=sentence_id))
        pending = []
        sentence_id = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            flush(lineno)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id"):
                _, _, value = body.partition("=")
                sentence_id = value.strip()
            continue
        columns = line.split("\t")
        if len(columns) != 7:
            raise TreebankFormatError(
                f"line {lineno}: expected 7 tab-separated columns, got {len(columns)}"
            )
        sid = sentence_id or "?"
        raw_id, form, lemma, category, feats, head, deprel = (c.strip() for c in columns)
        try:
            node_id = int(raw_id)
            head_id = int(head)
        except ValueError as exc:
            raise TreebankFormatError(f"line {lineno} (sentence {sid!r}): {exc}") from exc
        if category not in CATEGORIES:
            raise TreebankFormatError(
                f"line {lineno} (sentence {sid!r}): unknown category {category!r}"
            )
        if deprel not in DEPRELS:
            raise TreebankFormatError(
                f"line {lineno} (sentence {sid!r}): unknown deprel {deprel!r}"
            )
        try:
            features = parse_feats(feats)
        except ValueError as exc:
            raise TreebankFormatError(f"line {lineno} (sentence {sid!r}): {exc}") from exc
        pending.append(
            DepNode(
                id=node_id,
                surface=form,
                lemma=lemma,
                category=category,
                features=features,
                head=head_id,
                deprel=deprel,
            )
        )
    flush(len(text.splitlines()) + 1)
    return trees


def serialize_treebank(trees: Iterable[DepTree]) -> str:
    """Canonical text form; parse_treebank round-trips it field-for-field."""
    blocks = []
    for tree in trees:
        lines = [f"# sent_id = {tree.sentence_id}"]
        for n in tree.nodes:
            lines.append(
                "\t".join(
                    (
                        str(n.id),
                        n.surface,
                        n.lemma,
                        n.category,
                        format_feats(n.features),
                        str(n.head),
                        n.deprel,
                    )
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
