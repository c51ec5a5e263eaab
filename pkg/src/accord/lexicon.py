"""Full-form lexicon: morphological analysis, generation, and phonetics.

The lexicon is a flat list of inflected surface forms indexed by surface and
by (lemma, category).  Generation walks the paradigm of a lemma instead of
applying affix rules; the fixture vocabulary covers every sentence shipped
with the package.  Phonemic strings use a flat ASCII alphabet (one character
per phoneme) and are only ever compared for equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .errors import AccordError
from .features import FeatureMap, format_feats, parse_feats, validate_features

CATEGORIES = frozenset(
    {"det", "noun", "adj", "verb", "aux", "pastpart", "pron", "relpron", "prep"}
)


class LexiconFormatError(AccordError):
    """Malformed lexicon file; message names the line number."""


class NoSuchForm(AccordError):
    """The requested inflection does not exist (e.g. masculine of *allure*)."""

    def __init__(self, lemma: str, category: str, target: dict[str, str]):
        self.lemma = lemma
        self.category = category
        self.target = dict(target)
        want = ", ".join(f"{k}={v}" for k, v in sorted(target.items()))
        super().__init__(f"no {category} form of {lemma!r} with {want}")


class AmbiguousForm(AccordError):
    """More than one distinct surface satisfies the inflection request."""

    def __init__(self, lemma: str, category: str, target: dict[str, str], surfaces):
        self.surfaces = sorted(set(surfaces))
        super().__init__(
            f"ambiguous inflection of {lemma!r} ({category}): "
            + " / ".join(self.surfaces)
        )


@dataclass(frozen=True, eq=True)
class LexEntry:
    """One inflected surface form.

    (surface, category, exact feature assignment) is unique within a lexicon.
    Every entry bearing number or gender carries a phonemic string.
    """

    surface: str
    lemma: str
    category: str
    features: FeatureMap = field(compare=True)
    phon: str = ""

    def feature_key(self) -> tuple:
        return tuple(sorted((v, tuple(sorted(vals))) for v, vals in self.features.items()))

    def bears(self, variable: str) -> bool:
        return variable in self.features


def phonetic_alteration(before: LexEntry, after: LexEntry) -> int:
    """1 if the two forms are pronounced differently, else 0."""
    return 0 if before.phon == after.phon else 1


class Lexicon:
    """Immutable after construction; safe for concurrent reading."""

    def __init__(self, entries: Iterable[LexEntry]):
        self.entries: list[LexEntry] = list(entries)
        self._by_surface: dict[str, list[LexEntry]] = {}
        self._by_lemma_cat: dict[tuple[str, str], list[LexEntry]] = {}
        seen: set[tuple] = set()
        for entry in self.entries:
            if entry.category not in CATEGORIES:
                raise LexiconFormatError(f"unknown category {entry.category!r}")
            validate_features(entry.features)
            key = (entry.surface, entry.category, entry.feature_key())
            if key in seen:
                raise LexiconFormatError(
                    f"duplicate entry {entry.surface!r} ({entry.category})"
                )
            seen.add(key)
            if ("num" in entry.features or "gen" in entry.features) and not entry.phon:
                raise LexiconFormatError(
                    f"entry {entry.surface!r} bears number or gender but has no phonetics"
                )
            self._by_surface.setdefault(entry.surface, []).append(entry)
            self._by_lemma_cat.setdefault((entry.lemma, entry.category), []).append(entry)

    def __len__(self) -> int:
        return len(self.entries)

    def analyze(self, surface: str) -> list[LexEntry]:
        """All entries with the given surface form; empty list if unknown."""
        return list(self._by_surface.get(surface, ()))

    def inflect(
        self,
        lemma: str,
        category: str,
        target: dict[str, str],
        source: LexEntry | None = None,
    ) -> LexEntry:
        """Generate the form of ``lemma`` carrying the targeted values.

        ``target`` assigns at most one value per variable.  Variables absent
        from the target must match the ``source`` entry's value sets when a
        source is supplied, which keeps e.g. gender stable while renumbering.

        Raises NoSuchForm when nothing matches and AmbiguousForm when several
        distinct surfaces do.
        """
        for var, value in target.items():
            validate_features({var: frozenset({value})})
        matches = []
        for entry in self._by_lemma_cat.get((lemma, category), ()):
            if source is not None and set(entry.features) != set(source.features):
                continue
            ok = True
            for var, value in target.items():
                if var not in entry.features or value not in entry.features[var]:
                    ok = False
                    break
            if not ok:
                continue
            if source is not None:
                for var, values in source.features.items():
                    if var in target:
                        continue
                    if entry.features.get(var) != values:
                        ok = False
                        break
            if ok:
                matches.append(entry)
        if not matches:
            raise NoSuchForm(lemma, category, target)
        surfaces = {m.surface for m in matches}
        if len(surfaces) > 1:
            raise AmbiguousForm(lemma, category, target, surfaces)
        return matches[0]

    def entry_for(self, surface: str, category: str, features: FeatureMap) -> LexEntry:
        """The entry behind an analyzed word; exact feature match preferred."""
        candidates = [e for e in self.analyze(surface) if e.category == category]
        exact = [e for e in candidates if e.features == features]
        if len(exact) == 1:
            return exact[0]
        if len(candidates) == 1:
            return candidates[0]
        if not candidates:
            raise NoSuchForm(surface, category, {})
        raise AmbiguousForm(surface, category, {}, [e.surface for e in candidates])

    def serialize(self) -> str:
        lines = []
        for e in self.entries:
            phon = e.phon if e.phon else "_"
            lines.append(
                "\t".join((e.surface, e.lemma, e.category, format_feats(e.features), phon))
            )
        return "\n".join(lines) + ("\n" if lines else "")


def load_lexicon(source: str | TextIO) -> Lexicon:
    """Load a 5-column TSV lexicon (``SURFACE LEMMA CAT FEATS PHON``).

    Lines starting with ``#`` are comments; line order is irrelevant to
    behavior.  Malformed lines raise LexiconFormatError naming the line.
    """
    text = source if isinstance(source, str) else source.read()
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 5:
            raise LexiconFormatError(
                f"line {lineno}: expected 5 tab-separated columns, got {len(columns)}"
            )
        surface, lemma, category, feats, phon = (c.strip() for c in columns)
        if category not in CATEGORIES:
            raise LexiconFormatError(f"line {lineno}: unknown category {category!r}")
        try:
            features = parse_feats(feats)
        except ValueError as exc:
            raise LexiconFormatError(f"line {lineno}: {exc}") from exc
        entries.append(
            LexEntry(
                surface=surface,
                lemma=lemma,
                category=category,
                features=features,
                phon="" if phon == "_" else phon,
            )
        )
    try:
        return Lexicon(entries)
    except LexiconFormatError:
        raise
