"""Correction-confidence criteria and confidence-vector assembly.

Four criteria score each candidate target value of a group:

  majority    prefer the value already held by most words: the fewer words
              a correction touches, the likelier it is right
  phonetics   prefer corrections that leave the sentence's pronunciation
              unchanged (misspellings tend to follow the sound)
  omission    prefer corrections that only add characters: writers omit a
              plural *s* far more often than they insert one
  governor    prefer the value carried by the group's head word, which
              writers get right more often than its satellites

A zero score marks a criterion that cannot be evaluated for that value.
Scores are exact rationals so reference tables compare exactly; rounding
happens only at display time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .deptree import DepTree
from .lexicon import LexEntry
from .partition import AgreementGroup

CRITERIA = ("majority", "phonetics", "omission", "governor")


@dataclass(frozen=True)
class Candidate:
    """A target value plus the regenerated forms realizing it.

    ``corrected`` are the members whose current value set excludes the
    value, ``kept`` the others; ``new_forms`` and ``old_forms`` cover
    exactly the corrected members.
    """

    variable: str
    value: str
    corrected: tuple[int, ...]
    kept: tuple[int, ...]
    new_forms: Mapping[int, LexEntry]
    old_forms: Mapping[int, LexEntry]
    alterations: Mapping[int, int]

    @property
    def phonetic_alterations(self) -> int:
        return sum(self.alterations.values())

    def restricted_to(self, member_ids) -> "Candidate":
        """Projection of this candidate onto a sub-group's members."""
        keep = set(member_ids)
        return Candidate(
            variable=self.variable,
            value=self.value,
            corrected=tuple(m for m in self.corrected if m in keep),
            kept=tuple(m for m in self.kept if m in keep),
            new_forms={m: e for m, e in self.new_forms.items() if m in keep},
            old_forms={m: e for m, e in self.old_forms.items() if m in keep},
            alterations={m: a for m, a in self.alterations.items() if m in keep},
        )


@dataclass(frozen=True)
class ConfidenceVector:
    value: str
    scores: Mapping[str, Fraction]
    total: Fraction
    percentage: Fraction


def majority_score(candidate: Candidate, weight) -> Fraction:
    """weight * (1 + kept words) / (1 + corrected words)."""
    return (
        Fraction(weight)
        * (1 + len(candidate.kept))
        / (1 + len(candidate.corrected))
    )


def phonetic_score(candidate: Candidate, weight) -> Fraction:
    """weight / (1 + number of corrected words whose pronunciation changes)."""
    return Fraction(weight) / (1 + candidate.phonetic_alterations)


def omission_score(candidate: Candidate, weight) -> Fraction:
    """Full weight when every corrected surface strictly extends the current
    one (pure character addition, the omitted-letter case); else zero.
    Zero also when nothing is corrected: the criterion cannot be evaluated.
    """
    if not candidate.corrected:
        return Fraction(0)
    for member in candidate.corrected:
        old = candidate.old_forms[member].surface
        new = candidate.new_forms[member].surface
        if not (new.startswith(old) and len(new) > len(old)):
            return Fraction(0)
    return Fraction(weight)


def governor_score(
    governor_values: frozenset[str] | None,
    candidate: Candidate,
    weight,
    candidate_values: Sequence[str],
) -> Fraction:
    """Full weight when the group's head word carries the value.

    Zero for every candidate when the head carries all candidate values
    (or none): it cannot discriminate.
    """
    if governor_values is None:
        return Fraction(0)
    if all(v in governor_values for v in candidate_values):
        return Fraction(0)
    return Fraction(weight) if candidate.value in governor_values else Fraction(0)


def confidence_vector(
    tree: DepTree,
    group: AgreementGroup,
    candidates: Sequence[Candidate],
    profile,
) -> list[ConfidenceVector]:
    """Score every candidate of a group and normalize totals to percentages."""
    if not candidates:
        raise ValueError("confidence_vector needs at least one candidate")
    governor_values = group.governor_values(tree)
    values = [c.value for c in candidates]
    rows = []
    for candidate in candidates:
        scores = {
            "majority": majority_score(candidate, profile.k_majority),
            "phonetics": phonetic_score(candidate, profile.k_phonetics),
            "omission": omission_score(candidate, profile.k_omission),
            "governor": governor_score(
                governor_values, candidate, profile.k_governor, values
            ),
        }
        rows.append((candidate.value, scores, sum(scores.values(), Fraction(0))))
    grand_total = sum(total for _, _, total in rows)
    vectors = []
    for value, scores, total in rows:
        if grand_total == 0:
            # Defensive: cannot happen while the majority weight is positive.
            percentage = Fraction(100, len(rows))
        else:
            percentage = Fraction(100) * total / grand_total
        vectors.append(
            ConfidenceVector(value=value, scores=scores, total=total, percentage=percentage)
        )
    return vectors
