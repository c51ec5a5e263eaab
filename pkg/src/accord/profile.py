"""Per-user correction profile: criterion weights, threshold, learning.

Every answered question nudges the weights: criteria whose standalone
verdict matched the user's choice are strengthened multiplicatively, the
others weakened, and the automatic-correction threshold decays by a fixed
step until it reaches its floor.  Starting from a deliberately high
threshold, the system asks often at first and grows more autonomous as it
learns the user.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .errors import AccordError
from .heuristics import CRITERIA, ConfidenceVector

STRATEGIES = ("simple", "proportional", "weighted_proportional")

K_MIN = 0.1
K_MAX = 10.0

_FIELDS = (
    "k_majority",
    "k_phonetics",
    "k_omission",
    "k_governor",
    "t",
    "t_floor",
    "eta",
    "delta",
    "strategy",
    "update_count",
)


class ProfileError(AccordError):
    """Invalid profile contents."""


@dataclass(frozen=True)
class Profile:
    k_majority: float
    k_phonetics: float
    k_omission: float
    k_governor: float
    t: float
    t_floor: float
    eta: float
    delta: float
    strategy: str
    update_count: int

    def weight(self, criterion: str) -> float:
        return getattr(self, f"k_{criterion}")

    def validate(self) -> None:
        for criterion in CRITERIA:
            k = self.weight(criterion)
            if not (K_MIN <= k <= K_MAX):
                raise ProfileError(
                    f"k_{criterion} = {k} outside [{K_MIN}, {K_MAX}]"
                )
        if self.t < self.t_floor:
            raise ProfileError(f"threshold {self.t} below its floor {self.t_floor}")
        if self.t_floor < 0:
            raise ProfileError("threshold floor must be non-negative")
        if not (0 < self.eta < 1):
            raise ProfileError(f"learning rate {self.eta} outside (0, 1)")
        if self.delta <= 0:
            raise ProfileError(f"threshold decrement {self.delta} must be positive")
        if self.strategy not in STRATEGIES:
            raise ProfileError(f"unknown strategy {self.strategy!r}")
        if self.update_count < 0:
            raise ProfileError("update_count must be non-negative")


def default_profile() -> Profile:
    """Fresh user: weights (2, 2, 2, 1), a high threshold, gentle learning."""
    return Profile(
        k_majority=2.0,
        k_phonetics=2.0,
        k_omission=2.0,
        k_governor=1.0,
        t=5.0,
        t_floor=0.5,
        eta=0.1,
        delta=0.25,
        strategy="proportional",
        update_count=0,
    )


def decay_threshold(profile: Profile) -> Profile:
    """One decay step, clamped at the floor."""
    return replace(profile, t=max(profile.t_floor, profile.t - profile.delta))


def update_weights(
    profile: Profile, vectors: Sequence[ConfidenceVector], chosen: str
) -> Profile:
    """Learn from one answered question.

    For each criterion, its standalone verdict is the candidate value with
    the strictly highest score under that criterion alone.  A verdict that
    matches the chosen value strengthens the weight, a dissenting verdict
    weakens it, and a tie (including all-zero scores) leaves it unchanged.
    The threshold then decays once.
    """
    values = [v.value for v in vectors]
    if chosen not in values:
        raise ValueError(f"chosen value {chosen!r} not among candidates {values}")
    updates = {}
    for criterion in CRITERIA:
        scores = [(v.scores[criterion], v.value) for v in vectors]
        best = max(score for score, _ in scores)
        winners = [value for score, value in scores if score == best]
        if len(winners) != 1:
            continue
        k = profile.weight(criterion)
        if winners[0] == chosen:
            updates[f"k_{criterion}"] = min(K_MAX, k * (1 + profile.eta))
        else:
            updates[f"k_{criterion}"] = max(K_MIN, k * (1 - profile.eta))
    updated = replace(profile, update_count=profile.update_count + 1, **updates)
    return decay_threshold(updated)


def save_profile(profile: Profile) -> str:
    """Flat ``key = value`` text, one line per field."""
    lines = [f"{name} = {getattr(profile, name)}" for name in _FIELDS]
    return "\n".join(lines) + "\n"


def load_profile(text: str) -> Profile:
    """Parse and validate a profile file; round-trips save_profile exactly."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ProfileError(f"line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _FIELDS:
            raise ProfileError(f"line {lineno}: unknown field {key!r}")
        if key in raw:
            raise ProfileError(f"line {lineno}: duplicate field {key!r}")
        raw[key] = value.strip()
    missing = [f for f in _FIELDS if f not in raw]
    if missing:
        raise ProfileError(f"missing fields: {', '.join(missing)}")
    try:
        profile = Profile(
            k_majority=float(raw["k_majority"]),
            k_phonetics=float(raw["k_phonetics"]),
            k_omission=float(raw["k_omission"]),
            k_governor=float(raw["k_governor"]),
            t=float(raw["t"]),
            t_floor=float(raw["t_floor"]),
            eta=float(raw["eta"]),
            delta=float(raw["delta"]),
            strategy=raw["strategy"],
            update_count=int(raw["update_count"]),
        )
    except ValueError as exc:
        raise ProfileError(str(exc)) from exc
    profile.validate()
    return profile
