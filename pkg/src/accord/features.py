"""Agreement variables and the feature notation shared by lexicon and treebank files.

A word's agreement features are a mapping from variable name to a non-empty
set of values drawn from that variable's domain.  A set with more than one
value means the form is ambiguous for that variable (French *les* is both
masculine and feminine).
"""

from __future__ import annotations

NUMBER = "num"
GENDER = "gen"
PERSON = "per"

# Processing order used by the correction loop.
VARIABLES = (NUMBER, GENDER, PERSON)

DOMAINS: dict[str, frozenset[str]] = {
    NUMBER: frozenset({"sin", "plu"}),
    GENDER: frozenset({"mas", "fem"}),
    PERSON: frozenset({"1", "2", "3"}),
}

# Canonical value order per variable, used for display, candidate order,
# and serialization.
VALUE_ORDER: dict[str, tuple[str, ...]] = {
    NUMBER: ("sin", "plu"),
    GENDER: ("mas", "fem"),
    PERSON: ("1", "2", "3"),
}

# Human-readable value names for questions and reports.
VALUE_LABELS = {
    "sin": "singular",
    "plu": "plural",
    "mas": "masculine",
    "fem": "feminine",
    "1": "first person",
    "2": "second person",
    "3": "third person",
}

# var -> frozenset of values; at most one entry per variable by construction.
FeatureMap = dict[str, frozenset[str]]


def parse_feats(text: str) -> FeatureMap:
    """Parse a feature column such as ``num=plu|gen=mas,fem``; ``_`` is empty.

    Raises ValueError naming the offending variable or value.
    """
    text = text.strip()
    if text == "_" or text == "":
        return {}
    features: FeatureMap = {}
    for chunk in text.split("|"):
        if "=" not in chunk:
            raise ValueError(f"malformed feature group {chunk!r}")
        var, _, raw = chunk.partition("=")
        var = var.strip()
        if var not in DOMAINS:
            raise ValueError(f"unknown variable {var!r}")
        if var in features:
            raise ValueError(f"duplicate variable {var!r}")
        values = frozenset(v.strip() for v in raw.split(",") if v.strip())
        if not values:
            raise ValueError(f"empty value set for {var!r}")
        bad = values - DOMAINS[var]
        if bad:
            raise ValueError(f"unknown value {sorted(bad)[0]!r} for {var!r}")
        features[var] = values
    return features


def format_feats(features: FeatureMap) -> str:
    """Render features canonically: variables and values in fixed order."""
    if not features:
        return "_"
    parts = []
    for var in VARIABLES:
        if var in features:
            values = [v for v in VALUE_ORDER[var] if v in features[var]]
            parts.append(f"{var}={','.join(values)}")
    return "|".join(parts)


def validate_features(features: FeatureMap) -> None:
    for var, values in features.items():
        if var not in DOMAINS:
            raise ValueError(f"unknown variable {var!r}")
        if not values:
            raise ValueError(f"empty value set for {var!r}")
        bad = values - DOMAINS[var]
        if bad:
            raise ValueError(f"unknown value {sorted(bad)[0]!r} for {var!r}")


def value_label(value: str) -> str:
    return VALUE_LABELS.get(value, value)
