from dataclasses import replace
from fractions import Fraction

import pytest

from accord.heuristics import ConfidenceVector
from accord.profile import (
    K_MAX,
    K_MIN,
    ProfileError,
    decay_threshold,
    default_profile,
    load_profile,
    save_profile,
    update_weights,
)


def _vector(value, majority, phonetics, omission, governor):
    scores = {
        "majority": Fraction(majority),
        "phonetics": Fraction(phonetics),
        "omission": Fraction(omission),
        "governor": Fraction(governor),
    }
    total = sum(scores.values())
    return ConfidenceVector(value=value, scores=scores, total=total, percentage=Fraction(0))


# Standalone verdicts of the mixed-noun-phrase example: majority and
# governor say singular, phonetics and omission say plural.
MIXED_NP_VECTORS = [
    _vector("sin", 3, 1, 0, 1),
    _vector("plu", Fraction(4, 3), 2, 2, 0),
]


def test_defaults():
    p = default_profile()
    assert (p.k_majority, p.k_phonetics, p.k_omission, p.k_governor) == (2, 2, 2, 1)
    assert p.t == 5
    assert p.t_floor == 0.5
    assert p.eta == 0.1
    assert p.delta == 0.25
    assert p.strategy == "proportional"
    assert p.update_count == 0
    assert p.t >= p.t_floor
    p.validate()


def test_update_direction_when_user_forces_singular():
    p = default_profile()
    updated = update_weights(p, MIXED_NP_VECTORS, "sin")
    assert updated.k_majority > p.k_majority
    assert updated.k_governor > p.k_governor
    assert updated.k_phonetics < p.k_phonetics
    assert updated.k_omission < p.k_omission
    assert updated.update_count == 1
    assert updated.t == pytest.approx(4.75)


def test_update_direction_when_user_confirms_plural():
    p = default_profile()
    updated = update_weights(p, MIXED_NP_VECTORS, "plu")
    assert updated.k_phonetics > p.k_phonetics
    assert updated.k_omission > p.k_omission
    assert updated.k_majority < p.k_majority
    assert updated.k_governor < p.k_governor


def test_tied_criterion_is_left_alone():
    vectors = [
        _vector("sin", 2, 1, 0, 0),
        _vector("plu", 2, 2, 2, 0),  # majority tied, governor all-zero
    ]
    p = default_profile()
    updated = update_weights(p, vectors, "plu")
    assert updated.k_majority == p.k_majority
    assert updated.k_governor == p.k_governor
    assert updated.k_phonetics > p.k_phonetics


def test_update_rejects_unknown_choice():
    with pytest.raises(ValueError):
        update_weights(default_profile(), MIXED_NP_VECTORS, "fem")


def test_weights_stay_clamped():
    p = default_profile()
    for _ in range(60):
        p = update_weights(p, MIXED_NP_VECTORS, "sin")
    assert p.k_majority <= K_MAX
    assert p.k_governor <= K_MAX
    assert p.k_phonetics >= K_MIN
    assert p.k_omission >= K_MIN


def test_repeated_answers_move_weights_monotonically():
    p = default_profile()
    for _ in range(20):
        nxt = update_weights(p, MIXED_NP_VECTORS, "sin")
        assert nxt.k_majority >= p.k_majority
        assert nxt.k_governor >= p.k_governor
        assert nxt.k_phonetics <= p.k_phonetics
        assert nxt.k_omission <= p.k_omission
        p = nxt


def test_decay_threshold():
    p = default_profile()
    assert decay_threshold(p).t == pytest.approx(4.75)
    floored = replace(p, t=p.t_floor)
    assert decay_threshold(floored).t == p.t_floor
    for _ in range(20):
        p = decay_threshold(p)
    assert p.t == p.t_floor


def test_decay_is_monotone_non_increasing():
    p = default_profile()
    last = p.t
    for _ in range(30):
        p = decay_threshold(p)
        assert p.t <= last
        assert p.t >= p.t_floor
        last = p.t


def test_save_load_round_trip():
    p = default_profile()
    text = save_profile(p)
    assert load_profile(text) == p
    assert save_profile(load_profile(text)) == text
    # and after some evolution
    evolved = update_weights(p, MIXED_NP_VECTORS, "sin")
    text = save_profile(evolved)
    assert load_profile(text) == evolved


@pytest.mark.parametrize(
    "patch, fragment",
    [
        ({"k_majority": "-1.0"}, "outside"),
        ({"k_majority": "0.0"}, "outside"),
        ({"k_phonetics": "50"}, "outside"),
        ({"t": "0.1"}, "below its floor"),
        ({"eta": "0.0"}, "learning rate"),
        ({"eta": "1.5"}, "learning rate"),
        ({"delta": "-0.25"}, "decrement"),
        ({"strategy": "plurality"}, "unknown strategy"),
        ({"update_count": "-3"}, "non-negative"),
    ],
)
def test_load_rejects_invalid_values(patch, fragment):
    fields = {
        "k_majority": "2.0",
        "k_phonetics": "2.0",
        "k_omission": "2.0",
        "k_governor": "1.0",
        "t": "5.0",
        "t_floor": "0.5",
        "eta": "0.1",
        "delta": "0.25",
        "strategy": "proportional",
        "update_count": "0",
    }
    fields.update(patch)
    text = "\n".join(f"{k} = {v}" for k, v in fields.items()) + "\n"
    with pytest.raises(ProfileError) as err:
        load_profile(text)
    assert fragment in str(err.value)


def test_load_rejects_malformed_text():
    with pytest.raises(ProfileError):
        load_profile("k_majority: 2.0\n")
    with pytest.raises(ProfileError) as err:
        load_profile("k_majority = 2.0\n")
    assert "missing fields" in str(err.value)
    with pytest.raises(ProfileError) as err:
        load_profile(save_profile(default_profile()) + "extra = 1\n")
    assert "unknown field" in str(err.value)
