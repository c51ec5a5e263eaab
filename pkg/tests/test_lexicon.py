import itertools

import pytest

from accord.lexicon import (
    AmbiguousForm,
    LexEntry,
    Lexicon,
    LexiconFormatError,
    NoSuchForm,
    load_lexicon,
    phonetic_alteration,
)


def test_load_maps_columns(lexicon):
    entries = lexicon.analyze("calculs")
    assert len(entries) == 1
    e = entries[0]
    assert e.lemma == "calcul"
    assert e.category == "noun"
    assert e.features["num"] == {"plu"}
    assert e.features["gen"] == {"mas"}
    assert e.phon == "kalkyl"


def test_load_ambiguous_gender_set(lexicon):
    (les,) = lexicon.analyze("les")
    assert les.features["gen"] == {"mas", "fem"}
    assert les.features["num"] == {"plu"}


def test_empty_stream_gives_empty_lexicon():
    assert len(load_lexicon("")) == 0
    assert load_lexicon("# just a comment\n").analyze("les") == []


def test_analyze_known_and_unknown(lexicon):
    (calcul,) = lexicon.analyze("calcul")
    assert calcul.features["num"] == {"sin"}
    assert lexicon.analyze("zzz") == []


def test_inflect_plural_noun(lexicon):
    entry = lexicon.inflect("calcul", "noun", {"num": "plu"})
    assert entry.surface == "calculs"
    assert entry.phon == "kalkyl"


def test_inflect_missing_form(lexicon):
    with pytest.raises(NoSuchForm):
        lexicon.inflect("allure", "noun", {"gen": "mas"})


def test_inflect_identity(lexicon):
    entry = lexicon.inflect("le", "det", {"num": "sin", "gen": "mas"})
    assert entry.surface == "le"


def test_inflect_preserves_source_variables(lexicon):
    (dressees,) = lexicon.analyze("dressées")
    entry = lexicon.inflect("dressé", "adj", {"gen": "mas"}, source=dressees)
    assert entry.surface == "dressés"


def test_inflect_ambiguous_is_an_error():
    text = (
        "bon\tbon\tadj\tnum=sin|gen=mas\tbY\n"
        "bonne\tbon\tadj\tnum=sin|gen=fem\tbOn\n"
        "bonnes\tbon\tadj\tnum=plu|gen=fem\tbOn\n"
    )
    lex = load_lexicon(text)
    # No number requested, no source: two distinct feminine surfaces match.
    with pytest.raises(AmbiguousForm):
        lex.inflect("bon", "adj", {"gen": "fem"})


def test_phonetic_alteration(lexicon):
    (calcul,) = lexicon.analyze("calcul")
    (calculs,) = lexicon.analyze("calculs")
    (les,) = lexicon.analyze("les")
    (le,) = [e for e in lexicon.analyze("le") if e.category == "det"]
    assert phonetic_alteration(calcul, calculs) == 0
    assert phonetic_alteration(les, le) == 1
    assert phonetic_alteration(calcul, calcul) == 0
    # symmetry
    assert phonetic_alteration(le, les) == phonetic_alteration(les, le)


@pytest.mark.parametrize(
    "line, fragment",
    [
        ("les\tle\tdet\tnum=plu", "5 tab-separated columns"),
        ("les\tle\tarticle\tnum=plu\tle", "unknown category"),
        ("les\tle\tdet\tnum=dual\tle", "unknown value"),
        ("les\tle\tdet\tcase=nom\tle", "unknown variable"),
        ("les\tle\tdet\tnum=plu|num=sin\tle", "duplicate variable"),
    ],
)
def test_load_errors_name_the_line(line, fragment):
    text = "# header\n" + line + "\n"
    with pytest.raises(LexiconFormatError) as err:
        load_lexicon(text)
    assert "line 2" in str(err.value)
    assert fragment in str(err.value)


def test_duplicate_entry_rejected():
    line = "les\tle\tdet\tnum=plu\tle\n"
    with pytest.raises(LexiconFormatError) as err:
        load_lexicon(line + line)
    assert "duplicate" in str(err.value)


def test_entry_with_number_needs_phonetics():
    with pytest.raises(LexiconFormatError) as err:
        load_lexicon("les\tle\tdet\tnum=plu\t_\n")
    assert "phonetics" in str(err.value)


def test_serialize_round_trip_preserves_entries(lexicon, lexicon_text):
    once = load_lexicon(lexicon_text)
    text1 = once.serialize()
    twice = load_lexicon(text1)
    assert twice.entries == once.entries
    assert twice.serialize() == text1


def test_inflect_round_trips_every_entry(lexicon):
    """Regenerating an entry from its own lemma and features finds it again."""
    for entry in lexicon.entries:
        if not entry.features:
            continue
        variables = sorted(entry.features)
        for combo in itertools.product(*(sorted(entry.features[v]) for v in variables)):
            target = dict(zip(variables, combo))
            regenerated = lexicon.inflect(entry.lemma, entry.category, target)
            assert regenerated.surface == entry.surface, (entry, target)


def test_entry_for_exact_feature_match(lexicon):
    entry = lexicon.entry_for("les", "det", {"num": frozenset({"plu"}), "gen": frozenset({"mas", "fem"})})
    assert entry.surface == "les"
    with pytest.raises(NoSuchForm):
        lexicon.entry_for("zzz", "noun", {})
