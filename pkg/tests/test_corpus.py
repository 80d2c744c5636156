import json
import unicodedata

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lyricmetrics.corpus import (
    AlignmentError,
    CorpusParseError,
    CorpusStats,
    SchemaError,
    build_song,
    corpus_stats,
    load_songs,
    parse_corpus,
    read_corpus,
    serialize_corpus,
    song_to_dict,
    validate_alignment,
)


def song_dict(sections, **meta):
    base = dict(
        song_id="s1",
        artist="A",
        track="T",
        genre="kpop",
        translation_status="official",
        original_language="kr",
    )
    base.update(meta)
    base["sections"] = [{"lines": [{"en": en, "kr": kr} for en, kr in sec]} for sec in sections]
    return base


def encode(obj) -> bytes:
    return json.dumps(obj, ensure_ascii=False).encode("utf-8")


def test_two_by_two_song_structure():
    data = song_dict([[("a b", "가"), ("c", "나")], [("d", "다"), ("e", "라")]])
    [song] = parse_corpus(encode([data]))
    assert len(song.sections) == 2 and song.n_lines == 4
    assert [line.line_index for line in song.lines] == [1, 2, 3, 4]
    assert [s.section_index for s in song.sections] == [1, 2]


def test_excerpt_fixture(excerpt_song):
    assert len(excerpt_song.sections) == 2
    assert excerpt_song.n_lines == 8
    first = excerpt_song.lines[0]
    assert first.en == first.kr == "You don't know me"


def test_jsonl_and_array_agree():
    songs = [song_dict([[("x", "가")]], song_id=f"s{i}") for i in range(3)]
    as_array = parse_corpus(encode(songs))
    as_lines = parse_corpus(b"\n".join(encode(s) for s in songs) + b"\n")
    assert as_array == as_lines
    assert [s.song_id for s in as_array] == ["s0", "s1", "s2"]


def test_missing_korean_counterpart_names_section_two():
    data = song_dict([[("a", "가")], [("b", "나"), ("c", "다")]])
    del data["sections"][1]["lines"][1]["kr"]
    with pytest.raises(AlignmentError) as info:
        parse_corpus(encode([data]))
    [v] = info.value.violations
    assert v.section_index == 2 and v.rule == "non-empty-line" and v.song_id == "s1"


def test_empty_korean_line_three_violation():
    song = build_song("s", [[("a", "가"), ("b", "나")], [("c", "")]])
    [v] = validate_alignment(song)
    assert (v.rule, v.line_index, v.section_index) == ("non-empty-line", 3, 2)


def test_non_contiguous_sections():
    data = song_dict([[("a", "가")], [("b", "나")]])
    data["sections"][1]["section_index"] = 3
    [song] = load_songs(encode([data]))
    rules = [v.rule for v in validate_alignment(song)]
    assert rules == ["contiguous-sections"]


def test_clean_fixture_has_no_violations(excerpt_song):
    assert validate_alignment(excerpt_song) == []


def test_bad_metadata_is_reported():
    song = build_song("s", [[("a", "가")]], genre="jazz")
    assert [v.rule for v in validate_alignment(song)] == ["genre"]


def test_malformed_json_reports_byte_offset():
    payload = '[{"song_id": "가나"}, oops]'.encode("utf-8")
    with pytest.raises(CorpusParseError) as info:
        parse_corpus(payload)
    assert info.value.byte_offset == payload.index(b"oops")


def test_schema_error_has_field_path():
    data = song_dict([[("a", "가")]])
    data["sections"][0]["lines"][0]["en"] = 5
    with pytest.raises(SchemaError) as info:
        parse_corpus(encode([data]))
    assert "$[0].sections[0].lines[0].en" in str(info.value)


def test_nfc_normalization_on_load():
    decomposed = "\u1100\u1161"  # conjoining jamo for 가
    [song] = parse_corpus(encode([song_dict([[("a", decomposed)]])]))
    assert song.lines[0].kr == "가"


def test_read_corpus_sample(sample_corpus_path):
    songs = read_corpus(sample_corpus_path)
    assert len(songs) == 10
    assert all(validate_alignment(s) == [] for s in songs)


def test_stats_empty_corpus():
    assert corpus_stats([]) == CorpusStats()


def test_stats_shared_section():
    shared = [("same line", "같은 줄"), ("second", "둘째")]
    a = build_song("a", [shared, [("only a", "에이")]])
    b = build_song("b", [[("only b", "비")], shared])
    stats = corpus_stats([a, b])
    assert stats.songs == 2
    assert stats.total_sections == 4
    assert stats.unique_sections_en == 3 and stats.unique_sections_kr == 3
    assert stats.total_lines == 6
    assert stats.unique_lines_en == 4
    # same, line, second, only, a, b
    assert stats.vocab_en == 6


def test_stats_trim_before_comparison():
    a = build_song("a", [[("hi ", "안녕")]])
    b = build_song("b", [[(" hi", "안녕 ")]])
    assert corpus_stats([a, b]).unique_lines_en == 1


text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp")), min_size=1, max_size=12
).filter(lambda s: s.strip())
sections = st.lists(st.lists(st.tuples(text, text), min_size=1, max_size=3), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(sections=sections, jsonl=st.booleans())
def test_round_trip(sections, jsonl):
    sections = [[(unicodedata.normalize("NFC", e), unicodedata.normalize("NFC", k)) for e, k in sec] for sec in sections]
    song = build_song("rt", sections, artist="x", track="y", genre="theatre")
    again = parse_corpus(serialize_corpus([song], jsonl=jsonl))
    assert again == [song]


def test_round_trip_keeps_bad_indices():
    data = song_dict([[("a", "가")], [("b", "나")]])
    data["sections"][1]["section_index"] = 5
    [song] = load_songs(encode([data]))
    assert song_to_dict(song)["sections"][1]["section_index"] == 5
    [again] = load_songs(serialize_corpus([song]))
    assert again == song
