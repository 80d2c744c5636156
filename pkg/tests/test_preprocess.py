import io
import json
import random

import pytest
from synth import random_corpus

from lyricmetrics.corpus import read_corpus
from lyricmetrics.preprocess import (
    SEP,
    annotate_line,
    annotate_section,
    check_seed,
    emit_training_file,
    read_sentence_pairs,
    segment_general,
    split_spans,
    syl_values,
    training_pairs,
)
from lyricmetrics.syllable import syllables


def test_hello_anchor():
    pair = annotate_line(("annyeonghaseyo", "Hello"))
    assert pair.source == "<SYL2> annyeonghaseyo"
    assert pair.target == "<SYL2> Hello"


def test_without_syl_is_identity():
    pair = annotate_line(("annyeonghaseyo", "Hello"), "without_syl")
    assert (pair.source, pair.target) == ("annyeonghaseyo", "Hello")


def test_count_comes_from_english_side():
    pair = annotate_line(("하늘을 피해 숨지", "I'll stray off the path I'm walking"))
    assert pair.source.startswith("<SYL8> ") and pair.target.startswith("<SYL8> ")


def test_zero_syllable_target_skipped():
    assert annotate_line(("음", "...")) is None


def test_one_line_section_equals_line():
    line = annotate_line(("안녕", "Hello"))
    section = annotate_section([("안녕", "Hello")], seed=3)
    assert (section.source, section.target) == (line.source, line.target)


def test_section_keeps_order_of_counts():
    pair = annotate_section([("하늘을 피해 숨지", "Holding on when hope is gone"), ("가나다", "Light me up tonight")])
    assert pair.target == "<SYL7> Holding on when hope is gone <SYL5> Light me up tonight"
    assert syl_values(pair.source) == [7, 5]


def test_section_without_syl_uses_separator():
    pair = annotate_section([("가", "one"), ("나", "two")], "without_syl")
    assert pair.source == f"가 {SEP} 나" and pair.target == f"one {SEP} two"


def test_shuffle_matches_permutation_oracle():
    section = [(f"줄{i}", f"line {w}") for i, w in enumerate(["one", "two", "three", "four", "five"])]
    pair = annotate_section(section, seed=42)
    order = list(range(5))
    random.Random(42).shuffle(order)
    assert split_spans(pair.target) == [section[i][1] for i in order]
    assert split_spans(pair.source) == [section[i][0] for i in order]


def test_segment_general_sums_to_whole():
    kr, en = "나는 오늘 밤 거리를 걸어 간다", "I walk the empty street tonight"
    for seed in range(50):
        pair = segment_general((kr, en), seed)
        assert sum(syl_values(pair.target)) == syllables(en)
        assert syl_values(pair.source) == syl_values(pair.target)
        assert " ".join(split_spans(pair.target)) == en
        assert " ".join(split_spans(pair.source)) == kr
        assert 1 <= len(syl_values(pair.target)) <= 4


def test_segment_general_single_word_is_capped():
    pair = segment_general(("annyeonghaseyo", "Hello"), 9)
    assert (pair.source, pair.target) == ("<SYL2> annyeonghaseyo", "<SYL2> Hello")


def test_segment_general_merges_silent_segments():
    for seed in range(40):
        pair = segment_general(("가 나 다", "oh ... yeah !!"), seed)
        assert all(v > 0 for v in syl_values(pair.target))
        assert " ".join(split_spans(pair.target)) == "oh ... yeah !!"


def test_seed_must_be_u64():
    check_seed(2**64 - 1)
    for bad in (-1, 2**64, 1.5, True):
        with pytest.raises(ValueError):
            check_seed(bad)
    with pytest.raises(ValueError):
        list(training_pairs([("가", "a")], "general_section", "with_syl", seed=None))


def test_parity_and_strip_round_trip():
    songs = random_corpus(50, seed=1)
    for scheme in ("lyrics_line", "lyrics_section"):
        for pair in training_pairs(songs, scheme, "with_syl", seed=7):
            assert syl_values(pair.source) == syl_values(pair.target)
            assert len(split_spans(pair.target)) == len(syl_values(pair.target))
            assert [syllables(s) for s in split_spans(pair.target)] == syl_values(pair.target)


def test_emit_is_byte_stable(tmp_path):
    songs = random_corpus(20, seed=2)
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    emit_training_file(songs, "lyrics_section", "with_syl", 99, a)
    emit_training_file(songs, "lyrics_section", "with_syl", 99, b)
    assert a.read_bytes() == b.read_bytes()


def test_record_count_on_sample(sample_corpus_path):
    songs = read_corpus(sample_corpus_path)
    expected = sum(
        1 for s in songs for sec in s.sections if any(syllables(line.en) > 0 for line in sec.lines)
    )
    sink = io.StringIO()
    count = emit_training_file(songs, "lyrics_section", "with_syl", 0, sink)
    lines = sink.getvalue().splitlines()
    assert count == expected == len(lines)
    assert set(json.loads(lines[0])) == {"source", "target"}


def test_empty_input_gives_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    assert emit_training_file([], "lyrics_line", "with_syl", 0, path) == 0
    assert path.read_bytes() == b""


def test_read_sentence_pairs(tmp_path):
    path = tmp_path / "pairs.tsv"
    path.write_text("안녕\tHello\n\n세상\tWorld\n", encoding="utf-8")
    assert read_sentence_pairs(path) == [("안녕", "Hello"), ("세상", "World")]
    path.write_text("broken line\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_sentence_pairs(path)
