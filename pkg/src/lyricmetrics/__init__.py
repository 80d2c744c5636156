"""Toolkit for line- and section-aligned bilingual (English/Korean) singable lyric corpora."""

from .corpus import (
    AlignedSong,
    AlignmentError,
    CorpusParseError,
    CorpusStats,
    LinePair,
    SchemaError,
    Section,
    Violation,
    corpus_stats,
    parse_corpus,
    read_corpus,
    serialize_corpus,
    validate_alignment,
)
from .phonetics import (
    PhonemeSequence,
    PhoProfile,
    pho,
    pho_profile,
    phonemize_english,
    phonemize_korean,
)
from .preprocess import (
    TrainingPair,
    annotate_line,
    annotate_section,
    emit_training_file,
    segment_general,
)
from .scd_metrics import CountPairSeries, ScdReport, corpus_scd, error_rate, scd
from .semantics import (
    SemReport,
    coherence_nsp,
    filter_untranslated,
    sem_line,
    sem_sec,
    sts,
)
from .syllable import (
    SyllableCount,
    count_syllables_english,
    count_syllables_korean,
    count_syllables_line,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedSong",
    "AlignmentError",
    "CorpusParseError",
    "CorpusStats",
    "CountPairSeries",
    "LinePair",
    "PhoProfile",
    "PhonemeSequence",
    "ScdReport",
    "SchemaError",
    "Section",
    "SemReport",
    "SyllableCount",
    "TrainingPair",
    "Violation",
    "annotate_line",
    "annotate_section",
    "coherence_nsp",
    "corpus_scd",
    "corpus_stats",
    "count_syllables_english",
    "count_syllables_korean",
    "count_syllables_line",
    "emit_training_file",
    "error_rate",
    "filter_untranslated",
    "parse_corpus",
    "pho",
    "pho_profile",
    "phonemize_english",
    "phonemize_korean",
    "read_corpus",
    "scd",
    "segment_general",
    "sem_line",
    "sem_sec",
    "serialize_corpus",
    "sts",
    "validate_alignment",
]
