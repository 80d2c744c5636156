"""Grapheme-to-phoneme conversion and the phoneme distinct-2 repetition metric.

English goes through the pronouncing dictionary (first pronunciation, stress
stripped) with a letter-to-sound fallback.  Korean syllable blocks are
decomposed arithmetically into initial/medial/final jamo, each mapped to a
romanization-style phone label.  No cross-syllable sound change is modelled.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import pronouncing
from .corpus import AlignedSong
from .syllable import (
    HANGUL_FIRST,
    _ascii_letters,
    _is_vowel_at,
    is_hangul,
    lookup,
    script_runs,
    split_words,
    vowel_groups,
)

EOS = "<eos>"

N_MEDIALS = 21
N_FINALS = 28
BLOCK_STRIDE = N_MEDIALS * N_FINALS  # 588

INITIALS = "ㄱㄲㄴㄷㄸㄹㅁㅂㅃㅅㅆㅇㅈㅉㅊㅋㅌㅍㅎ"
MEDIALS = "ㅏㅐㅑㅒㅓㅔㅕㅖㅗㅘㅙㅚㅛㅜㅝㅞㅟㅠㅡㅢㅣ"
# index 0 is "no final consonant"
FINALS = ("",) + tuple("ㄱㄲㄳㄴㄵㄶㄷㄹㄺㄻㄼㄽㄾㄿㅀㅁㅂㅄㅅㅆㅇㅈㅊㅋㅌㅍㅎ")

# An empty label emits nothing (silent initial ㅇ, absent final).
INITIAL_PHONES = (
    "G", "KK", "N", "D", "TT", "R", "M", "B", "PP", "S",
    "SS", "", "J", "JJ", "CH", "K", "T", "P", "H",
)  # fmt: skip
MEDIAL_PHONES = (
    "A", "AE", "YA", "YAE", "EO", "E", "YEO", "YE", "O", "WA", "WAE",
    "OE", "YO", "U", "WO", "WE", "WI", "YU", "EU", "UI", "I",
)  # fmt: skip
# Finals use the seven representative coda sounds.
FINAL_PHONES = (
    "", "K", "K", "K", "N", "N", "N", "T", "L", "K", "M", "L", "L", "L",
    "P", "L", "M", "P", "P", "T", "T", "NG", "T", "T", "K", "T", "P", "T",
)  # fmt: skip


@dataclass(frozen=True)
class JamoTable:
    initials: tuple[str, ...] = INITIAL_PHONES
    medials: tuple[str, ...] = MEDIAL_PHONES
    finals: tuple[str, ...] = FINAL_PHONES

    @classmethod
    def from_tsv(cls, path, base: "JamoTable | None" = None) -> "JamoTable":
        """Override entries from a ``jamo<TAB>phone`` file.

        A jamo that can be both initial and final (e.g. ㄱ) is overridden in
        both positions; prefix it with ``-`` to target the final only.  An
        empty phone column makes the jamo silent.
        """
        base = base or cls()
        initials, medials, finals = list(base.initials), list(base.medials), list(base.finals)
        with open(path, encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh, delimiter="\t"):
                if not row or row[0].startswith("#"):
                    continue
                jamo = row[0].strip()
                phone = row[1].strip().upper() if len(row) > 1 else ""
                final_only = jamo.startswith("-")
                jamo = jamo.lstrip("-")
                hit = False
                if not final_only and jamo in INITIALS:
                    initials[INITIALS.index(jamo)] = phone
                    hit = True
                if not final_only and jamo in MEDIALS:
                    medials[MEDIALS.index(jamo)] = phone
                    hit = True
                if jamo in FINALS[1:]:
                    finals[FINALS.index(jamo)] = phone
                    hit = True
                if not hit:
                    raise ValueError(f"{path}: unknown jamo {jamo!r}")
        return cls(tuple(initials), tuple(medials), tuple(finals))


DEFAULT_JAMO_TABLE = JamoTable()


def decompose(block: str) -> tuple[int, int, int]:
    index = ord(block) - HANGUL_FIRST
    if not 0 <= index < 19 * BLOCK_STRIDE:
        raise ValueError(f"not a precomposed Hangul syllable: {block!r}")
    return index // BLOCK_STRIDE, (index % BLOCK_STRIDE) // N_FINALS, index % N_FINALS


def compose(initial: int, medial: int, final: int) -> str:
    return chr(HANGUL_FIRST + initial * BLOCK_STRIDE + medial * N_FINALS + final)


@dataclass(frozen=True)
class PhonemeSequence:
    tokens: tuple[str, ...]
    line_count: int

    @classmethod
    def concat(cls, sequences: Iterable["PhonemeSequence"]) -> "PhonemeSequence":
        tokens: list[str] = []
        lines = 0
        for seq in sequences:
            tokens.extend(seq.tokens)
            lines += seq.line_count
        return cls(tuple(tokens), lines)

    def check(self) -> None:
        if self.tokens.count(EOS) != self.line_count:
            raise ValueError("EOS count does not match line_count")
        if self.line_count and self.tokens[-1] != EOS:
            raise ValueError("sequence must end with EOS")
        if any(not t for t in self.tokens):
            raise ValueError("empty phoneme label")


@dataclass(frozen=True)
class PhoProfile:
    per_section: tuple[float, ...]
    pho_deg: float
    pho_var: float


class NoScorableSections(ValueError):
    pass


# -- English -----------------------------------------------------------------

_DIGRAPHS = {
    "ch": ("CH",), "sh": ("SH",), "ng": ("NG",), "th": ("TH",), "ph": ("F",),
    "ck": ("K",), "wh": ("W",), "qu": ("K", "W"), "gh": (),
}  # fmt: skip
_CONSONANTS = {
    "b": ("B",), "c": ("K",), "d": ("D",), "f": ("F",), "g": ("G",), "h": ("HH",),
    "j": ("JH",), "k": ("K",), "l": ("L",), "m": ("M",), "n": ("N",), "p": ("P",),
    "q": ("K",), "r": ("R",), "s": ("S",), "t": ("T",), "v": ("V",), "w": ("W",),
    "x": ("K", "S"), "y": ("Y",), "z": ("Z",),
}  # fmt: skip
_VOWEL_GROUPS = {
    "ee": "IY", "ea": "IY", "ie": "IY", "oo": "UW", "ou": "AW", "ow": "OW", "ai": "EY",
    "ay": "EY", "ey": "EY", "oa": "OW", "oi": "OY", "oy": "OY", "au": "AO", "aw": "AO",
}  # fmt: skip
_SINGLE_VOWELS = {"a": "AE", "e": "EH", "i": "IH", "o": "AA", "u": "AH", "y": "IY"}


def letter_to_sound(word: str) -> list[str]:
    """Rule-based phones for a word missing from the dictionary.

    Vowel groups come from the syllable heuristic, so the number of vowel
    phones always equals the heuristic syllable count before clamping.
    """
    letters = _ascii_letters(word)
    if not letters:
        return []
    nuclei = {start: end for start, end in vowel_groups(letters)}
    phones: list[str] = []
    i = 0
    while i < len(letters):
        if i in nuclei:
            end = nuclei[i]
            group = letters[i:end]
            phones.append(_VOWEL_GROUPS.get(group[:2], _SINGLE_VOWELS[group[0]]))
            i = end
            continue
        if _is_vowel_at(letters, i):
            # vowel letters that are not nuclei (silent final e) emit nothing
            i += 1
            continue
        pair = letters[i : i + 2]
        if len(pair) == 2 and pair in _DIGRAPHS and not (i + 1 in nuclei):
            phones.extend(_DIGRAPHS[pair])
            i += 2
            continue
        c = letters[i]
        if c == "c" and i + 1 < len(letters) and letters[i + 1] in "eiy":
            out: tuple[str, ...] = ("S",)
        else:
            out = _CONSONANTS[c]
        if not (phones and i > 0 and letters[i - 1] == c and not _is_vowel_at(letters, i - 1)):
            phones.extend(out)
        i += 1
    return phones


def _strip_stress(phone: str) -> str:
    return phone.rstrip("0123456789")


def english_phones(text: str, dictionary: Mapping[str, Sequence[str]] | None = None) -> list[str]:
    if dictionary is None:
        dictionary = pronouncing.get_default()
    phones: list[str] = []
    for token in text.split():
        for word in split_words(token):
            if not any(c.isalpha() for c in word):
                continue
            found = lookup(word, dictionary)
            if found is not None:
                phones.extend(_strip_stress(p) for p in found)
            else:
                phones.extend(letter_to_sound(word))
    return phones


def phonemize_english(line: str, dictionary=None) -> PhonemeSequence:
    return PhonemeSequence(tuple(english_phones(line, dictionary)) + (EOS,), 1)


# -- Korean ------------------------------------------------------------------


def hangul_phones(text: str, table: JamoTable = DEFAULT_JAMO_TABLE) -> list[str]:
    phones: list[str] = []
    for ch in text:
        if not (HANGUL_FIRST <= ord(ch) <= 0xD7A3):
            continue
        initial, medial, final = decompose(ch)
        for label in (table.initials[initial], table.medials[medial], table.finals[final]):
            if label:
                phones.append(label)
    return phones


def phonemize_korean(
    line: str, dictionary=None, table: JamoTable = DEFAULT_JAMO_TABLE
) -> PhonemeSequence:
    phones: list[str] = []
    for hangul, run in script_runs(line):
        if hangul:
            phones.extend(hangul_phones(run, table))
        else:
            phones.extend(english_phones(run, dictionary))
    return PhonemeSequence(tuple(phones) + (EOS,), 1)


def phonemize(line: str, language: str, dictionary=None, table: JamoTable = DEFAULT_JAMO_TABLE):
    if language == "kr":
        return phonemize_korean(line, dictionary, table)
    if language == "en":
        # stray Hangul on the English side is still pronounced
        if any(is_hangul(ch) for ch in line):
            return phonemize_korean(line, dictionary, table)
        return phonemize_english(line, dictionary)
    raise ValueError(f"unknown language {language!r}")


# -- distinct-2 --------------------------------------------------------------


def pho(section: Sequence[PhonemeSequence]) -> float | None:
    """Unique/total phoneme bigram ratio of a section.

    Lines are concatenated into one stream (EOS markers included), so bigrams
    run across line boundaries.  Returns ``None`` when the stream has fewer
    than two tokens and the section cannot be scored.
    """
    stream = [tok for seq in section for tok in seq.tokens]
    if len(stream) < 2:
        return None
    bigrams = list(zip(stream, stream[1:]))
    return len(set(bigrams)) / len(bigrams)


def profile_from_values(values: Sequence[float]) -> PhoProfile:
    if not values:
        raise NoScorableSections("no scorable sections")
    return PhoProfile(tuple(values), statistics.fmean(values), statistics.pstdev(values))


def section_pho_values(
    song: AlignedSong, language: str, dictionary=None, table: JamoTable = DEFAULT_JAMO_TABLE
) -> list[float]:
    values = []
    for section in song.sections:
        seqs = [phonemize(getattr(line, language), language, dictionary, table) for line in section.lines]
        value = pho(seqs)
        if value is not None:
            values.append(value)
    return values


def pho_profile(
    song: AlignedSong, language: str, dictionary=None, table: JamoTable = DEFAULT_JAMO_TABLE
) -> PhoProfile:
    return profile_from_values(section_pho_values(song, language, dictionary, table))
