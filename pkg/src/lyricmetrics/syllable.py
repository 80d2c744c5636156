"""Syllable counting for Korean, English and mixed-script lyric lines.

Korean is counted by precomposed Hangul syllable blocks (one block is one
sung syllable).  English tokens are looked up in a pronouncing dictionary and
fall back to a vowel-group heuristic when the word is unknown.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Mapping, Sequence

from num2words import num2words

from . import pronouncing

HANGUL_FIRST = 0xAC00
HANGUL_LAST = 0xD7A3

# hangul, dictionary, heuristic, zero
METHODS = ("hangul", "dictionary", "heuristic", "zero")

_VOWELS = frozenset("aeiou")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "`": "'"})
_WORD = re.compile(r"'?[^\W_](?:[^\W_]|')*")
_DIGITS = re.compile(r"\d+")
_SPELLED = re.compile(r"^[^\W\d_](?:-[^\W\d_])+$")
_ADLIB = re.compile(r"\([^()]*\)")

# Letters sung with more than one syllable when spelled out.
SPELLED_LETTER_SYLLABLES = {"w": 3}


@dataclass(frozen=True)
class SyllableCount:
    value: int
    breakdown: tuple[tuple[str, int, str], ...] = ()

    def __int__(self) -> int:
        return self.value

    def __add__(self, other: "SyllableCount") -> "SyllableCount":
        return SyllableCount(self.value + other.value, self.breakdown + other.breakdown)


ZERO = SyllableCount(0)


def is_hangul_block(ch: str) -> bool:
    return HANGUL_FIRST <= ord(ch) <= HANGUL_LAST


def is_hangul(ch: str) -> bool:
    """Any Hangul code point: syllable blocks and the conjoining/compatibility jamo."""
    cp = ord(ch)
    return (
        HANGUL_FIRST <= cp <= HANGUL_LAST
        or 0x1100 <= cp <= 0x11FF
        or 0x3130 <= cp <= 0x318F
        or 0xA960 <= cp <= 0xA97F
        or 0xD7B0 <= cp <= 0xD7FF
    )


def contains_hangul(text: str) -> bool:
    return any(is_hangul(ch) for ch in text)


def script_runs(text: str) -> list[tuple[bool, str]]:
    """Split text into maximal runs of Hangul / non-Hangul characters."""
    runs: list[tuple[bool, str]] = []
    for ch in text:
        flag = is_hangul(ch)
        if runs and runs[-1][0] == flag:
            runs[-1] = (flag, runs[-1][1] + ch)
        else:
            runs.append((flag, ch))
    return runs


def strip_adlibs(text: str) -> str:
    """Remove parenthesized background vocals such as ``(Never let go)``."""
    previous = None
    while previous != text:
        previous, text = text, _ADLIB.sub(" ", text)
    return text


# -- Korean ------------------------------------------------------------------


def count_syllables_korean(text: str) -> SyllableCount:
    breakdown = []
    total = 0
    for token in text.split():
        n = sum(1 for ch in token if is_hangul_block(ch))
        breakdown.append((token, n, "hangul" if n else "zero"))
        total += n
    return SyllableCount(total, tuple(breakdown))


# -- English -----------------------------------------------------------------


def _is_vowel_at(word: str, i: int) -> bool:
    c = word[i]
    if c in _VOWELS:
        return True
    if c == "y":
        # word-initial y before a vowel is a consonant ("yes", "you")
        return not (i == 0 and len(word) > 1 and word[1] in _VOWELS)
    return False


def _ascii_letters(word: str) -> str:
    decomposed = unicodedata.normalize("NFKD", word.casefold())
    return "".join(c for c in decomposed if "a" <= c <= "z")


def vowel_groups(word: str) -> list[tuple[int, int]]:
    """Spans of the vowel groups in ``word`` that count as syllable nuclei.

    ``word`` must already be lowercase ASCII letters.  A word-final silent
    ``e`` is dropped unless the word ends in consonant + ``le``.
    """
    groups: list[tuple[int, int]] = []
    start = None
    for i in range(len(word)):
        if _is_vowel_at(word, i):
            if start is None:
                start = i
        elif start is not None:
            groups.append((start, i))
            start = None
    if start is not None:
        groups.append((start, len(word)))

    if (
        len(word) >= 2
        and groups
        and groups[-1] == (len(word) - 1, len(word))
        and word[-1] == "e"
        and not (word.endswith("le") and len(word) >= 3 and not _is_vowel_at(word, len(word) - 3))
    ):
        groups.pop()
    return groups


def heuristic_syllables(word: str) -> int:
    letters = _ascii_letters(word)
    if not letters:
        return 1 if any(c.isalpha() for c in word) else 0
    return max(1, len(vowel_groups(letters)))


def lookup_candidates(word: str) -> list[str]:
    """Dictionary keys to try for a casefolded word, most specific first."""
    candidates = [word]
    bare = word.strip("'")
    if bare and bare != word:
        candidates.append(bare)
    if word.endswith("in'") and len(word) > 3:
        candidates.append(word[:-1] + "g")
    return candidates


def lookup(word: str, dictionary: Mapping[str, Sequence[str]]) -> Sequence[str] | None:
    for key in lookup_candidates(word):
        phones = dictionary.get(key)
        if phones is not None:
            return phones
    return None


def split_words(token: str) -> list[str]:
    """Casefolded words of a whitespace token; punctuation and hyphens separate words."""
    token = unicodedata.normalize("NFC", token).translate(_APOSTROPHES).casefold()
    return _WORD.findall(token)


def number_words(digits: str) -> list[str]:
    return re.split(r"[\s\-]+", num2words(int(digits)).replace(",", ""))


def _count_word(word: str, dictionary) -> tuple[int, str]:
    phones = lookup(word, dictionary)
    if phones is not None:
        return max(1, pronouncing.vowel_count(phones)), "dictionary"
    return heuristic_syllables(word), "heuristic"


def _count_token(token: str, dictionary) -> list[tuple[str, int, str]]:
    cleaned = token.translate(_APOSTROPHES).strip(".,!?;:\"'()[]{}")
    if _SPELLED.match(cleaned):
        return [
            (letter, SPELLED_LETTER_SYLLABLES.get(letter.casefold(), 1), "heuristic")
            for letter in cleaned.split("-")
        ]

    items = []
    for word in split_words(token):
        if any(c.isdigit() for c in word):
            pieces = []
            pos = 0
            for m in _DIGITS.finditer(word):
                if m.start() > pos:
                    pieces.append(word[pos : m.start()])
                pieces.extend(number_words(m.group()))
                pos = m.end()
            if pos < len(word):
                pieces.append(word[pos:])
            for piece in pieces:
                piece = piece.strip("'")
                if piece:
                    n, method = _count_word(piece, dictionary)
                    items.append((piece, n, method))
        else:
            n, method = _count_word(word, dictionary)
            items.append((word, n, method))
    if not items:
        items.append((token, 0, "zero"))
    return items


def count_syllables_english(
    text: str, dictionary: Mapping[str, Sequence[str]] | None = None
) -> SyllableCount:
    if dictionary is None:
        dictionary = pronouncing.get_default()
    breakdown: list[tuple[str, int, str]] = []
    text = re.sub(r"(\d),(?=\d{3})", r"\1", text)
    for token in text.split():
        breakdown.extend(_count_token(token, dictionary))
    return SyllableCount(sum(n for _, n, _ in breakdown), tuple(breakdown))


# -- mixed lines -------------------------------------------------------------


def count_syllables_line(
    text: str,
    dictionary: Mapping[str, Sequence[str]] | None = None,
    *,
    include_adlibs: bool = True,
) -> SyllableCount:
    if not include_adlibs:
        text = strip_adlibs(text)
    total = ZERO
    for hangul, run in script_runs(text):
        if hangul:
            total = total + count_syllables_korean(run)
        else:
            total = total + count_syllables_english(run, dictionary)
    return total


def syllables(text: str, dictionary=None, *, include_adlibs: bool = True) -> int:
    """Integer shortcut for :func:`count_syllables_line`."""
    return count_syllables_line(text, dictionary, include_adlibs=include_adlibs).value
