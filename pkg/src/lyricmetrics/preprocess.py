"""Training-data construction with syllable-count control tokens.

Every target span is prefixed with ``<SYLn>`` (n = its English syllable
count) and the matching source span carries the same token, so the token
sequence is identical on both sides.  Without syllable tokens, section spans
are joined with ``<SEP>`` instead.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable, Sequence, Union

from .corpus import AlignedSong
from .syllable import syllables

log = logging.getLogger(__name__)

SCHEMES = ("general_line", "general_section", "lyrics_line", "lyrics_section")
SYL_MODES = ("with_syl", "without_syl")
SEP = "<SEP>"
MAX_SEGMENTS = 4

_SYL_SPLIT = re.compile(r"(?:^| )<SYL(\d+)> ")
_SYL_TOKEN = re.compile(r"<SYL(\d+)>")

Rng = Union[random.Random, int, None]


def syl_token(n: int) -> str:
    return f"<SYL{n}>"


@dataclass(frozen=True)
class TrainingPair:
    source: str
    target: str
    scheme: str
    syl_mode: str

    def to_json(self) -> str:
        return json.dumps({"source": self.source, "target": self.target}, ensure_ascii=False)


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def _rng(seed: Rng) -> random.Random | None:
    if seed is None or isinstance(seed, random.Random):
        return seed
    return random.Random(check_seed(seed))


def _clean(text: str) -> str:
    return " ".join(text.split())


def syl_values(text: str) -> list[int]:
    return [int(v) for v in _SYL_TOKEN.findall(text)]


def split_spans(text: str) -> list[str]:
    """Remove control tokens and recover the original spans."""
    if _SYL_TOKEN.match(text):
        parts = _SYL_SPLIT.split(text)
        return parts[2::2]
    if f" {SEP} " in text:
        return text.split(f" {SEP} ")
    return [text]


def _join(spans: Sequence[str], counts: Sequence[int], syl_mode: str) -> str:
    if syl_mode == "with_syl":
        return " ".join(f"{syl_token(n)} {span}" for n, span in zip(counts, spans))
    if syl_mode == "without_syl":
        return f" {SEP} ".join(spans)
    raise ValueError(f"unknown syl_mode {syl_mode!r}")


def annotate_line(
    pair: tuple[str, str],
    syl_mode: str = "with_syl",
    *,
    scheme: str = "lyrics_line",
    dictionary=None,
) -> TrainingPair | None:
    """One ``(kr, en)`` pair as one record; the token value comes from the English side only."""
    kr, en = _clean(pair[0]), _clean(pair[1])
    n = syllables(en, dictionary)
    if n == 0:
        log.info("skipping pair with zero-syllable target: %r", en)
        return None
    return TrainingPair(_join([kr], [n], syl_mode), _join([en], [n], syl_mode), scheme, syl_mode)


def annotate_section(
    section: Sequence[tuple[str, str]],
    syl_mode: str = "with_syl",
    seed: Rng = None,
    *,
    scheme: str = "lyrics_section",
    dictionary=None,
) -> TrainingPair | None:
    """A whole section as one record, optionally shuffled identically on both sides."""
    lines = []
    for kr, en in section:
        kr, en = _clean(kr), _clean(en)
        n = syllables(en, dictionary)
        if n == 0:
            log.info("dropping zero-syllable line from section: %r", en)
            continue
        lines.append((kr, en, n))
    if not lines:
        return None
    rng = _rng(seed)
    if rng is not None:
        order = list(range(len(lines)))
        rng.shuffle(order)
        lines = [lines[i] for i in order]
    counts = [n for _, _, n in lines]
    return TrainingPair(
        _join([kr for kr, _, _ in lines], counts, syl_mode),
        _join([en for _, en, _ in lines], counts, syl_mode),
        scheme,
        syl_mode,
    )


def _cut(words: list[str], n: int, rng: random.Random) -> list[list[str]]:
    cuts = sorted(rng.sample(range(1, len(words)), n - 1))
    bounds = [0, *cuts, len(words)]
    return [words[a:b] for a, b in zip(bounds, bounds[1:])]


def segment_general(
    pair: tuple[str, str],
    seed: Rng = None,
    syl_mode: str = "with_syl",
    *,
    max_segments: int = MAX_SEGMENTS,
    dictionary=None,
) -> TrainingPair | None:
    """Split a general sentence pair into n random word-boundary segments per side.

    n is uniform on ``1..max_segments``, capped by either side's word count.
    The two sides are cut independently.  A segment whose English side has no
    syllables is merged into its neighbour on both sides.
    """
    rng = _rng(seed) or random.Random()
    kr_words, en_words = pair[0].split(), pair[1].split()
    if not kr_words or not en_words:
        raise ValueError("segment_general needs non-empty sentences")
    n = min(rng.randint(1, max_segments), len(kr_words), len(en_words))
    kr_segs = _cut(kr_words, n, rng)
    en_segs = _cut(en_words, n, rng)
    counts = [syllables(" ".join(seg), dictionary) for seg in en_segs]
    if sum(counts) == 0:
        log.info("skipping pair with zero-syllable target: %r", pair[1])
        return None

    j = 0
    while j < len(counts):
        if counts[j] == 0:
            k = j - 1 if j > 0 else j + 1
            lo, hi = min(j, k), max(j, k)
            kr_segs[lo:hi + 1] = [kr_segs[lo] + kr_segs[hi]]
            en_segs[lo:hi + 1] = [en_segs[lo] + en_segs[hi]]
            counts[lo:hi + 1] = [counts[lo] + counts[hi]]
            j = 0
        else:
            j += 1

    kr_spans = [" ".join(seg) for seg in kr_segs]
    en_spans = [" ".join(seg) for seg in en_segs]
    return TrainingPair(
        _join(kr_spans, counts, syl_mode),
        _join(en_spans, counts, syl_mode),
        "general_section",
        syl_mode,
    )


def with_machine_source(song: AlignedSong, tr) -> AlignedSong:
    """Replace the Korean side by machine translations of the English lines."""
    english = song.texts("en")
    translated = tr.translate(english, "en", "ko")
    if len(translated) != len(english):
        raise ValueError("translation backend returned the wrong number of texts")
    it = iter(translated)
    sections = tuple(
        replace(s, lines=tuple(replace(line, kr=next(it)) for line in s.lines)) for s in song.sections
    )
    return replace(song, sections=sections)


def training_pairs(
    records: Iterable, scheme: str, syl_mode: str, seed: int | None = 0, dictionary=None
) -> Iterable[TrainingPair]:
    """Records for one scheme.

    ``records`` are :class:`AlignedSong` objects for the lyrics schemes and
    ``(kr, en)`` sentence pairs for the general schemes.  A single RNG seeded
    once drives the whole stream, so output depends only on input order and seed.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if syl_mode not in SYL_MODES:
        raise ValueError(f"unknown syl_mode {syl_mode!r}")
    rng = random.Random(check_seed(seed)) if seed is not None else None
    if rng is None and scheme == "general_section":
        raise ValueError("general_section needs a seed")

    for record in records:
        if scheme == "general_line":
            out = [annotate_line(record, syl_mode, scheme=scheme, dictionary=dictionary)]
        elif scheme == "general_section":
            out = [segment_general(record, rng, syl_mode, dictionary=dictionary)]
        elif scheme == "lyrics_line":
            out = [
                annotate_line((line.kr, line.en), syl_mode, scheme=scheme, dictionary=dictionary)
                for line in record.lines
            ]
        else:
            out = [
                annotate_section(
                    [(line.kr, line.en) for line in section.lines],
                    syl_mode,
                    rng,
                    scheme=scheme,
                    dictionary=dictionary,
                )
                for section in record.sections
            ]
        yield from (pair for pair in out if pair is not None)


def emit_training_file(
    records: Iterable,
    scheme: str,
    syl_mode: str,
    seed: int | None,
    sink: Union[str, Path, IO[str]],
    dictionary=None,
) -> int:
    """Write JSONL ``{"source", "target"}`` records; returns the record count."""
    pairs = training_pairs(records, scheme, syl_mode, seed, dictionary)
    if isinstance(sink, (str, Path)):
        try:
            with open(sink, "w", encoding="utf-8", newline="\n") as fh:
                return _write(pairs, fh)
        except OSError as exc:
            raise OSError(f"cannot write training file {sink}: {exc.strerror}") from exc
    return _write(pairs, sink)


def _write(pairs: Iterable[TrainingPair], fh: IO[str]) -> int:
    count = 0
    for pair in pairs:
        fh.write(pair.to_json())
        fh.write("\n")
        count += 1
    return count


def read_sentence_pairs(path) -> list[tuple[str, str]]:
    """Two-column TSV of ``kr<TAB>en`` general sentence pairs."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) != 2 or not cols[0].strip() or not cols[1].strip():
                raise ValueError(f"{path}:{line_no}: expected two non-empty tab-separated columns")
            pairs.append((cols[0], cols[1]))
    return pairs
