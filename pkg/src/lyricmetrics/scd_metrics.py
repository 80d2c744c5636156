"""Syllable-count distance (SCD) and syllable error rate."""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import AlignedSong
from .syllable import syllables

log = logging.getLogger(__name__)

CSV_COLUMNS = ("song_id", "n_lines", "scd", "error_rate", "skipped")


class EmptySeries(ValueError):
    pass


@dataclass(frozen=True)
class CountPairSeries:
    pairs: tuple[tuple[int, int], ...]
    skipped: int = 0

    @classmethod
    def from_counts(cls, source: Iterable[int], target: Iterable[int]) -> "CountPairSeries":
        """Pair up counts, dropping (and tallying) pairs where either side is zero."""
        source, target = list(source), list(target)
        if len(source) != len(target):
            raise ValueError(f"count series differ in length: {len(source)} vs {len(target)}")
        kept = tuple((s, t) for s, t in zip(source, target) if s > 0 and t > 0)
        return cls(kept, len(source) - len(kept))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class ScdReport:
    scd: float
    error_rate: float
    n_lines: int
    skipped: int = 0
    song_id: str = ""

    @property
    def n_errors(self) -> int:
        return round(self.error_rate * self.n_lines)


def scd(series: CountPairSeries) -> float:
    n = len(series.pairs)
    if n == 0:
        raise EmptySeries("empty series")
    return math.fsum(abs(s - t) / s + abs(s - t) / t for s, t in series.pairs) / (2 * n)


def error_rate(series: CountPairSeries) -> float:
    n = len(series.pairs)
    if n == 0:
        raise EmptySeries("empty series")
    return sum(1 for s, t in series.pairs if s != t) / n


def scd_report(series: CountPairSeries, song_id: str = "") -> ScdReport:
    return ScdReport(scd(series), error_rate(series), len(series.pairs), series.skipped, song_id)


def song_series(
    song: AlignedSong, language: str, generated: Sequence[str], dictionary=None
) -> CountPairSeries:
    source = song.texts(language)
    if len(source) != len(generated):
        raise ValueError(
            f"{song.song_id}: {len(source)} source lines but {len(generated)} generated lines"
        )
    return CountPairSeries.from_counts(
        (syllables(t, dictionary) for t in source), (syllables(t, dictionary) for t in generated)
    )


@dataclass
class CorpusScd:
    scd_mean: float
    scd_std: float
    error_rate: float
    rows: list[ScdReport] = field(default_factory=list)
    skipped_songs: list[str] = field(default_factory=list)


def aggregate(rows: Sequence[ScdReport], *, pooled: bool = False) -> tuple[float, float, float]:
    """Mean and population std of per-song SCD, plus the error rate.

    The error rate is averaged per song, or over all lines when ``pooled``.
    """
    if not rows:
        raise EmptySeries("no scorable songs")
    values = [r.scd for r in rows]
    if pooled:
        wrong = sum(r.n_errors for r in rows)
        rate = wrong / sum(r.n_lines for r in rows)
    else:
        rate = statistics.fmean(r.error_rate for r in rows)
    return statistics.fmean(values), statistics.pstdev(values), rate


def corpus_scd(
    songs: Iterable[tuple[AlignedSong, str, Sequence[str]]],
    *,
    pooled: bool = False,
    dictionary=None,
) -> CorpusScd:
    """SCD of generated lines against the source side of each song.

    ``songs`` yields ``(song, source_language, generated_lines)`` with the
    generated lines aligned one-to-one with the song's lines.
    """
    rows: list[ScdReport] = []
    skipped: list[str] = []
    for song, language, generated in songs:
        series = song_series(song, language, generated, dictionary)
        if not series.pairs:
            log.warning("%s: no scorable lines, skipped", song.song_id)
            skipped.append(song.song_id)
            continue
        rows.append(scd_report(series, song.song_id))
    mean, std, rate = aggregate(rows, pooled=pooled)
    return CorpusScd(mean, std, rate, rows, skipped)


def rows_to_csv(rows: Iterable[ScdReport]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.song_id, r.n_lines, repr(r.scd), repr(r.error_rate), r.skipped])
    return out.getvalue()
