"""Per-genre metric tables and per-line similarity data for density plots."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

from . import phonetics, semantics
from . import scd_metrics as scd_mod
from .corpus import GENRES, AlignedSong
from .semantics import (
    CoherenceScorer,
    EmbeddingBackend,
    HashingCoherenceScorer,
    HashingEmbedding,
    IdentityTranslation,
    TranslationBackend,
)
from .syllable import syllables

log = logging.getLogger(__name__)

METRICS = ("sem", "pho", "scd", "nsp")
VARIANTS = ("included", "excluded")
COLUMNS = (
    "genre", "variant", "sem_line", "sem_sec", "pho_deg_en", "pho_deg_kr", "pho_var_en",
    "pho_var_kr", "scd", "error_rate", "nsp", "n_songs", "n_lines", "n_excluded_lines",
)  # fmt: skip
DENSITY_COLUMNS = ("genre", "variant", "song_id", "line_index", "sts")

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class Backends:
    embedding: EmbeddingBackend = field(default_factory=HashingEmbedding)
    translation: TranslationBackend = field(default_factory=IdentityTranslation)
    coherence: CoherenceScorer = field(default_factory=HashingCoherenceScorer)


@dataclass
class ReportOptions:
    metrics: tuple[str, ...] = METRICS
    official_only: bool = False
    pooled: bool = False
    jobs: int = 1
    dictionary: object = None
    jamo_table: phonetics.JamoTable = phonetics.DEFAULT_JAMO_TABLE


@dataclass
class SongMetrics:
    """Raw per-song ingredients, kept unaggregated so pooled averages can be formed."""

    song_id: str
    genre: str
    variant: str
    n_lines: int
    n_excluded: int
    sem: semantics.SemReport | None = None
    pho_en: list[float] | None = None
    pho_kr: list[float] | None = None
    counts: scd_mod.CountPairSeries | None = None
    nsp: list[float] | None = None

    @property
    def sem_line(self):
        return self.sem.sem_line if self.sem else None

    @property
    def sem_sec(self):
        return self.sem.sem_sec if self.sem else None

    @property
    def pho_deg_en(self):
        return statistics.fmean(self.pho_en) if self.pho_en else None

    @property
    def pho_deg_kr(self):
        return statistics.fmean(self.pho_kr) if self.pho_kr else None

    @property
    def pho_var_en(self):
        return statistics.pstdev(self.pho_en) if self.pho_en else None

    @property
    def pho_var_kr(self):
        return statistics.pstdev(self.pho_kr) if self.pho_kr else None

    @property
    def scd(self):
        return scd_mod.scd(self.counts) if self.counts else None

    @property
    def error_rate(self):
        return scd_mod.error_rate(self.counts) if self.counts else None

    @property
    def nsp_score(self):
        return statistics.fmean(self.nsp) if self.nsp else None


@dataclass(frozen=True)
class ReportRow:
    genre: str
    variant: str
    sem_line: float | None
    sem_sec: float | None
    pho_deg_en: float | None
    pho_deg_kr: float | None
    pho_var_en: float | None
    pho_var_kr: float | None
    scd: float | None
    error_rate: float | None
    nsp: float | None
    n_songs: int
    n_lines: int
    n_excluded_lines: int


@dataclass
class MetricReport:
    rows: list[ReportRow]

    def row(self, genre: str, variant: str = "included") -> ReportRow:
        for r in self.rows:
            if r.genre == genre and r.variant == variant:
                return r
        raise KeyError((genre, variant))

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(COLUMNS)
        for r in self.rows:
            writer.writerow([_cell(getattr(r, c)) for c in COLUMNS])
        return out.getvalue()

    def to_json(self) -> str:
        return json.dumps({"columns": list(COLUMNS), "rows": [asdict(r) for r in self.rows]}, indent=2) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """Order-preserving map; results follow input order whatever ``jobs`` is."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def source_language(song: AlignedSong) -> str:
    return song.original_language if song.original_language in ("en", "kr") else "kr"


def song_metrics(
    song: AlignedSong,
    backends: Backends,
    variant: str = "included",
    metrics: Iterable[str] = METRICS,
    dictionary=None,
    jamo_table: phonetics.JamoTable = phonetics.DEFAULT_JAMO_TABLE,
) -> SongMetrics | None:
    """Per-song metric ingredients, or ``None`` when nothing of the song remains."""
    metrics = set(metrics)
    excluded: list[int] = []
    if variant == "excluded":
        song, excluded = semantics.filter_untranslated(song)
    elif variant != "included":
        raise ValueError(f"unknown variant {variant!r}")
    if song.n_lines == 0:
        return None
    result = SongMetrics(song.song_id, song.genre, variant, song.n_lines, len(excluded))

    if "sem" in metrics:
        result.sem = semantics.semantic_similarity(song, backends.embedding, backends.translation)
    if "pho" in metrics:
        result.pho_en = phonetics.section_pho_values(song, "en", dictionary, jamo_table)
        result.pho_kr = phonetics.section_pho_values(song, "kr", dictionary, jamo_table)
    if "scd" in metrics:
        src = source_language(song)
        tgt = "en" if src == "kr" else "kr"
        result.counts = scd_mod.CountPairSeries.from_counts(
            [syllables(t, dictionary) for t in song.texts(src)],
            [syllables(t, dictionary) for t in song.texts(tgt)],
        )
    if "nsp" in metrics and song.n_lines >= 2:
        result.nsp = semantics.nsp_scores(song.texts("en"), backends.coherence)
    return result


def _mean(values: Iterable[float | None]) -> float | None:
    present = [v for v in values if v is not None]
    return statistics.fmean(present) if present else None


def aggregate_songs(
    genre: str, variant: str, songs: Sequence[SongMetrics], pooled: bool = False
) -> ReportRow:
    counts = dict(
        n_songs=len(songs),
        n_lines=sum(s.n_lines for s in songs),
        n_excluded_lines=sum(s.n_excluded for s in songs),
    )
    if not pooled:
        return ReportRow(
            genre,
            variant,
            sem_line=_mean(s.sem_line for s in songs),
            sem_sec=_mean(s.sem_sec for s in songs),
            pho_deg_en=_mean(s.pho_deg_en for s in songs),
            pho_deg_kr=_mean(s.pho_deg_kr for s in songs),
            pho_var_en=_mean(s.pho_var_en for s in songs),
            pho_var_kr=_mean(s.pho_var_kr for s in songs),
            scd=_mean(s.scd for s in songs),
            error_rate=_mean(s.error_rate for s in songs),
            nsp=_mean(s.nsp_score for s in songs),
            **counts,
        )

    per_line = [v for s in songs if s.sem for v in s.sem.per_line_sts]
    sizes = [n for s in songs if s.sem for n in s.sem.section_sizes]
    sections = [v for s in songs if s.sem for v in s.sem.per_section_sts]
    pho_en = [v for s in songs if s.pho_en for v in s.pho_en]
    pho_kr = [v for s in songs if s.pho_kr for v in s.pho_kr]
    pairs = tuple(p for s in songs if s.counts for p in s.counts.pairs)
    nsp = [v for s in songs if s.nsp for v in s.nsp]
    series = scd_mod.CountPairSeries(pairs) if pairs else None
    return ReportRow(
        genre,
        variant,
        sem_line=semantics.line_mean(per_line) if per_line else None,
        sem_sec=semantics.section_weighted(sizes, sections) if sizes else None,
        pho_deg_en=statistics.fmean(pho_en) if pho_en else None,
        pho_deg_kr=statistics.fmean(pho_kr) if pho_kr else None,
        pho_var_en=statistics.pstdev(pho_en) if pho_en else None,
        pho_var_kr=statistics.pstdev(pho_kr) if pho_kr else None,
        scd=scd_mod.scd(series) if series else None,
        error_rate=scd_mod.error_rate(series) if series else None,
        nsp=statistics.fmean(nsp) if nsp else None,
        **counts,
    )


def _select(corpus: Sequence[AlignedSong], official_only: bool) -> list[AlignedSong]:
    if official_only:
        return [s for s in corpus if s.translation_status == "official"]
    return list(corpus)


def _genre_order(corpus: Sequence[AlignedSong]) -> list[str]:
    present = {s.genre for s in corpus}
    return [g for g in GENRES if g in present]


def genre_report(
    corpus: Sequence[AlignedSong],
    backends: Backends | None = None,
    options: ReportOptions | None = None,
) -> MetricReport:
    backends = backends or Backends()
    options = options or ReportOptions()
    songs = _select(corpus, options.official_only)
    rows: list[ReportRow] = []
    for genre in _genre_order(songs):
        bucket = [s for s in songs if s.genre == genre]
        for variant in VARIANTS:
            computed = parallel_map(
                lambda song: song_metrics(
                    song, backends, variant, options.metrics, options.dictionary, options.jamo_table
                ),
                bucket,
                options.jobs,
            )
            present = [m for m in computed if m is not None]
            if not present:
                log.warning("genre %s / %s: no scorable songs, row omitted", genre, variant)
                continue
            rows.append(aggregate_songs(genre, variant, present, options.pooled))
    return MetricReport(rows)


def check_row_ranges(row: ReportRow) -> list[str]:
    problems = []
    bounds = {
        "sem_line": (-1, 1), "sem_sec": (-1, 1), "pho_deg_en": (0, 1), "pho_deg_kr": (0, 1),
        "pho_var_en": (0, 0.5), "pho_var_kr": (0, 0.5), "error_rate": (0, 1), "nsp": (0, 1),
        "scd": (0, math.inf),
    }  # fmt: skip
    for name, (lo, hi) in bounds.items():
        value = getattr(row, name)
        if value is not None and not lo <= value <= hi:
            problems.append(f"{row.genre}/{row.variant}: {name}={value} outside [{lo}, {hi}]")
    return problems


# -- density data ------------------------------------------------------------


@dataclass(frozen=True)
class DensityRow:
    genre: str
    variant: str
    song_id: str
    line_index: int
    sts: float


def _song_density(song: AlignedSong, backends: Backends, variant: str) -> list[DensityRow]:
    original = [line.line_index for line in song.lines]
    if variant == "excluded":
        filtered, excluded = semantics.filter_untranslated(song)
        dropped = set(excluded)
        original = [i for i in original if i not in dropped]
        song = filtered
    if song.n_lines == 0:
        return []
    scores = semantics.sts_many(
        [(line.kr, line.en) for line in song.lines], backends.embedding, backends.translation
    )
    return [DensityRow(song.genre, variant, song.song_id, i, v) for i, v in zip(original, scores)]


def density_data(
    corpus: Sequence[AlignedSong],
    backends: Backends | None = None,
    *,
    variants: Sequence[str] = VARIANTS,
    official_only: bool = False,
    jobs: int = 1,
) -> list[DensityRow]:
    backends = backends or Backends()
    songs = _select(corpus, official_only)
    rows: list[DensityRow] = []
    for genre in _genre_order(songs):
        bucket = [s for s in songs if s.genre == genre]
        for variant in variants:
            for chunk in parallel_map(lambda s: _song_density(s, backends, variant), bucket, jobs):
                rows.extend(chunk)
    return rows


def density_csv(rows: Iterable[DensityRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DENSITY_COLUMNS)
    for r in rows:
        writer.writerow([r.genre, r.variant, r.song_id, r.line_index, repr(r.sts)])
    return out.getvalue()
