"""Semantic similarity between aligned lyrics, untranslated-line filtering and NSP scoring.

Models are reached through three small backend interfaces.  Offline stubs are
provided for each; the remote clients speak a JSON-over-HTTP protocol::

    POST {endpoint}/embed      {"texts": [...]}                        -> {"embeddings": [[...], ...]}
    POST {endpoint}/translate  {"texts": [...], "source": "ko", "target": "en"} -> {"texts": [...]}
    POST {endpoint}/nsp        {"pairs": [[prev, next], ...]}          -> {"scores": [...]}
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
import statistics
import time
import unicodedata
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Protocol, Sequence, runtime_checkable

import httpx
import numpy as np

from .corpus import AlignedSong, LinePair, Section
from .syllable import contains_hangul

log = logging.getLogger(__name__)

MAX_BATCH = 64


class BackendError(Exception):
    """Transport-level failure talking to a model service; safe to retry later."""


class BackendDataError(ValueError):
    """A service answered, but the request or response is unusable."""


class NothingToScore(ValueError):
    pass


@runtime_checkable
class EmbeddingBackend(Protocol):
    def embed(self, texts: Sequence[str]) -> list[np.ndarray]: ...


@runtime_checkable
class TranslationBackend(Protocol):
    def translate(self, texts: Sequence[str], source_lang: str, target_lang: str) -> list[str]: ...


@runtime_checkable
class CoherenceScorer(Protocol):
    def score(self, prev: str, next: str) -> float: ...


# -- offline stubs -----------------------------------------------------------


class HashingEmbedding:
    """Feature-hashed character 3-gram counts, L2-normalized.

    Text is NFC-normalized and casefolded, then padded with one boundary
    marker on each side.  Bucket choice uses keyed BLAKE2b so vectors are
    identical across processes and platforms.
    """

    def __init__(self, dim: int = 256, key: bytes = b"lyricmetrics-v1"):
        self.dim = dim
        self.key = key

    def bucket(self, gram: str) -> int:
        digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8, key=self.key).digest()
        return int.from_bytes(digest, "little") % self.dim

    @staticmethod
    def trigrams(text: str) -> list[str]:
        padded = "\x02" + unicodedata.normalize("NFC", text).casefold() + "\x03"
        return [padded[i : i + 3] for i in range(len(padded) - 2)] or [padded]

    def embed_one(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for gram in self.trigrams(text):
            vec[self.bucket(gram)] += 1.0
        return vec / np.linalg.norm(vec)

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [self.embed_one(t) for t in texts]


class IdentityTranslation:
    def translate(self, texts: Sequence[str], source_lang: str = "ko", target_lang: str = "en") -> list[str]:
        return list(texts)


class DictTranslation:
    """Lookup-table translator for tests and cached translations; unknown texts pass through."""

    def __init__(self, table: dict[str, str]):
        self.table = dict(table)

    def translate(self, texts, source_lang="ko", target_lang="en"):
        return [self.table.get(t, t) for t in texts]


class ConstantScorer:
    def __init__(self, value: float = 0.5):
        self.value = value

    def score(self, prev: str, next: str) -> float:
        return self.value


class HashingCoherenceScorer:
    """Maps stub-embedding cosine similarity of two lines onto [0, 1]."""

    def __init__(self, embedding: HashingEmbedding | None = None):
        self.embedding = embedding or HashingEmbedding()

    def score(self, prev: str, next: str) -> float:
        a, b = self.embedding.embed([prev, next])
        return min(1.0, max(0.0, (1.0 + float(a @ b)) / 2.0))


# -- remote clients ----------------------------------------------------------


class RemoteService:
    """POSTs JSON with bounded retries and exponential backoff."""

    def __init__(
        self,
        endpoint: str,
        *,
        api_key: str | None = None,
        api_key_env: str | None = None,
        attempts: int = 3,
        backoff: float = 0.5,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
        sleep=time.sleep,
    ):
        if not endpoint:
            raise ValueError("remote backend requires an endpoint")
        if api_key is None and api_key_env:
            api_key = os.environ.get(api_key_env)
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self.client = httpx.Client(
            base_url=endpoint.rstrip("/"), headers=headers, timeout=timeout, transport=transport
        )
        self.attempts = attempts
        self.backoff = backoff
        self.sleep = sleep

    def post(self, path: str, payload: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.attempts):
            if attempt:
                self.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self.client.post(path, json=payload)
            except httpx.TransportError as exc:
                last = exc
                log.warning("%s: transport error (attempt %d): %s", path, attempt + 1, exc)
                continue
            if response.status_code == 429 or response.status_code >= 500:
                last = BackendError(f"{path}: HTTP {response.status_code}")
                log.warning("%s: HTTP %d (attempt %d)", path, response.status_code, attempt + 1)
                continue
            if response.status_code >= 400:
                raise BackendDataError(f"{path}: HTTP {response.status_code}: {response.text[:200]}")
            try:
                return response.json()
            except ValueError as exc:
                raise BackendDataError(f"{path}: response is not JSON") from exc
        raise BackendError(f"{path}: giving up after {self.attempts} attempts: {last}")

    def batched(self, items: Sequence, path: str, build, key: str) -> list:
        out: list = []
        for start in range(0, len(items), MAX_BATCH):
            chunk = items[start : start + MAX_BATCH]
            body = self.post(path, build(chunk))
            values = body.get(key) if isinstance(body, dict) else None
            if not isinstance(values, list) or len(values) != len(chunk):
                raise BackendDataError(f"{path}: expected {len(chunk)} {key!r}, got {values!r:.100}")
            out.extend(values)
        return out


class RemoteEmbedding(RemoteService):
    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        rows = self.batched(list(texts), "/embed", lambda c: {"texts": c}, "embeddings")
        vectors = []
        for row in rows:
            vec = np.asarray(row, dtype=np.float64)
            norm = np.linalg.norm(vec)
            if vec.ndim != 1 or norm == 0 or not np.isfinite(norm):
                raise BackendDataError("/embed: degenerate embedding")
            vectors.append(vec / norm)
        return vectors


class RemoteTranslation(RemoteService):
    def translate(self, texts, source_lang="ko", target_lang="en"):
        build = lambda c: {"texts": c, "source": source_lang, "target": target_lang}  # noqa: E731
        out = self.batched(list(texts), "/translate", build, "texts")
        if not all(isinstance(t, str) for t in out):
            raise BackendDataError("/translate: non-string translation")
        return out


class RemoteCoherenceScorer(RemoteService):
    def score_pairs(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        scores = self.batched([list(p) for p in pairs], "/nsp", lambda c: {"pairs": c}, "scores")
        out = [float(s) for s in scores]
        if not all(0.0 <= s <= 1.0 for s in out):
            raise BackendDataError("/nsp: score outside [0, 1]")
        return out

    def score(self, prev: str, next: str) -> float:
        return self.score_pairs([(prev, next)])[0]


# -- similarity --------------------------------------------------------------


def to_english(texts: Sequence[str], tr: TranslationBackend) -> list[str]:
    """Translate the texts that contain Hangul; everything else passes through."""
    out = list(texts)
    todo = [i for i, t in enumerate(texts) if contains_hangul(t)]
    if todo:
        translated = tr.translate([texts[i] for i in todo], "ko", "en")
        if len(translated) != len(todo):
            raise BackendDataError("translation backend returned the wrong number of texts")
        for i, t in zip(todo, translated):
            out[i] = t
    return out


def sts_many(
    pairs: Sequence[tuple[str, str]], emb: EmbeddingBackend, tr: TranslationBackend
) -> list[float]:
    if not pairs:
        return []
    flat = to_english([t for pair in pairs for t in pair], tr)
    vectors = emb.embed(flat)
    scores = []
    for i in range(len(pairs)):
        a, b = vectors[2 * i], vectors[2 * i + 1]
        value = float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        scores.append(min(1.0, max(-1.0, value)))
    return scores


def sts(a: str, b: str, emb: EmbeddingBackend, tr: TranslationBackend) -> float:
    return sts_many([(a, b)], emb, tr)[0]


# -- untranslated lines ------------------------------------------------------


def comparison_key(text: str) -> str:
    text = unicodedata.normalize("NFC", text).casefold()
    text = "".join(" " if unicodedata.category(c)[0] in "PS" else c for c in text)
    return " ".join(text.split())


def is_untranslated(line: LinePair) -> bool:
    return comparison_key(line.en) == comparison_key(line.kr)


def filter_untranslated(song: AlignedSong) -> tuple[AlignedSong, list[int]]:
    """Drop line pairs left untranslated (same text on both sides).

    Sections emptied by the filter are dropped and all indices re-derived.
    Returns the filtered song and the original indices of removed lines.
    """
    excluded: list[int] = []
    sections = []
    next_line = 1
    for section in song.sections:
        kept = []
        for line in section.lines:
            if is_untranslated(line):
                excluded.append(line.line_index)
            else:
                kept.append(replace(line, line_index=next_line))
                next_line += 1
        if kept:
            sections.append(Section(section_index=len(sections) + 1, lines=tuple(kept)))
    return replace(song, sections=tuple(sections)), excluded


# -- Sem_line / Sem_sec -------------------------------------------------------


@dataclass(frozen=True)
class SemReport:
    sem_line: float
    sem_sec: float
    excluded_line_count: int
    per_line_sts: tuple[float, ...]
    per_section_sts: tuple[float, ...] = ()
    section_sizes: tuple[int, ...] = ()


def line_mean(values: Sequence[float]) -> float:
    """Uniformly weighted mean of per-line similarities."""
    if not values:
        raise NothingToScore("no lines to score")
    n = len(values)
    return math.fsum(v / n for v in values)


def section_weights(sizes: Sequence[int]) -> list[Fraction]:
    total = sum(sizes)
    return [Fraction(size, total) for size in sizes]


def section_weighted(sizes: Sequence[int], values: Sequence[float]) -> float:
    """Sections weighted by their share of the song's lines."""
    if not sizes or sum(sizes) == 0:
        raise NothingToScore("no sections to score")
    if len(sizes) != len(values):
        raise ValueError("sizes and values differ in length")
    total = sum(sizes)
    return math.fsum(size / total * v for size, v in zip(sizes, values))


def section_text(section: Section, language: str) -> str:
    return " ".join(getattr(line, language).strip() for line in section.lines)


def semantic_similarity(
    song: AlignedSong,
    emb: EmbeddingBackend,
    tr: TranslationBackend,
    exclude_untranslated: bool = False,
) -> SemReport:
    excluded: list[int] = []
    if exclude_untranslated:
        song, excluded = filter_untranslated(song)
    lines = song.lines
    if not lines:
        raise NothingToScore("no lines to score")
    pairs = [(line.kr, line.en) for line in lines]
    pairs += [(section_text(s, "kr"), section_text(s, "en")) for s in song.sections]
    scores = sts_many(pairs, emb, tr)
    per_line = scores[: len(lines)]
    per_section = scores[len(lines) :]
    sizes = [len(s.lines) for s in song.sections]
    return SemReport(
        sem_line=line_mean(per_line),
        sem_sec=section_weighted(sizes, per_section),
        excluded_line_count=len(excluded),
        per_line_sts=tuple(per_line),
        per_section_sts=tuple(per_section),
        section_sizes=tuple(sizes),
    )


def sem_line(song, emb, tr, exclude_untranslated: bool = False) -> SemReport:
    return semantic_similarity(song, emb, tr, exclude_untranslated)


def sem_sec(song, emb, tr, exclude_untranslated: bool = False) -> SemReport:
    return semantic_similarity(song, emb, tr, exclude_untranslated)


# -- NSP coherence -----------------------------------------------------------


def nsp_scores(lines: Sequence[str], scorer: CoherenceScorer) -> list[float]:
    if len(lines) < 2:
        raise NothingToScore("need two lines")
    pairs = list(zip(lines, lines[1:]))
    batch = getattr(scorer, "score_pairs", None)
    scores = batch(pairs) if batch is not None else [scorer.score(a, b) for a, b in pairs]
    for s in scores:
        if not 0.0 <= s <= 1.0:
            raise BackendDataError(f"coherence score {s} outside [0, 1]")
    return list(scores)


def coherence_nsp(lines: Sequence[str], scorer: CoherenceScorer) -> float:
    return statistics.fmean(nsp_scores(lines, scorer))
