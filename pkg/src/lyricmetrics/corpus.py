"""Aligned bilingual lyric corpus: data model, JSON/JSONL I/O, validation and statistics.

A corpus file holds one song per JSON object, either as a JSON array or as
JSON Lines.  Section and line indices are implicit from array order::

    {"song_id": "...", "artist": "...", "track": "...",
     "genre": "kpop", "translation_status": "official",
     "original_language": "kr",
     "sections": [{"lines": [{"en": "...", "kr": "..."}]}]}
"""

from __future__ import annotations

import io
import json
import unicodedata
from dataclasses import dataclass
from typing import IO, Any, Iterable, Sequence, Union

GENRES = ("kpop", "animation", "theatre", "other")
TRANSLATION_STATUSES = ("official", "unofficial")
LANGUAGES = ("en", "kr")


class CorpusError(Exception):
    """Base class for corpus loading failures."""


class CorpusParseError(CorpusError):
    """The input is not decodable UTF-8 JSON / JSONL."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (at byte {byte_offset})")
        self.byte_offset = byte_offset


class SchemaError(CorpusError):
    """A field is missing or has the wrong type/value."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class AlignmentError(CorpusError):
    """A structurally valid song breaks an alignment invariant."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        first = self.violations[0]
        where = f"song {first.song_id!r}, section {first.section_index}"
        if first.line_index is not None:
            where += f", line {first.line_index}"
        more = f" (+{len(self.violations) - 1} more)" if len(self.violations) > 1 else ""
        super().__init__(f"alignment error in {where}: {first.rule}: {first.message}{more}")


@dataclass(frozen=True)
class LinePair:
    en: str
    kr: str
    line_index: int


@dataclass(frozen=True)
class Section:
    section_index: int
    lines: tuple[LinePair, ...]

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class AlignedSong:
    song_id: str
    artist: str
    track: str
    genre: str
    translation_status: str
    original_language: str
    sections: tuple[Section, ...]

    @property
    def lines(self) -> list[LinePair]:
        return [line for section in self.sections for line in section.lines]

    @property
    def n_lines(self) -> int:
        return sum(len(s.lines) for s in self.sections)

    def texts(self, language: str) -> list[str]:
        return [getattr(line, language) for line in self.lines]


@dataclass(frozen=True)
class Violation:
    song_id: str
    section_index: int | None
    line_index: int | None
    rule: str
    message: str = ""

    def __str__(self) -> str:
        section = "-" if self.section_index is None else str(self.section_index)
        line = "-" if self.line_index is None else str(self.line_index)
        return f"{self.song_id}\tsection={section}\tline={line}\t{self.rule}\t{self.message}"


@dataclass(frozen=True)
class CorpusStats:
    songs: int = 0
    total_sections: int = 0
    unique_sections_kr: int = 0
    unique_sections_en: int = 0
    total_lines: int = 0
    unique_lines_kr: int = 0
    unique_lines_en: int = 0
    vocab_en: int = 0


def build_song(
    song_id: str,
    sections: Iterable[Iterable[tuple[str, str]]],
    *,
    artist: str = "",
    track: str = "",
    genre: str = "other",
    translation_status: str = "official",
    original_language: str = "kr",
) -> AlignedSong:
    """Convenience constructor from nested ``(en, kr)`` tuples with implicit indices."""
    built = []
    line_index = 1
    for section_index, section in enumerate(sections, start=1):
        lines = []
        for en, kr in section:
            lines.append(LinePair(en=en, kr=kr, line_index=line_index))
            line_index += 1
        built.append(Section(section_index=section_index, lines=tuple(lines)))
    return AlignedSong(
        song_id=song_id,
        artist=artist,
        track=track,
        genre=genre,
        translation_status=translation_status,
        original_language=original_language,
        sections=tuple(built),
    )


def validate_alignment(song: AlignedSong) -> list[Violation]:
    violations: list[Violation] = []

    def add(section_index, line_index, rule, message):
        violations.append(Violation(song.song_id, section_index, line_index, rule, message))

    if song.genre not in GENRES:
        add(None, None, "genre", f"unknown genre {song.genre!r}")
    if song.translation_status not in TRANSLATION_STATUSES:
        add(None, None, "translation-status", f"unknown status {song.translation_status!r}")
    if song.original_language not in LANGUAGES:
        add(None, None, "original-language", f"unknown language {song.original_language!r}")
    if not song.sections:
        add(None, None, "non-empty-song", "song has no sections")

    expected_line = 1
    for position, section in enumerate(song.sections, start=1):
        if section.section_index != position:
            add(
                section.section_index,
                None,
                "contiguous-sections",
                f"expected section index {position}, found {section.section_index}",
            )
        if not section.lines:
            add(section.section_index, None, "non-empty-section", "section has no lines")
        for line in section.lines:
            if line.line_index != expected_line:
                add(
                    section.section_index,
                    line.line_index,
                    "contiguous-lines",
                    f"expected line index {expected_line}, found {line.line_index}",
                )
            expected_line = line.line_index + 1
            for language in LANGUAGES:
                text = getattr(line, language)
                if not isinstance(text, str) or not text.strip():
                    add(
                        section.section_index,
                        line.line_index,
                        "non-empty-line",
                        f"{language} text is empty or missing",
                    )
    return violations


# -- parsing -----------------------------------------------------------------

Source = Union[bytes, str, IO[bytes], IO[str]]


def _read_bytes(stream: Source) -> bytes:
    if isinstance(stream, bytes):
        return stream
    if isinstance(stream, str):
        return stream.encode("utf-8")
    data = stream.read()
    return data.encode("utf-8") if isinstance(data, str) else data


def _nfc(value: str) -> str:
    return unicodedata.normalize("NFC", value)


def _require_str(obj: dict, key: str, path: str, choices: Sequence[str] | None = None) -> str:
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    value = obj[key]
    if not isinstance(value, str):
        raise SchemaError(f"{path}.{key}", f"expected string, got {type(value).__name__}")
    if choices is not None and value not in choices:
        raise SchemaError(f"{path}.{key}", f"expected one of {list(choices)}, got {value!r}")
    return _nfc(value)


def _optional_index(obj: dict, key: str, path: str, default: int) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{path}.{key}", "expected integer")
    return value


def song_from_dict(obj: Any, path: str = "$") -> AlignedSong:
    """Build a song from its JSON object without checking alignment invariants.

    A line with a missing or null language side is kept with empty text so
    that :func:`validate_alignment` can report it against its section.
    """
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected object, got {type(obj).__name__}")
    song_id = _require_str(obj, "song_id", path)
    artist = _require_str(obj, "artist", path)
    track = _require_str(obj, "track", path)
    genre = _require_str(obj, "genre", path, GENRES)
    status = _require_str(obj, "translation_status", path, TRANSLATION_STATUSES)
    original = _require_str(obj, "original_language", path, LANGUAGES)
    raw_sections = obj.get("sections")
    if not isinstance(raw_sections, list):
        raise SchemaError(f"{path}.sections", "expected array")

    sections = []
    line_counter = 1
    for s_pos, raw_section in enumerate(raw_sections):
        s_path = f"{path}.sections[{s_pos}]"
        if not isinstance(raw_section, dict):
            raise SchemaError(s_path, "expected object")
        raw_lines = raw_section.get("lines")
        if not isinstance(raw_lines, list):
            raise SchemaError(f"{s_path}.lines", "expected array")
        section_index = _optional_index(raw_section, "section_index", s_path, s_pos + 1)
        lines = []
        for l_pos, raw_line in enumerate(raw_lines):
            l_path = f"{s_path}.lines[{l_pos}]"
            if not isinstance(raw_line, dict):
                raise SchemaError(l_path, "expected object")
            texts = {}
            for language in LANGUAGES:
                value = raw_line.get(language)
                if value is None:
                    value = ""
                elif not isinstance(value, str):
                    raise SchemaError(f"{l_path}.{language}", "expected string")
                texts[language] = _nfc(value)
            line_index = _optional_index(raw_line, "line_index", l_path, line_counter)
            lines.append(LinePair(en=texts["en"], kr=texts["kr"], line_index=line_index))
            line_counter = line_index + 1
        sections.append(Section(section_index=section_index, lines=tuple(lines)))

    return AlignedSong(
        song_id=song_id,
        artist=artist,
        track=track,
        genre=genre,
        translation_status=status,
        original_language=original,
        sections=tuple(sections),
    )


def _decode_documents(data: bytes) -> list[tuple[Any, str]]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusParseError(f"invalid UTF-8: {exc.reason}", exc.start) from None
    if text.startswith("﻿"):
        text = text[1:]
    stripped = text.lstrip()
    if not stripped:
        return []

    def offset(char_pos: int) -> int:
        return len(text[:char_pos].encode("utf-8"))

    if stripped.startswith("["):
        try:
            docs = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CorpusParseError(f"malformed JSON: {exc.msg}", offset(exc.pos)) from None
        return [(doc, f"$[{i}]") for i, doc in enumerate(docs)]

    try:
        return [(json.loads(text), "$")]
    except json.JSONDecodeError:
        pass

    docs = []
    char_pos = 0
    for line_no, line in enumerate(text.splitlines(keepends=True), start=1):
        if line.strip():
            try:
                docs.append((json.loads(line), f"line {line_no}"))
            except json.JSONDecodeError as exc:
                raise CorpusParseError(
                    f"malformed JSON on line {line_no}: {exc.msg}", offset(char_pos + exc.pos)
                ) from None
        char_pos += len(line)
    return docs


def load_songs(stream: Source) -> list[AlignedSong]:
    """Parse structure only; alignment invariants are left to the caller."""
    return [song_from_dict(doc, path) for doc, path in _decode_documents(_read_bytes(stream))]


def parse_corpus(stream: Source) -> list[AlignedSong]:
    songs = load_songs(stream)
    for song in songs:
        violations = validate_alignment(song)
        if violations:
            raise AlignmentError(violations)
    return songs


def read_corpus(path) -> list[AlignedSong]:
    with open(path, "rb") as fh:
        return parse_corpus(fh)


# -- serialization -----------------------------------------------------------


def song_to_dict(song: AlignedSong) -> dict:
    """Inverse of :func:`song_from_dict`.

    Indices are written only where they differ from the implicit array
    position, so a malformed song stays malformed across a round trip.
    """
    sections = []
    expected_line = 1
    for position, section in enumerate(song.sections, start=1):
        lines = []
        for line in section.lines:
            entry: dict[str, Any] = {"en": line.en, "kr": line.kr}
            if line.line_index != expected_line:
                entry["line_index"] = line.line_index
            expected_line = line.line_index + 1
            lines.append(entry)
        entry_section: dict[str, Any] = {"lines": lines}
        if section.section_index != position:
            entry_section["section_index"] = section.section_index
        sections.append(entry_section)
    return {
        "song_id": song.song_id,
        "artist": song.artist,
        "track": song.track,
        "genre": song.genre,
        "translation_status": song.translation_status,
        "original_language": song.original_language,
        "sections": sections,
    }


def serialize_corpus(songs: Sequence[AlignedSong], *, jsonl: bool = False) -> bytes:
    if jsonl:
        out = io.StringIO()
        for song in songs:
            out.write(json.dumps(song_to_dict(song), ensure_ascii=False))
            out.write("\n")
        return out.getvalue().encode("utf-8")
    payload = [song_to_dict(song) for song in songs]
    return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


# -- statistics --------------------------------------------------------------


def _key(text: str) -> str:
    return _nfc(text).strip()


def corpus_stats(corpus: Sequence[AlignedSong]) -> CorpusStats:
    sections_en: set[tuple[str, ...]] = set()
    sections_kr: set[tuple[str, ...]] = set()
    lines_en: set[str] = set()
    lines_kr: set[str] = set()
    vocab_en: set[str] = set()
    total_sections = 0
    total_lines = 0

    for song in corpus:
        for section in song.sections:
            total_sections += 1
            en = tuple(_key(line.en) for line in section.lines)
            kr = tuple(_key(line.kr) for line in section.lines)
            sections_en.add(en)
            sections_kr.add(kr)
            total_lines += len(section.lines)
            lines_en.update(en)
            lines_kr.update(kr)
            for text in en:
                vocab_en.update(text.split())

    return CorpusStats(
        songs=len(corpus),
        total_sections=total_sections,
        unique_sections_kr=len(sections_kr),
        unique_sections_en=len(sections_en),
        total_lines=total_lines,
        unique_lines_kr=len(lines_kr),
        unique_lines_en=len(lines_en),
        vocab_en=len(vocab_en),
    )
