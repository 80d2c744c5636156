"""Loader for pronouncing dictionaries in the CMUdict text format.

Each entry is ``word PH1 PH2 ...``; alternate pronunciations repeat the word
with a ``(2)``, ``(3)`` ... suffix.  Only the first pronunciation is kept.
"""

from __future__ import annotations

import os
import re
import threading
from pathlib import Path
from typing import IO, Iterable, Mapping

DICT_ENV_VAR = "LYR_DICT"

_VARIANT = re.compile(r"\(\d+\)$")


class PronouncingDictionary(Mapping[str, tuple[str, ...]]):
    """Read-only map from lowercase word to its first ARPABET pronunciation."""

    def __init__(self, entries: Mapping[str, tuple[str, ...]]):
        self._entries = dict(entries)

    def __getitem__(self, word: str) -> tuple[str, ...]:
        return self._entries[word]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "PronouncingDictionary":
        entries: dict[str, tuple[str, ...]] = {}
        for raw in lines:
            line = raw.split("#", 1)[0].strip()
            if not line or line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) < 2:
                continue
            word = _VARIANT.sub("", parts[0]).lower()
            entries.setdefault(word, tuple(parts[1:]))
        return cls(entries)

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "PronouncingDictionary":
        with open(path, encoding="utf-8", errors="replace") as fh:
            return cls.from_lines(fh)

    @classmethod
    def from_stream(cls, stream: IO[bytes]) -> "PronouncingDictionary":
        return cls.from_lines(line.decode("utf-8", errors="replace") for line in stream)


def vowel_count(phones: Iterable[str]) -> int:
    """ARPABET vowels are the phones carrying a stress digit."""
    return sum(1 for p in phones if p[-1:].isdigit())


_default: PronouncingDictionary | None = None
_lock = threading.Lock()


def load_default() -> PronouncingDictionary:
    """Dictionary named by ``$LYR_DICT``, else the full CMUdict from the ``cmudict`` package."""
    path = os.environ.get(DICT_ENV_VAR)
    if path:
        return PronouncingDictionary.from_file(Path(path))
    import cmudict

    with cmudict.dict_stream() as stream:
        return PronouncingDictionary.from_stream(stream)


def get_default() -> PronouncingDictionary:
    global _default
    with _lock:
        if _default is None:
            _default = load_default()
        return _default


def set_default(dictionary: PronouncingDictionary | None) -> None:
    """Install the process-wide dictionary (``None`` resets to lazy loading)."""
    global _default
    with _lock:
        _default = dictionary
