"""Tokenization and stop-word handling shared by indexing and querying."""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Iterable

_TOKEN = re.compile(r"[a-z0-9]+")

IMAGE_EXTENSIONS = frozenset({"jpg", "jpeg", "png", "gif", "bmp", "ppm"})


def tokenize(text: str, stopwords: Iterable[str] = frozenset()) -> list[str]:
    """Lowercase ``text`` and split it on every character outside ``[a-z0-9]``.

    Order and duplicates are preserved; stop words are dropped.
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    return [t for t in _TOKEN.findall(text.lower()) if t not in stop]


def filename_terms(filename: str, stopwords: Iterable[str] = frozenset()) -> list[str]:
    """Tokens of an image filename with a trailing image extension removed.

    >>> filename_terms("Rainy_Blue_Ridge.jpg")
    ['rainy', 'blue', 'ridge']
    """
    tokens = tokenize(filename)
    if len(tokens) > 1 and tokens[-1] in IMAGE_EXTENSIONS:
        tokens.pop()
    stop = frozenset(stopwords)
    return [t for t in tokens if t not in stop]


def parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stop-word file; ``None`` selects the bundled English list."""
    if path is None:
        text = resources.files("hybrid_ir").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_stopwords(text)
