"""Pixel decoding, 4-bin RGB histograms and nearest-class labelling."""

from __future__ import annotations

import io
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyReferenceSet, ImageDecodeError, Truncated, UnsupportedFormat

log = logging.getLogger(__name__)

BINS_PER_CHANNEL = 4
HISTOGRAM_SIZE = 3 * BINS_PER_CHANNEL
REFSET_HEADER = "#hybrid-ir-refset v1"


@dataclass(frozen=True)
class PixelBuffer:
    """Row-major 24-bit RGB raster; ``pixels`` holds ``width*height*3`` bytes."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height * 3:
            raise ValueError("pixel payload does not match dimensions")

    @classmethod
    def from_rgb(cls, width: int, height: int, rgb: Iterable[tuple[int, int, int]]) -> PixelBuffer:
        return cls(width, height, bytes(v for px in rgb for v in px))

    def __len__(self) -> int:
        return self.width * self.height

    def pixel(self, x: int, y: int) -> tuple[int, int, int]:
        i = 3 * (y * self.width + x)
        r, g, b = self.pixels[i:i + 3]
        return r, g, b


@dataclass(frozen=True)
class ColorHistogram:
    """Counts ordered ``[R0..R3, G0..G3, B0..B3]``; bin ``k`` covers ``64k .. 64k+63``."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != HISTOGRAM_SIZE:
            raise ValueError(f"histogram needs {HISTOGRAM_SIZE} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError("histogram counts must be non-negative")

    @property
    def red(self) -> tuple[int, ...]:
        return self.counts[0:4]

    @property
    def green(self) -> tuple[int, ...]:
        return self.counts[4:8]

    @property
    def blue(self) -> tuple[int, ...]:
        return self.counts[8:12]

    @property
    def pixel_count(self) -> int:
        return sum(self.red)

    def normalized(self) -> tuple[float, ...]:
        n = self.pixel_count
        return tuple(c / n for c in self.counts) if n else tuple(0.0 for _ in self.counts)


@dataclass
class ReferenceSet:
    classes: dict[str, list[ColorHistogram]]
    # files that failed to decode while building; not persisted
    skipped: list[str] = field(default_factory=list)

    @property
    def labels(self) -> list[str]:
        return list(self.classes)


@dataclass(frozen=True)
class ClassificationResult:
    label: str
    average_distances: dict[str, float]


# --- decoding -------------------------------------------------------------

def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header fields, honouring ``#`` comments."""
    tokens: list[bytes] = []
    i = 2
    n = len(data)
    while len(tokens) < count:
        while i < n and (data[i] in b" \t\r\n\v\f" or data[i] == ord("#")):
            if data[i] == ord("#"):
                while i < n and data[i] not in b"\r\n":
                    i += 1
            else:
                i += 1
        start = i
        while i < n and data[i] not in b" \t\r\n\v\f#":
            i += 1
        if start == i:
            raise Truncated("PPM header ends early")
        tokens.append(data[start:i])
    return tokens, i


def decode_ppm(data: bytes) -> PixelBuffer:
    """Decode a binary PPM (``P6``) with maxval 255."""
    if data[:2] != b"P6":
        raise UnsupportedFormat("only binary PPM (P6) is supported")
    tokens, i = _header_tokens(data, 3)
    if not all(t.isdigit() for t in tokens):
        raise UnsupportedFormat(f"bad PPM header fields {tokens!r}")
    width, height, maxval = (int(t) for t in tokens)
    if maxval != 255:
        raise UnsupportedFormat(f"maxval {maxval} unsupported (need 255)")
    if width < 1 or height < 1:
        raise UnsupportedFormat(f"degenerate size {width}x{height}")
    if i >= len(data):
        raise Truncated("missing pixel payload")
    # exactly one whitespace byte separates maxval from the raster
    start = i + 1
    size = width * height * 3
    payload = data[start:start + size]
    if len(payload) < size:
        raise Truncated(f"expected {size} payload bytes, found {len(payload)}")
    return PixelBuffer(width, height, bytes(payload))


def encode_ppm(img: PixelBuffer) -> bytes:
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + img.pixels


def decode_image(data: bytes) -> PixelBuffer:
    """Decode PPM natively; other formats go through Pillow when it is installed."""
    if data[:2] == b"P6":
        return decode_ppm(data)
    try:
        from PIL import Image
    except ImportError:
        raise UnsupportedFormat("not a P6 PPM and Pillow is not installed") from None
    try:
        with Image.open(io.BytesIO(data)) as im:
            rgb = im.convert("RGB")
            return PixelBuffer(rgb.width, rgb.height, rgb.tobytes())
    except Exception as exc:
        raise UnsupportedFormat(f"cannot decode image: {exc}") from exc


# --- histogram and distance ---------------------------------------------

def build_histogram(img: PixelBuffer) -> ColorHistogram:
    bins = np.frombuffer(img.pixels, dtype=np.uint8).reshape(-1, 3) >> 6
    counts: list[int] = []
    for channel in range(3):
        counts.extend(np.bincount(bins[:, channel], minlength=BINS_PER_CHANNEL).tolist())
    return ColorHistogram(tuple(counts))


def euclidean_distance(h1: ColorHistogram | Sequence[float], h2: ColorHistogram | Sequence[float]) -> float:
    """Square root of the summed squared bin differences over all 12 bins."""
    a = h1.counts if isinstance(h1, ColorHistogram) else h1
    b = h2.counts if isinstance(h2, ColorHistogram) else h2
    if len(a) != HISTOGRAM_SIZE or len(b) != HISTOGRAM_SIZE:
        raise ValueError("histograms must have 12 bins")
    # integer counts keep the sum exact before the root
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def choose_label(average_distances: Mapping[str, float]) -> str:
    """Class with the smallest average distance; ties go to the smaller label."""
    if not average_distances:
        raise EmptyReferenceSet("no classes to choose from")
    return min(average_distances, key=lambda c: (average_distances[c], c))


def classify(h: ColorHistogram, refs: ReferenceSet, normalize: bool = False) -> ClassificationResult:
    """Label ``h`` with the class of minimal mean Euclidean distance.

    With ``normalize`` the counts are divided by the pixel count first, which
    makes images of different sizes comparable.
    """
    if not refs.classes:
        raise EmptyReferenceSet("reference set has no classes")
    query = h.normalized() if normalize else h.counts
    averages = {}
    for label, members in refs.classes.items():
        if not members:
            raise EmptyReferenceSet(f"class {label!r} is empty")
        total = 0.0
        for ref in members:
            total += euclidean_distance(query, ref.normalized() if normalize else ref.counts)
        averages[label] = total / len(members)
    return ClassificationResult(choose_label(averages), averages)


# --- reference sets ---------------------------------------------------------

def _histogram_file(path: Path) -> ColorHistogram | None:
    try:
        return build_histogram(decode_image(path.read_bytes()))
    except (ImageDecodeError, OSError) as exc:
        log.warning("skipping %s: %s", path, exc)
        return None


def build_reference_set(root: str | os.PathLike, workers: int = 1) -> ReferenceSet:
    """Histogram every image under ``root/<class-label>/``.

    Undecodable files are skipped and listed in ``ReferenceSet.skipped``.
    """
    root = Path(root)
    if not root.is_dir():
        raise EmptyReferenceSet(f"{root} is not a directory")
    jobs: list[tuple[str, Path]] = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir() and not p.name.startswith(".")):
        for f in sorted(p for p in class_dir.iterdir() if p.is_file() and not p.name.startswith(".")):
            jobs.append((class_dir.name, f))
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        hists = list(pool.map(_histogram_file, [f for _, f in jobs]))
    classes: dict[str, list[ColorHistogram]] = {}
    skipped = []
    for (label, path), hist in zip(jobs, hists):
        if hist is None:
            skipped.append(str(path))
        else:
            classes.setdefault(label, []).append(hist)
    if not classes:
        raise EmptyReferenceSet(f"no decodable images under {root}")
    return ReferenceSet(classes, skipped)


def save_reference_set(refs: ReferenceSet, path: str | os.PathLike) -> None:
    lines = [REFSET_HEADER]
    for label, members in refs.classes.items():
        for h in members:
            lines.append(label + "\t" + " ".join(str(c) for c in h.counts))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def load_reference_set(path: str | os.PathLike) -> ReferenceSet:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != REFSET_HEADER:
        raise ValueError(f"{path}: missing {REFSET_HEADER!r} header")
    classes: dict[str, list[ColorHistogram]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            label, counts = line.split("\t")
            hist = ColorHistogram(tuple(int(c) for c in counts.split()))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
        classes.setdefault(label, []).append(hist)
    if not classes:
        raise EmptyReferenceSet(f"{path} holds no histograms")
    return ReferenceSet(classes)
