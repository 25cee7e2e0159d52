"""Term-weighting schemes: boolean, tf, idf, tf-idf and location-weighted vtf-idf."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import EmptyCorpus, UnknownScheme
from .extract import SourceLocation

L = SourceLocation

SCHEMES = ("boolean", "tf", "idf", "tf-idf", "vtf-idf")

# Location multipliers applied to raw counts before the idf product.
PRESETS: dict[str, Mapping[SourceLocation, float]] = {
    "paper-multiplicative": MappingProxyType(
        {L.P: 1.0, L.H1: 10.0, L.H2: 10.0, L.ALT: 10.0, L.FILENAME: 20.0, L.CLASS_LABEL: 20.0}),
    # the table's "+10"/"+20" read as bonuses on top of the base weight of 1
    "paper-additive": MappingProxyType(
        {L.P: 1.0, L.H1: 11.0, L.H2: 11.0, L.ALT: 11.0, L.FILENAME: 21.0, L.CLASS_LABEL: 21.0}),
    "flat": MappingProxyType({loc: 1.0 for loc in SourceLocation}),
}
DEFAULT_TABLE = PRESETS["paper-multiplicative"]

TermCounts = Mapping[SourceLocation, int]


@dataclass(frozen=True)
class CorpusStats:
    """Immutable (n, df) snapshot; ``df`` maps term -> number of images containing it."""

    n: int
    df: Mapping[str, int]

    @classmethod
    def of(cls, n: int, df: Mapping[str, int]) -> CorpusStats:
        return cls(n, MappingProxyType(dict(df)))


def parse_location(name: str) -> SourceLocation:
    key = name.strip().lower().replace("-", "_")
    for loc in SourceLocation:
        if key in (loc.value, loc.name.lower()):
            return loc
    raise ValueError(f"unknown term location {name!r}")


def validate_table(table: Mapping[SourceLocation, float]) -> Mapping[SourceLocation, float]:
    missing = [loc.name for loc in SourceLocation if loc not in table]
    if missing:
        raise ValueError(f"weight table lacks locations: {', '.join(missing)}")
    for loc, w in table.items():
        if not (w > 0 and math.isfinite(w)):
            raise ValueError(f"weight for {loc.name} must be a positive number, got {w}")
    return table


def load_weight_table(spec: str | os.PathLike) -> Mapping[SourceLocation, float]:
    """Resolve a preset name, or read a ``location<TAB>multiplier`` file."""
    if isinstance(spec, str) and spec in PRESETS:
        return PRESETS[spec]
    path = Path(spec)
    if not path.is_file():
        raise ValueError(f"{spec!r} is neither a weight preset ({', '.join(PRESETS)}) nor a file")
    table = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        name, _, value = line.partition("\t")
        table[parse_location(name)] = float(value)
    return MappingProxyType(validate_table(table))


def boolean_weight(tf: int) -> int:
    return 1 if tf > 0 else 0


def idf(term: str, stats: CorpusStats) -> float:
    """``log10(n / df)``; unseen terms get 0."""
    if stats.n < 1:
        raise EmptyCorpus("idf is undefined on an empty corpus")
    df = stats.df.get(term, 0)
    if df <= 0:
        return 0.0
    return math.log10(stats.n / df)


def tf_idf(tf: float, idf_value: float) -> float:
    return tf * idf_value


def variable_tf(counts: TermCounts, table: Mapping[SourceLocation, float] = DEFAULT_TABLE) -> float:
    """Location-weighted frequency: sum of count x multiplier over locations."""
    return sum(c * table[loc] for loc, c in counts.items())


def vtf_idf(counts: TermCounts, table: Mapping[SourceLocation, float], idf_value: float) -> float:
    return variable_tf(counts, table) * idf_value


def weigh(scheme: str, term: str, counts: TermCounts, stats: CorpusStats | None,
          table: Mapping[SourceLocation, float] = DEFAULT_TABLE) -> float:
    """Weight of one term of one image under ``scheme``.

    Location-blind schemes sum the counts across locations first. ``stats``
    may be omitted for ``boolean`` and ``tf``.
    """
    if scheme not in SCHEMES:
        raise UnknownScheme(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    tf = sum(counts.values())
    if scheme == "boolean":
        return float(boolean_weight(tf))
    if scheme == "tf":
        return float(tf)
    if stats is None:
        raise EmptyCorpus(f"scheme {scheme!r} needs corpus statistics")
    term_idf = idf(term, stats)
    if scheme == "idf":
        return term_idf if tf > 0 else 0.0
    if scheme == "tf-idf":
        return tf_idf(tf, term_idf)
    return vtf_idf(counts, table, term_idf)
