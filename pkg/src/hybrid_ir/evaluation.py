"""Precision at a cutoff and side-by-side comparison of weighting schemes."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean
from typing import Collection, Iterable, Mapping, Sequence

from .extract import SourceLocation
from .index import VectorIndex
from .query import search
from .weighting import DEFAULT_TABLE

Judgments = Mapping[str, frozenset[int]]


def precision(returned: Sequence[int], relevant: Collection[int]) -> float:
    """Fraction of returned ids that are relevant; 0 when nothing was returned."""
    if not returned:
        return 0.0
    relevant = set(relevant)
    return sum(1 for r in returned if r in relevant) / len(returned)


def recall(returned: Sequence[int], relevant: Collection[int]) -> float:
    """Fraction of relevant ids that were returned; only meaningful for exhaustive judgments."""
    relevant = set(relevant)
    if not relevant:
        return 0.0
    return len(relevant.intersection(returned)) / len(relevant)


@dataclass
class QueryOutcome:
    query: str
    returned: list[int]
    precision: float
    recall: float | None = None


@dataclass
class SchemeResult:
    scheme: str
    k: int
    per_query: list[QueryOutcome] = field(default_factory=list)

    @property
    def mean_precision(self) -> float:
        return fmean(q.precision for q in self.per_query) if self.per_query else 0.0

    @property
    def mean_recall(self) -> float | None:
        values = [q.recall for q in self.per_query if q.recall is not None]
        return fmean(values) if values else None


@dataclass
class SchemeReport:
    k: int
    schemes: dict[str, SchemeResult] = field(default_factory=dict)

    def to_tsv(self) -> str:
        with_recall = any(r.mean_recall is not None for r in self.schemes.values())
        head = ["scheme", "k", "mean_precision"] + (["mean_recall"] if with_recall else [])
        rows = ["\t".join(head)]
        for res in self.schemes.values():
            row = [res.scheme, str(res.k), f"{res.mean_precision:.6f}"]
            if with_recall:
                row.append(f"{res.mean_recall:.6f}")
            rows.append("\t".join(row))
        head = ["scheme", "query", "precision"] + (["recall"] if with_recall else [])
        rows.append("\t".join(head))
        for res in self.schemes.values():
            for q in res.per_query:
                row = [res.scheme, q.query, f"{q.precision:.6f}"]
                if with_recall:
                    row.append(f"{q.recall:.6f}")
                rows.append("\t".join(row))
        return "\n".join(rows) + "\n"


def load_judgments(path: str | os.PathLike) -> dict[str, frozenset[int]]:
    """Parse ``query<TAB>id,id,...`` lines; raises ValueError on malformed input."""
    judgments: dict[str, frozenset[int]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip():
            raise ValueError(f"{path}:{lineno}: expected 'query<TAB>ids'")
        ids = [p.strip() for p in parts[1].split(",") if p.strip()]
        if not all(i.isdigit() for i in ids):
            raise ValueError(f"{path}:{lineno}: record ids must be integers")
        judgments[parts[0].strip()] = frozenset(int(i) for i in ids)
    return judgments


def run_comparison(index: VectorIndex, judgments: Judgments, schemes: Iterable[str], k: int = 10,
                   table: Mapping[SourceLocation, float] = DEFAULT_TABLE,
                   stopwords: Iterable[str] = frozenset(), exhaustive: bool = False) -> SchemeReport:
    unknown = {rid for ids in judgments.values() for rid in ids} - set(index.records)
    if unknown:
        raise ValueError(f"judgments reference unknown record ids {sorted(unknown)}")
    stop = frozenset(stopwords)
    report = SchemeReport(k)
    for scheme in schemes:
        result = SchemeResult(scheme, k)
        for query, relevant in judgments.items():
            returned = [r.record_id for r in search(index, query, k, scheme, table, stop)]
            result.per_query.append(QueryOutcome(
                query, returned, precision(returned, relevant),
                recall(returned, relevant) if exhaustive else None,
            ))
        report.schemes[scheme] = result
    return report
