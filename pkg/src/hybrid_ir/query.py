"""Text queries: tf-idf query vectors and cosine ranking over the index."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyCorpus, UnknownScheme
from .extract import SourceLocation
from .index import SparseVector, TermDictionary, VectorIndex
from .text import tokenize
from .weighting import DEFAULT_TABLE, SCHEMES, CorpusStats, idf, tf_idf


@dataclass(frozen=True)
class RankedResult:
    record_id: int
    score: float
    rank: int


def weight_query(text: str, stopwords: Iterable[str], stats: CorpusStats,
                 terms: TermDictionary) -> SparseVector:
    """tf-idf vector for a query, keyed by the index's term ids.

    Terms the index has never seen have idf 0 and are dropped.
    """
    vec: SparseVector = {}
    for term, tf in Counter(tokenize(text, frozenset(stopwords))).items():
        w = tf_idf(tf, idf(term, stats))
        tid = terms.id_of(term)
        if w != 0 and tid is not None:
            vec[tid] = w
    return vec


def cosine_similarity(q: Mapping[int, float], d: Mapping[int, float]) -> float:
    """Cosine of the angle between two sparse vectors; 0 if either is empty or zero."""
    if len(q) > len(d):
        q, d = d, q
    dot = sum(w * d[t] for t, w in q.items() if t in d)
    if dot == 0:
        return 0.0
    norm = math.sqrt(sum(w * w for w in q.values())) * math.sqrt(sum(w * w for w in d.values()))
    if norm == 0:
        return 0.0
    # weights are non-negative, so only rounding can push past 1
    return min(1.0, dot / norm)


def rank(scores: Mapping[int, float], k: int, suppress_zero: bool = True) -> list[RankedResult]:
    """Top-``k`` by descending score, ties by ascending record id."""
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    if suppress_zero:
        ordered = [kv for kv in ordered if kv[1] > 0]
    return [RankedResult(rid, s, i) for i, (rid, s) in enumerate(ordered[:k], start=1)]


def search(index: VectorIndex, query: str, k: int = 10, scheme: str = "vtf-idf",
           table: Mapping[SourceLocation, float] = DEFAULT_TABLE,
           stopwords: Iterable[str] = frozenset(), suppress_zero: bool = True) -> list[RankedResult]:
    """Rank every indexed image against ``query`` by linear scan."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if scheme not in SCHEMES:
        raise UnknownScheme(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    if index.n == 0:
        raise EmptyCorpus("the index holds no images")
    stats = index.corpus_snapshot()
    qvec = weight_query(query, stopwords, stats, index.terms)
    scores = {}
    for rid in index.records:
        dvec = index.materialize_vector(rid, scheme, table, stats)
        scores[rid] = cosine_similarity(qvec, dvec)
    return rank(scores, k, suppress_zero)
