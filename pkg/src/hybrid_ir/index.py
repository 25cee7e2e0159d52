"""Persistent store of indexed images, term dictionary and corpus statistics.

Records keep raw per-location counts; weights are computed on demand so they
always reflect the current document frequencies.

On-disk layout (``v1``)::

    meta           "#hybrid-ir-index v1" then n
    terms.tsv      term-id <TAB> term
    df.tsv         term-id <TAB> df
    records.jsonl  one record per line, ordered by id
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping

from .color import ColorHistogram
from .errors import CorruptIndex, DuplicateId, UnknownRecord
from .extract import SourceLocation
from .weighting import DEFAULT_TABLE, CorpusStats, weigh

INDEX_MAGIC = "#hybrid-ir-index v1"

SparseVector = dict[int, float]
TermProfile = dict[str, dict[SourceLocation, int]]


@dataclass
class ImageRecord:
    id: int
    document_uri: str
    image_uri: str
    filename: str
    class_label: str
    histogram: ColorHistogram
    term_profile: TermProfile = field(default_factory=dict)


class TermDictionary:
    """Bijection between terms and dense ids, assigned in first-seen order."""

    def __init__(self, terms: list[str] | None = None):
        self._terms: list[str] = []
        self._ids: dict[str, int] = {}
        for t in terms or ():
            self.add(t)

    def add(self, term: str) -> int:
        tid = self._ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._terms.append(term)
            self._ids[term] = tid
        return tid

    def id_of(self, term: str) -> int | None:
        return self._ids.get(term)

    def term(self, tid: int) -> str:
        return self._terms[tid]

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[str]:
        return iter(self._terms)

    def __contains__(self, term: object) -> bool:
        return term in self._ids


def _clean_profile(profile: Mapping[str, Mapping[SourceLocation, int]]) -> TermProfile:
    out: TermProfile = {}
    for term, counts in profile.items():
        kept = {loc: int(c) for loc, c in counts.items() if c}
        if any(c < 0 for c in kept.values()):
            raise ValueError(f"negative count for term {term!r}")
        if kept:
            out[term] = kept
    return out


class VectorIndex:
    def __init__(self) -> None:
        self.records: dict[int, ImageRecord] = {}
        self.terms = TermDictionary()
        self._df: dict[int, int] = {}
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def next_id(self) -> int:
        return max(self.records, default=0) + 1

    def add_record(self, record: ImageRecord) -> None:
        with self._lock:
            if record.id in self.records:
                raise DuplicateId(record.id)
            profile = _clean_profile(record.term_profile)
            for term in profile:
                tid = self.terms.add(term)
                self._df[tid] = self._df.get(tid, 0) + 1
            # term-id order, so a loaded index iterates (and sums) identically
            record.term_profile = dict(sorted(profile.items(), key=lambda kv: self.terms.id_of(kv[0])))
            self.records[record.id] = record

    def df(self, term: str) -> int:
        tid = self.terms.id_of(term)
        return 0 if tid is None else self._df.get(tid, 0)

    def corpus_snapshot(self) -> CorpusStats:
        with self._lock:
            return CorpusStats.of(self.n, {self.terms.term(t): d for t, d in self._df.items()})

    def materialize_vector(self, record_id: int, scheme: str = "vtf-idf",
                           table: Mapping[SourceLocation, float] = DEFAULT_TABLE,
                           stats: CorpusStats | None = None) -> SparseVector:
        """Weights of one record's terms keyed by term id; zero weights are omitted.

        Pass ``stats`` to score many records against one consistent snapshot.
        """
        try:
            record = self.records[record_id]
        except KeyError:
            raise UnknownRecord(record_id) from None
        if stats is None and scheme not in ("boolean", "tf"):
            stats = self.corpus_snapshot()
        vec: SparseVector = {}
        for term, counts in record.term_profile.items():
            w = weigh(scheme, term, counts, stats, table)
            if w != 0:
                vec[self.terms.id_of(term)] = w
        return vec

    # --- persistence ---------------------------------------------------------

    def persist(self, directory: str | os.PathLike) -> None:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        with self._lock:
            _write(d / "meta", f"{INDEX_MAGIC}\n{self.n}\n")
            _write(d / "terms.tsv", "".join(f"{i}\t{t}\n" for i, t in enumerate(self.terms)))
            _write(d / "df.tsv", "".join(f"{i}\t{self._df.get(i, 0)}\n" for i in range(len(self.terms))))
            lines = [_record_json(r, self.terms) for _, r in sorted(self.records.items())]
            _write(d / "records.jsonl", "".join(line + "\n" for line in lines))

    @classmethod
    def load(cls, directory: str | os.PathLike) -> VectorIndex:
        d = Path(directory)
        if not d.is_dir():
            raise FileNotFoundError(f"index directory {d} does not exist")
        try:
            meta = (d / "meta").read_text(encoding="utf-8").splitlines()
        except FileNotFoundError:
            raise CorruptIndex(f"{d}: no meta file") from None
        if not meta or meta[0] != INDEX_MAGIC:
            raise CorruptIndex(f"{d}: bad magic/version line")
        try:
            n = int(meta[1])
            terms = [_split_tsv(line) for line in _lines(d / "terms.tsv")]
            df_rows = [_split_tsv(line) for line in _lines(d / "df.tsv")]
            raw_records = [json.loads(line) for line in _lines(d / "records.jsonl")]
        except (IndexError, ValueError, FileNotFoundError) as exc:
            raise CorruptIndex(f"{d}: {exc}") from exc

        index = cls()
        try:
            for expected, (tid, term) in enumerate(terms):
                if int(tid) != expected:
                    raise CorruptIndex(f"{d}: term ids are not dense")
                index.terms.add(term)
            if len(index.terms) != len(terms):
                raise CorruptIndex(f"{d}: duplicate terms in dictionary")
            for raw in raw_records:
                record = _record_from_json(raw, index.terms)
                if record.id in index.records:
                    raise CorruptIndex(f"{d}: duplicate record id {record.id}")
                index.records[record.id] = record
                for term in record.term_profile:
                    tid = index.terms.id_of(term)
                    index._df[tid] = index._df.get(tid, 0) + 1
            stored_df = {int(t): int(v) for t, v in df_rows}
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise CorruptIndex(f"{d}: bad record: {exc}") from exc
        if n != index.n or any(stored_df.get(t, 0) != v for t, v in index._df.items()):
            raise CorruptIndex(f"{d}: statistics disagree with records")
        return index


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _lines(path: Path) -> list[str]:
    return [line for line in path.read_text(encoding="utf-8").split("\n") if line]


def _split_tsv(line: str) -> tuple[str, str]:
    a, b = line.split("\t")
    return a, b


def _record_json(r: ImageRecord, terms: TermDictionary) -> str:
    profile = {}
    for term, counts in r.term_profile.items():
        profile[str(terms.id_of(term))] = {loc.name: counts[loc] for loc in SourceLocation if loc in counts}
    obj = {
        "id": r.id,
        "document_uri": r.document_uri,
        "image_uri": r.image_uri,
        "filename": r.filename,
        "class_label": r.class_label,
        "histogram": list(r.histogram.counts),
        "profile": profile,
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _record_from_json(raw: dict, terms: TermDictionary) -> ImageRecord:
    profile: TermProfile = {}
    for tid, counts in raw["profile"].items():
        profile[terms.term(int(tid))] = {SourceLocation[name]: int(c) for name, c in counts.items()}
    return ImageRecord(
        id=int(raw["id"]),
        document_uri=raw["document_uri"],
        image_uri=raw["image_uri"],
        filename=raw["filename"],
        class_label=raw["class_label"],
        histogram=ColorHistogram(tuple(int(c) for c in raw["histogram"])),
        term_profile=dict(sorted(_clean_profile(profile).items(), key=lambda kv: terms.id_of(kv[0]))),
    )
