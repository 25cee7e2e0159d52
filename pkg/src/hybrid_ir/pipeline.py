"""End-to-end indexing: document -> images -> histogram/label -> metadata -> record."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .color import ReferenceSet, build_histogram, classify, decode_image
from .errors import HybridIRError
from .extract import SourceLocation, extract_metadata, locate_images, parse_html
from .index import ImageRecord, VectorIndex
from .ingestion import fetch_document, fetch_image, resolve_reference
from .text import tokenize

log = logging.getLogger(__name__)


@dataclass
class IndexingReport:
    added: list[ImageRecord] = field(default_factory=list)
    documents: int = 0
    failed_documents: list[str] = field(default_factory=list)
    failed_images: list[str] = field(default_factory=list)


def class_label_terms(label: str, stopwords: Iterable[str] = frozenset()) -> dict[str, dict[SourceLocation, int]]:
    """The label contributes each of its terms exactly once."""
    return {t: {SourceLocation.CLASS_LABEL: 1} for t in dict.fromkeys(tokenize(label, stopwords))}


def _process_document(source: str, refs: ReferenceSet, stopwords: frozenset[str],
                      normalize: bool) -> tuple[list[ImageRecord], list[str]]:
    doc = fetch_document(source)
    root = parse_html(doc)
    records, failures = [], []
    for anchor in locate_images(root):
        try:
            ref = resolve_reference(doc.source, anchor.src)
            image = fetch_image(ref)
            hist = build_histogram(decode_image(image.bytes))
        except HybridIRError as exc:
            log.warning("skipping image %r in %s: %s", anchor.src, doc.source, exc)
            failures.append(f"{doc.source}: {anchor.src}")
            continue
        label = classify(hist, refs, normalize=normalize).label
        profile = extract_metadata(root, anchor, stopwords).profile()
        for term, counts in class_label_terms(label, stopwords).items():
            profile.setdefault(term, {}).update(counts)
        records.append(ImageRecord(
            id=0, document_uri=doc.source, image_uri=image.source, filename=image.filename,
            class_label=label, histogram=hist, term_profile=profile,
        ))
    return records, failures


def index_documents(sources: Sequence[str], index: VectorIndex, refs: ReferenceSet,
                    stopwords: Iterable[str] = frozenset(), workers: int = 1,
                    normalize: bool = False) -> IndexingReport:
    """Index every image of every document; ids follow input order.

    Unreachable documents and undecodable images are logged and skipped.
    """
    stop = frozenset(stopwords)
    report = IndexingReport()

    def job(source: str):
        try:
            return _process_document(source, refs, stop, normalize)
        except HybridIRError as exc:
            log.warning("skipping document %s: %s", source, exc)
            return None

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        outcomes = list(pool.map(job, sources))
    for source, outcome in zip(sources, outcomes):
        if outcome is None:
            report.failed_documents.append(source)
            continue
        report.documents += 1
        records, failures = outcome
        report.failed_images.extend(failures)
        for record in records:
            record.id = index.next_id()
            index.add_record(record)
            report.added.append(record)
    return report
