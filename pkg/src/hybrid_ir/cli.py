"""``hybrid-ir`` command line: build-reference, index, search, classify, eval.

TSV results go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 the command could not fulfil its contract on valid input (empty reference
set, nothing indexed, empty index, undecodable image, malformed judgments),
2 usage or I/O problems (missing/corrupt index, unreadable or unwritable files).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import color
from .errors import CorruptIndex, EmptyCorpus, EmptyReferenceSet, HybridIRError, ImageDecodeError
from .evaluation import load_judgments, run_comparison
from .index import VectorIndex
from .pipeline import index_documents
from .query import search
from .text import load_stopwords
from .weighting import PRESETS, SCHEMES, load_weight_table

log = logging.getLogger("hybrid_ir")

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


def data_root() -> Path:
    return Path(os.environ.get("HYBRID_IR_HOME") or Path.home() / ".hybrid_ir")


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--index-dir", type=Path, help="index directory (default: $HYBRID_IR_HOME/index)")
    p.add_argument("--refset", type=Path, help="reference set file (default: $HYBRID_IR_HOME/refset.tsv)")
    p.add_argument("--stopwords", type=Path, help="stop-word file (default: bundled English list)")
    p.add_argument("--weights", default="paper-multiplicative",
                   help=f"location weight preset ({'|'.join(PRESETS)}) or a location<TAB>multiplier file")
    p.add_argument("--scheme", default="vtf-idf", choices=SCHEMES)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(prog="hybrid-ir", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-reference", parents=[shared], help="histogram a labelled image tree")
    p.add_argument("images_root", type=Path)
    p.add_argument("--out", type=Path, help="output file (default: --refset)")

    p = sub.add_parser("index", parents=[shared], help="index the images of listed documents")
    p.add_argument("input_list", type=Path, help="text file with one document path or URL per line")
    p.add_argument("--normalize", action="store_true", help="compare histograms as fractions of pixel count")

    p = sub.add_parser("search", parents=[shared], help="rank indexed images for a text query")
    p.add_argument("query")
    p.add_argument("--all", dest="suppress_zero", action="store_false",
                   help="keep zero-score results up to k")

    p = sub.add_parser("classify", parents=[shared], help="label one image against the reference set")
    p.add_argument("image", nargs="?", type=Path)
    p.add_argument("--stub-distances", type=Path,
                   help="label<TAB>average-distance file used instead of computing distances")
    p.add_argument("--normalize", action="store_true")

    p = sub.add_parser("eval", parents=[shared], help="precision at k for several schemes")
    p.add_argument("judgments", type=Path, help="query<TAB>comma-separated record ids per line")
    p.add_argument("--schemes", default="tf-idf,vtf-idf", help="comma-separated scheme names")
    p.add_argument("--exhaustive", action="store_true", help="judgments list every relevant id; report recall too")
    return parser


def _index_dir(args) -> Path:
    return args.index_dir or data_root() / "index"


def _refset_path(args) -> Path:
    return args.refset or data_root() / "refset.tsv"


def _stopwords(args):
    return load_stopwords(args.stopwords)


def _emit(*fields) -> None:
    print("\t".join(str(f) for f in fields))


def cmd_build_reference(args) -> int:
    try:
        refs = color.build_reference_set(args.images_root, workers=args.workers)
    except EmptyReferenceSet as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    out = args.out or _refset_path(args)
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        color.save_reference_set(refs, out)
    except OSError as exc:
        log.error("cannot write %s: %s", out, exc)
        return EXIT_IO
    _emit("classes", len(refs.classes))
    for label, members in refs.classes.items():
        _emit(label, len(members))
    if refs.skipped:
        log.warning("%d file(s) could not be decoded and were skipped", len(refs.skipped))
    return EXIT_OK


def cmd_index(args) -> int:
    try:
        sources = [line.strip() for line in args.input_list.read_text(encoding="utf-8").splitlines()]
        sources = [s for s in sources if s and not s.startswith("#")]
        refs = color.load_reference_set(_refset_path(args))
        stop = _stopwords(args)
    except (OSError, ValueError, EmptyReferenceSet) as exc:
        log.error("%s", exc)
        return EXIT_IO
    index_dir = _index_dir(args)
    try:
        index = VectorIndex.load(index_dir) if (index_dir / "meta").exists() else VectorIndex()
    except (OSError, CorruptIndex) as exc:
        log.error("cannot open index: %s", exc)
        return EXIT_IO
    report = index_documents(sources, index, refs, stop, workers=args.workers, normalize=args.normalize)
    for record in report.added:
        _emit(record.id, record.filename, record.class_label)
    log.info("%d document(s) read, %d failed; %d image(s) indexed, %d failed",
             report.documents, len(report.failed_documents), len(report.added), len(report.failed_images))
    if not report.added:
        log.error("no images were indexed")
        return EXIT_FAIL
    try:
        index.persist(index_dir)
    except OSError as exc:
        log.error("cannot write index: %s", exc)
        return EXIT_IO
    return EXIT_OK


def _open_index(args) -> VectorIndex | None:
    try:
        return VectorIndex.load(_index_dir(args))
    except (OSError, CorruptIndex) as exc:
        log.error("cannot open index: %s", exc)
        return None


def cmd_search(args) -> int:
    index = _open_index(args)
    if index is None:
        return EXIT_IO
    try:
        table = load_weight_table(args.weights)
        stop = _stopwords(args)
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    try:
        results = search(index, args.query, args.k, args.scheme, table, stop, args.suppress_zero)
    except EmptyCorpus as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    for r in results:
        record = index.records[r.record_id]
        _emit(r.rank, f"{r.score:.6f}", record.image_uri, record.class_label)
    return EXIT_OK


def _read_stub(path: Path) -> dict[str, float]:
    averages = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            label, value = line.split("\t")
            averages[label.strip()] = float(value)
    return averages


def cmd_classify(args) -> int:
    try:
        if args.stub_distances is not None:
            averages = _read_stub(args.stub_distances)
            label = color.choose_label(averages)
        else:
            if args.image is None:
                log.error("an image path is required unless --stub-distances is given")
                return EXIT_IO
            refs = color.load_reference_set(_refset_path(args))
            try:
                hist = color.build_histogram(color.decode_image(args.image.read_bytes()))
            except (ImageDecodeError, OSError) as exc:
                log.error("cannot decode %s: %s", args.image, exc)
                return EXIT_FAIL
            result = color.classify(hist, refs, normalize=args.normalize)
            averages, label = result.average_distances, result.label
    except EmptyReferenceSet as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    for name, value in averages.items():
        _emit("distance", name, f"{value:.2f}")
    _emit("label", label)
    return EXIT_OK


def cmd_eval(args) -> int:
    index = _open_index(args)
    if index is None:
        return EXIT_IO
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    bad = [s for s in schemes if s not in SCHEMES]
    if bad or not schemes:
        log.error("unknown scheme(s): %s", ", ".join(bad) or "(none given)")
        return EXIT_IO
    try:
        table = load_weight_table(args.weights)
        stop = _stopwords(args)
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_IO
    try:
        judgments = load_judgments(args.judgments)
        report = run_comparison(index, judgments, schemes, args.k, table, stop, args.exhaustive)
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("malformed judgments: %s", exc)
        return EXIT_FAIL
    except EmptyCorpus as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    sys.stdout.write(report.to_tsv())
    return EXIT_OK


COMMANDS = {
    "build-reference": cmd_build_reference,
    "index": cmd_index,
    "search": cmd_search,
    "classify": cmd_classify,
    "eval": cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.k < 1 or args.workers < 1:
        log.error("--k and --workers must be positive")
        return EXIT_IO
    try:
        return COMMANDS[args.command](args)
    except HybridIRError as exc:
        log.error("%s", exc)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
