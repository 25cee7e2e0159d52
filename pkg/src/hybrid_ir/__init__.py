"""Hybrid retrieval of web images by color histogram class and location-weighted text."""

from .color import (
    ClassificationResult,
    ColorHistogram,
    PixelBuffer,
    ReferenceSet,
    build_histogram,
    build_reference_set,
    classify,
    decode_ppm,
    euclidean_distance,
)
from .evaluation import precision, run_comparison
from .extract import SourceLocation, extract_metadata, locate_images, parse_html
from .index import ImageRecord, VectorIndex
from .query import cosine_similarity, search, weight_query
from .text import load_stopwords, tokenize
from .weighting import PRESETS, SCHEMES, CorpusStats, idf, tf_idf, vtf_idf, weigh

__all__ = [
    "ClassificationResult", "ColorHistogram", "CorpusStats", "ImageRecord", "PixelBuffer",
    "PRESETS", "ReferenceSet", "SCHEMES", "SourceLocation", "VectorIndex",
    "build_histogram", "build_reference_set", "classify", "cosine_similarity", "decode_ppm",
    "euclidean_distance", "extract_metadata", "idf", "load_stopwords", "locate_images",
    "parse_html", "precision", "run_comparison", "search", "tf_idf", "tokenize", "vtf_idf",
    "weigh", "weight_query",
]
