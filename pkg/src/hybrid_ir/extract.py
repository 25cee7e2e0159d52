"""Tolerant HTML parsing and location-tagged metadata extraction around images.

Only the structure that matters for extraction is modelled: ``p``, ``h1``-``h6``,
``img``, ``script``/``style`` and comments. Every other tag is a transparent
container. Tokenizing is delegated to :class:`html.parser.HTMLParser`; the
tree-building and recovery rules live here.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterable, Iterator
from urllib.parse import unquote, urlsplit

from .ingestion import RawDocument
from .text import filename_terms, tokenize

log = logging.getLogger(__name__)

VOID_TAGS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input", "keygen",
    "link", "meta", "param", "source", "track", "wbr",
})
RAW_TEXT_TAGS = frozenset({"script", "style"})
HEADINGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})
# opening one of these closes any still-open <p> or heading
BLOCK_BREAKERS = HEADINGS | {"p"}


class SourceLocation(enum.Enum):
    P = "p"
    H1 = "h1"
    H2 = "h2"
    ALT = "alt"
    FILENAME = "filename"
    CLASS_LABEL = "class_label"


@dataclass(eq=False)
class HtmlNode:
    kind: str  # "element" | "text" | "comment" | "root"
    tag: str = ""
    attributes: dict[str, str] = field(default_factory=dict)
    children: list[HtmlNode] = field(default_factory=list)
    position: int = 0
    text: str = ""
    parent: HtmlNode | None = field(default=None, repr=False)

    def iter(self) -> Iterator[HtmlNode]:
        """Pre-order traversal, i.e. document order."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def text_content(self) -> str:
        return " ".join(n.text for n in self.iter() if n.kind == "text")

    def is_element(self, tag: str) -> bool:
        return self.kind == "element" and self.tag == tag


@dataclass(frozen=True)
class ImageAnchor:
    src: str
    alt: str | None
    position: int


@dataclass
class LocatedTerms:
    terms: list[tuple[str, SourceLocation]] = field(default_factory=list)

    def extend(self, words: Iterable[str], location: SourceLocation) -> None:
        self.terms.extend((w, location) for w in words)

    def at(self, location: SourceLocation) -> list[str]:
        return [t for t, loc in self.terms if loc is location]

    def profile(self) -> dict[str, dict[SourceLocation, int]]:
        """Per-term, per-location occurrence counts (first-seen term order)."""
        out: dict[str, dict[SourceLocation, int]] = {}
        for term, loc in self.terms:
            counts = out.setdefault(term, {})
            counts[loc] = counts.get(loc, 0) + 1
        return out


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = HtmlNode("root")
        self.stack = [self.root]
        self.counter = 0
        self.in_raw_text = False

    def _new(self, **kw) -> HtmlNode:
        self.counter += 1
        parent = self.stack[-1]
        node = HtmlNode(position=self.counter, parent=parent, **kw)
        parent.children.append(node)
        return node

    def _close_through(self, tag: str) -> bool:
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return True
        return False

    def handle_starttag(self, tag, attrs):
        if self.in_raw_text:
            return
        if tag in BLOCK_BREAKERS:
            for i in range(len(self.stack) - 1, 0, -1):
                if self.stack[i].tag in BLOCK_BREAKERS:
                    del self.stack[i:]
                    break
        attributes = {}
        for name, value in attrs:
            attributes.setdefault(name, value if value is not None else "")
        node = self._new(kind="element", tag=tag, attributes=attributes)
        if tag in VOID_TAGS:
            return
        self.stack.append(node)
        if tag in RAW_TEXT_TAGS:
            self.in_raw_text = True

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag not in VOID_TAGS:
            self.in_raw_text = False
            self._close_through(tag)

    def handle_endtag(self, tag):
        if self.in_raw_text:
            if tag != self.stack[-1].tag:
                return
            self.in_raw_text = False
        self._close_through(tag)

    def handle_data(self, data):
        if self.in_raw_text or not data:
            return
        self._new(kind="text", text=data)

    def handle_comment(self, data):
        if not self.in_raw_text:
            self._new(kind="comment", text=data)


def parse_html(doc: RawDocument | bytes | str) -> HtmlNode:
    """Build a tree from HTML; never raises.

    Unclosed elements are closed when an ancestor closes or the input ends.
    """
    if isinstance(doc, RawDocument):
        doc = doc.bytes
    text = doc.decode("utf-8", errors="replace") if isinstance(doc, bytes) else doc
    builder = _TreeBuilder()
    try:
        builder.feed(text)
        builder.close()
    except Exception:  # pragma: no cover - stdlib tokenizer is lenient in practice
        log.warning("HTML tokenizer failed; treating document as plain text", exc_info=True)
        root = HtmlNode("root")
        root.children.append(HtmlNode("text", position=1, text=text, parent=root))
        return root
    return builder.root


def locate_images(root: HtmlNode) -> list[ImageAnchor]:
    anchors = []
    for node in root.iter():
        if node.is_element("img"):
            src = node.attributes.get("src", "").strip()
            if src:
                anchors.append(ImageAnchor(src, node.attributes.get("alt"), node.position))
    return anchors


def _find(root: HtmlNode, position: int) -> HtmlNode:
    for node in root.iter():
        if node.position == position and node.kind == "element":
            return node
    raise ValueError(f"no element at position {position}")


def associated_paragraph(root: HtmlNode, img: HtmlNode) -> HtmlNode | None:
    """Pick the single ``<p>`` whose text describes ``img``.

    Ancestor ``<p>`` first, then the nearest following sibling ``<p>``, then
    the nearest preceding ``<p>`` anywhere in the document.
    """
    node = img.parent
    while node is not None:
        if node.is_element("p"):
            return node
        node = node.parent
    if img.parent is not None:
        siblings = img.parent.children
        for sib in siblings[siblings.index(img) + 1:]:
            if sib.is_element("p"):
                return sib
    best = None
    for node in root.iter():
        if node.position >= img.position:
            break
        if node.is_element("p"):
            best = node
    return best


def preceding_element(root: HtmlNode, tag: str, position: int) -> HtmlNode | None:
    best = None
    for node in root.iter():
        if node.position >= position:
            break
        if node.is_element(tag):
            best = node
    return best


def extract_metadata(root: HtmlNode, anchor: ImageAnchor, stopwords: Iterable[str] = frozenset()) -> LocatedTerms:
    """Collect P, H1, H2, ALT and FILENAME terms for one image."""
    stop = frozenset(stopwords)
    img = _find(root, anchor.position)
    out = LocatedTerms()
    para = associated_paragraph(root, img)
    if para is not None:
        out.extend(tokenize(para.text_content(), stop), SourceLocation.P)
    for tag, loc in (("h1", SourceLocation.H1), ("h2", SourceLocation.H2)):
        header = preceding_element(root, tag, anchor.position)
        if header is not None:
            out.extend(tokenize(header.text_content(), stop), loc)
    if anchor.alt:
        out.extend(tokenize(anchor.alt, stop), SourceLocation.ALT)
    out.extend(filename_terms(src_filename(anchor.src), stop), SourceLocation.FILENAME)
    return out


def src_filename(src: str) -> str:
    """Last path segment of an ``img`` src, percent-decoded; "" if there is none."""
    return unquote(urlsplit(src.strip()).path).rsplit("/", 1)[-1]
