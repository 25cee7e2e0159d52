"""Fetch HTML documents and image bytes from local paths or http(s) URLs."""

from __future__ import annotations

import os
import posixpath
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import unquote, urljoin, urlsplit

from .errors import MalformedReference, NotFound, TooLarge, TransportError

DEFAULT_MAX_BYTES = 16 * 1024 * 1024
MAX_REDIRECTS = 5
HTTP_TIMEOUT = 30.0


@dataclass(frozen=True)
class RawDocument:
    source: str
    bytes: bytes
    declared_encoding: str | None = None


@dataclass(frozen=True)
class RawImage:
    source: str
    bytes: bytes
    filename: str


def is_url(ref: str) -> bool:
    return urlsplit(ref).scheme.lower() in ("http", "https")


class _LimitedRedirects(urllib.request.HTTPRedirectHandler):
    max_redirections = MAX_REDIRECTS


_opener = urllib.request.build_opener(_LimitedRedirects)


def _read_local(path: str, max_bytes: int) -> tuple[str, bytes]:
    p = Path(path).expanduser().absolute()
    try:
        size = p.stat().st_size
    except FileNotFoundError as exc:
        raise NotFound(str(p)) from exc
    if not p.is_file():
        raise NotFound(f"{p} is not a regular file")
    if size > max_bytes:
        raise TooLarge(f"{p}: {size} bytes exceeds cap of {max_bytes}")
    return str(p), p.read_bytes()


def _read_http(url: str, max_bytes: int) -> tuple[str, bytes, str | None]:
    request = urllib.request.Request(url, headers={"Accept": "*/*"})
    try:
        with _opener.open(request, timeout=HTTP_TIMEOUT) as resp:
            length = resp.headers.get("Content-Length")
            if length is not None and length.isdigit() and int(length) > max_bytes:
                raise TooLarge(f"{url}: {length} bytes exceeds cap of {max_bytes}")
            body = resp.read(max_bytes + 1)
            if len(body) > max_bytes:
                raise TooLarge(f"{url}: body exceeds cap of {max_bytes}")
            charset = resp.headers.get_content_charset()
            return resp.geturl(), body, charset
    except urllib.error.HTTPError as exc:
        if exc.code in (404, 410):
            raise NotFound(f"{url}: HTTP {exc.code}") from exc
        raise TransportError(f"{url}: HTTP {exc.code}") from exc
    except urllib.error.URLError as exc:
        raise TransportError(f"{url}: {exc.reason}") from exc
    except OSError as exc:
        raise TransportError(f"{url}: {exc}") from exc


def fetch_document(source: str, max_bytes: int = DEFAULT_MAX_BYTES) -> RawDocument:
    """Load an HTML document verbatim.

    Local paths are made absolute; URLs keep their final (post-redirect) form.
    """
    if is_url(source):
        final, body, charset = _read_http(source, max_bytes)
        return RawDocument(final, body, charset)
    path, body = _read_local(source, max_bytes)
    return RawDocument(path, body)


def resolve_reference(base: str, src: str) -> str:
    """Resolve ``src`` (as found in an ``img`` tag) against the document location."""
    src = src.strip()
    if not src:
        raise MalformedReference("empty image reference")
    if is_url(src):
        return src
    if is_url(base):
        return urljoin(base, src)
    parts = urlsplit(src)
    if parts.scheme == "file":
        return unquote(parts.path)
    # a reference in HTML is URL syntax even when the document is a local file
    src = unquote(parts.path) if not parts.scheme else src
    if not src:
        raise MalformedReference("image reference has no path")
    if src.startswith("/"):
        return posixpath.normpath(src)
    joined = os.path.join(os.path.dirname(base), *src.split("/"))
    return os.path.normpath(joined)


def filename_of(ref: str) -> str:
    """Last path segment of a path or URL, percent-decoded."""
    if is_url(ref):
        path = unquote(urlsplit(ref).path)
        segment = path.rsplit("/", 1)[-1]
    else:
        segment = "" if ref.endswith(("/", os.sep)) else os.path.basename(ref)
    if not segment or "/" in segment or os.sep in segment:
        raise MalformedReference(f"no filename segment in {ref!r}")
    return segment


def fetch_image(ref: str, max_bytes: int = DEFAULT_MAX_BYTES) -> RawImage:
    filename = filename_of(ref)
    if is_url(ref):
        final, body, _ = _read_http(ref, max_bytes)
        return RawImage(final, body, filename)
    path, body = _read_local(ref, max_bytes)
    return RawImage(path, body, filename)
