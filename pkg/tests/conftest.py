import http.server
import sys
import threading
from functools import partial
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracle_bruteforce as oracle  # noqa: E402

from hybrid_ir import color  # noqa: E402
from hybrid_ir.index import VectorIndex  # noqa: E402
from hybrid_ir.pipeline import index_documents  # noqa: E402
from hybrid_ir.text import load_stopwords  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def refset():
    return color.build_reference_set(oracle.REFSET)


@pytest.fixture
def corpus_index(refset, stopwords):
    index = VectorIndex()
    report = index_documents([str(p) for p in oracle.DOCUMENTS], index, refset, stopwords)
    assert len(report.added) == 6
    return index


@pytest.fixture
def input_list(tmp_path):
    path = tmp_path / "documents.txt"
    path.write_text("".join(f"{p}\n" for p in oracle.DOCUMENTS), encoding="utf-8")
    return path


@pytest.fixture
def refset_file(tmp_path, refset):
    path = tmp_path / "refset.tsv"
    color.save_reference_set(refset, path)
    return path


class _Handler(http.server.SimpleHTTPRequestHandler):
    """Static files from the corpus plus ``/redirect/<n>`` chains ending at canyon.html."""

    def do_GET(self):
        if self.path.startswith("/redirect/"):
            n = int(self.path.rsplit("/", 1)[1])
            target = "/docs/canyon.html" if n <= 1 else f"/redirect/{n - 1}"
            self.send_response(302)
            self.send_header("Location", target)
            self.end_headers()
            return
        super().do_GET()

    def log_message(self, *args):
        pass


@pytest.fixture(scope="session")
def http_base():
    handler = partial(_Handler, directory=str(FIXTURES / "corpus"))
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


# --- acceptance criterion summary ------------------------------------------

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "seen": False})
    if rep.when == "call":
        entry["seen"] = True
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}  {status}  {entry['title']}")
