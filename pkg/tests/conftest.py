import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from compgraph.config import BUNDLED_FIXTURE_DIR, BUNDLED_KB_PATH, PipelineConfig
from compgraph.edgar_client import EdgarClient, _ref_from_index
from compgraph.itemizer import linearize
from compgraph.linker import load_kb
from compgraph.pipeline import run_pipeline


@pytest.fixture(scope="session")
def fixture_dir():
    return BUNDLED_FIXTURE_DIR


@pytest.fixture(scope="session")
def labels():
    return json.loads((BUNDLED_FIXTURE_DIR / "labels.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def kb():
    return load_kb(BUNDLED_KB_PATH)


@pytest.fixture(scope="session")
def corpus_client(tmp_path_factory):
    cache = tmp_path_factory.mktemp("edgar-cache")
    return EdgarClient(cache_dir=cache, local_dir=BUNDLED_FIXTURE_DIR)


@pytest.fixture(scope="session")
def corpus_docs(corpus_client, labels):
    """Linearized fixture filings keyed by accession number."""
    docs = {}
    for entry in labels["filings"]:
        ref = _ref_from_index(entry)
        docs[ref.accession_number] = linearize(corpus_client.fetch_filing(ref))
    return docs


@pytest.fixture(scope="session")
def pipeline_run(tmp_path_factory):
    """One full pipeline run over the fixture corpus, shared by tests."""
    out_dir = tmp_path_factory.mktemp("pipeline-out")
    config = PipelineConfig(
        input_mode="local_dir",
        local_dir=str(BUNDLED_FIXTURE_DIR),
        cache_dir=str(out_dir / "cache"),
        output_path=str(out_dir / "graph.json"),
        corpus_tag="sp-fixture-2020",
    )
    return run_pipeline(config)


@pytest.fixture(scope="session")
def labeled_edges(labels):
    return {(entry["filer_id"], target, 2020)
            for entry in labels["filings"] for target in entry["edges"]}


class _StubRecognizer(BaseHTTPRequestHandler):
    """Echoes back whatever mention list the test installed."""

    payload: dict = {"mentions": []}

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        self.rfile.read(length)
        data = json.dumps(self.payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_recognizer():
    """A live localhost recognizer endpoint with a settable payload."""
    server = HTTPServer(("127.0.0.1", 0), _StubRecognizer)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()

    class Handle:
        url = f"http://127.0.0.1:{server.server_port}/recognize"

        @staticmethod
        def set_mentions(mentions):
            _StubRecognizer.payload = {"mentions": mentions}

        @staticmethod
        def set_raw(payload):
            _StubRecognizer.payload = payload

    yield Handle
    server.shutdown()
    _StubRecognizer.payload = {"mentions": []}


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {name}: {status}")
