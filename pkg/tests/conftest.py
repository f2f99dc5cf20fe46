from __future__ import annotations

import socket
import threading
import time

import pytest

from gene_atlas import api, corpus_gen, store
from gene_atlas.narrative import THEME_DIMENSIONS, Theme

FIXTURE_N = 100
FIXTURE_SEED = 7


@pytest.fixture(scope="session")
def fixture_corpus():
    return corpus_gen.generate_corpus(FIXTURE_N, FIXTURE_SEED)


@pytest.fixture(scope="session")
def fixture_records(fixture_corpus):
    return list(fixture_corpus.records.values())


@pytest.fixture(scope="session")
def festive_record(fixture_records):
    """A fixture record that supports the Festive theme."""
    for record in fixture_records:
        if record.middle_for(THEME_DIMENSIONS[Theme.Festive]) is not None:
            return record
    raise AssertionError("fixture corpus lacks a FestiveCeremonies record")


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def start_server(app, port: int):
    import uvicorn

    config = uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 15
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("server failed to start")
        time.sleep(0.02)
    return server, thread


@pytest.fixture(scope="session")
def served_api(tmp_path_factory, fixture_corpus):
    """A live HTTP service over the fixture corpus; yields (base_url, app)."""
    data_dir = tmp_path_factory.mktemp("served")
    store.save_corpus(fixture_corpus, str(data_dir / store.CORPUS_FILE))
    app = api.create_app(str(data_dir))
    port = free_port()
    server, thread = start_server(app, port)
    yield f"http://127.0.0.1:{port}", app
    server.should_exit = True
    thread.join(timeout=10)
    app.state.store.close()
