import random
import socket
import threading

import pytest
import uvicorn

from semgraph.graph import SemanticGraph
from semgraph.rdf.terms import Blank, Iri, Literal, Triple, XSD_DECIMAL, XSD_INTEGER

# --- randomized data generators (seeded by callers for reproducibility) ---

UNICODE_POOL = "abcXYZ0189 _-\u00e9\u00fc\u4e16\u754c\u2603\t\n\r\"\\'\u0001"


def random_lexical(rng: random.Random, maxlen: int = 12) -> str:
    return "".join(rng.choice(UNICODE_POOL) for _ in range(rng.randint(0, maxlen)))


def random_iri(rng: random.Random, pool: int = 20) -> Iri:
    return Iri(f"http://ex.org/r{rng.randrange(pool)}")


def random_literal(rng: random.Random) -> Literal:
    roll = rng.random()
    if roll < 0.5:
        return Literal(random_lexical(rng))
    if roll < 0.7:
        return Literal(str(rng.randint(-50, 50)), datatype=XSD_INTEGER)
    if roll < 0.8:
        return Literal(f"{rng.uniform(-5, 5):.2f}", datatype=XSD_DECIMAL)
    if roll < 0.9:
        return Literal(random_lexical(rng), datatype=f"http://ex.org/dt{rng.randrange(3)}")
    return Literal(random_lexical(rng), lang=rng.choice(["en", "de", "en-gb"]))


def random_term(rng: random.Random, kinds=("iri", "literal", "blank")):
    kind = rng.choice(kinds)
    if kind == "iri":
        return random_iri(rng)
    if kind == "blank":
        return Blank(f"b{rng.randrange(6)}")
    return random_literal(rng)


def random_triple(rng: random.Random) -> Triple:
    return Triple(random_term(rng, ("iri", "blank")),
                  random_iri(rng, pool=8),
                  random_term(rng))


def random_tripleset(rng: random.Random, max_triples: int = 100):
    return {random_triple(rng) for _ in range(rng.randint(0, max_triples))}


def random_graph(rng: random.Random, max_nodes: int = 30,
                 max_edges: int = 40) -> SemanticGraph:
    g = SemanticGraph()
    g.register_rtype("http://ex.org/p")
    g.register_rtype("http://ex.org/q")
    n = rng.randint(1, max_nodes)
    ids = [g.create_concept(f"http://ex.org/n{i}", "Thing", "gen")
           for i in range(n)]
    for _ in range(rng.randint(0, max_edges)):
        a, b = rng.choice(ids), rng.choice(ids)
        g.add_relation(a, b, rng.choice(["http://ex.org/p", "http://ex.org/q"]), "gen")
    return g


# --- live HTTP server ---

class LiveServer:
    def __init__(self, app):
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind(("127.0.0.1", 0))
        sock.listen(128)
        self.port = sock.getsockname()[1]
        self.url = f"http://127.0.0.1:{self.port}"
        config = uvicorn.Config(app, log_level="warning")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run,
                                       kwargs={"sockets": [sock]}, daemon=True)

    def start(self):
        self.thread.start()
        import time
        for _ in range(200):
            if self.server.started:
                return self
            time.sleep(0.02)
        raise RuntimeError("server did not start")

    def stop(self):
        self.server.should_exit = True
        self.thread.join(timeout=5)


@pytest.fixture
def live_server():
    from semgraph.service import create_app
    srv = LiveServer(create_app()).start()
    yield srv
    srv.stop()
