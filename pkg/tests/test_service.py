import json
import threading

import httpx
import pytest
from fastapi.testclient import TestClient

from semgraph.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


def make_graph(client):
    return client.post("/graphs").json()["id"]


NT = "<http://ex/a> <http://ex/interacts> <http://ex/b> .\n"


class TestGraphLifecycle:
    def test_create_graph_first_id(self, client):
        resp = client.post("/graphs")
        assert resp.status_code == 201
        assert resp.json() == {"id": "g1"}
        assert client.post("/graphs").json() == {"id": "g2"}

    def test_unknown_graph_404(self, client):
        assert client.get("/graphs/nope/view").status_code == 404

    def test_view_after_import(self, client):
        gid = make_graph(client)
        resp = client.post(f"/graphs/{gid}/import/rdf", content=NT,
                           headers={"Content-Type": "application/n-triples"})
        assert resp.status_code == 200
        assert resp.json()["concepts_created"] == 2
        view = client.get(f"/graphs/{gid}/view").json()
        assert {n["label"] for n in view["nodes"]} == {"a", "b"}
        assert view["edges"] == [{"source": 1, "target": 2,
                                  "rtype": "http://ex/interacts"}]
        assert view["classes"][0]["count"] == 2
        assert all(n["class"] == "Thing" for n in view["nodes"])

    def test_turtle_content_type(self, client):
        gid = make_graph(client)
        ttl = "@prefix ex: <http://ex/> . ex:a ex:p ex:b ."
        resp = client.post(f"/graphs/{gid}/import/rdf", content=ttl,
                           headers={"Content-Type": "text/turtle"})
        assert resp.status_code == 200
        assert resp.json()["concepts_created"] == 2

    def test_malformed_rdf_400(self, client):
        gid = make_graph(client)
        resp = client.post(f"/graphs/{gid}/import/rdf", content="garbage",
                           headers={"Content-Type": "application/n-triples"})
        assert resp.status_code == 400

    def test_concept_detail(self, client):
        gid = make_graph(client)
        client.post(f"/graphs/{gid}/import/rdf", content=NT,
                    headers={"Content-Type": "application/n-triples"})
        detail = client.get(f"/graphs/{gid}/concepts/1").json()
        assert detail["iri"] == "http://ex/a"
        assert detail["degree"] == 1
        assert client.get(f"/graphs/{gid}/concepts/99").status_code == 404


class TestPluginRoutes:
    def test_list_plugins(self, client):
        names = [p["name"] for p in client.get("/plugins").json()]
        assert "neighborhood" in names and len(names) == 8

    def test_unknown_plugin_404(self, client):
        gid = make_graph(client)
        assert client.post(f"/graphs/{gid}/plugins/nope", json={}).status_code == 404

    def test_bad_params_400_names_key(self, client):
        gid = make_graph(client)
        resp = client.post(f"/graphs/{gid}/plugins/neighborhood",
                           json={"seeds": [], "depth": -1})
        assert resp.status_code == 400
        assert "depth" in json.dumps(resp.json()["detail"])

    def test_plugin_replaces_graph(self, client):
        gid = make_graph(client)
        client.post(f"/graphs/{gid}/import/rdf", content=NT,
                    headers={"Content-Type": "application/n-triples"})
        resp = client.post(f"/graphs/{gid}/plugins/filter_by_concept_class",
                           json={"classes": []})
        assert resp.status_code == 200
        assert client.get(f"/graphs/{gid}/view").json()["nodes"] == []

    def test_metrics_and_notes_returned(self, client):
        gid = make_graph(client)
        client.post(f"/graphs/{gid}/import/rdf", content=NT,
                    headers={"Content-Type": "application/n-triples"})
        out = client.post(f"/graphs/{gid}/plugins/connected_components",
                          json={}).json()
        assert out["metrics"] == {"components": 1}
        assert out["notes"] == ["1:1", "2:1"]


class TestWorkflowRoute:
    def test_run_workflow(self, client, tmp_path):
        gid = make_graph(client)
        client.post(f"/graphs/{gid}/import/rdf", content=NT,
                    headers={"Content-Type": "application/n-triples"})
        body = {"name": "w", "steps": [{"op": "degree_stats", "params": {}}]}
        resp = client.post(f"/graphs/{gid}/workflow", json=body)
        assert resp.status_code == 200
        assert resp.json()["steps"][0]["status"] == "ok"

    def test_invalid_workflow_400(self, client):
        gid = make_graph(client)
        body = {"name": "w", "steps": [{"op": "nope", "params": {}}]}
        resp = client.post(f"/graphs/{gid}/workflow", json=body)
        assert resp.status_code == 400
        assert "step 0" in json.dumps(resp.json()["detail"])


class TestExport:
    def test_export_byte_stable(self, client):
        gid = make_graph(client)
        client.post(f"/graphs/{gid}/import/rdf", content=NT,
                    headers={"Content-Type": "application/n-triples"})
        a = client.get(f"/graphs/{gid}/export.nt")
        b = client.get(f"/graphs/{gid}/export.nt")
        assert a.status_code == 200
        assert a.content == b.content
        assert a.content.decode() == NT


class TestSparqlEndpoint:
    def test_seed_and_select(self, client):
        resp = client.post("/sparql/data", content=NT)
        assert resp.json()["inserted"] == 1
        resp = client.get("/sparql",
                          params={"query": "SELECT * WHERE { ?s ?p ?o }"})
        assert resp.status_code == 200
        data = resp.json()
        assert len(data["results"]["bindings"]) == 1
        binding = data["results"]["bindings"][0]
        assert binding["s"] == {"type": "uri", "value": "http://ex/a"}

    def test_construct_returns_ntriples(self, client):
        client.post("/sparql/data", content=NT)
        resp = client.get("/sparql", params={
            "query": "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }"})
        assert resp.headers["content-type"].startswith("application/n-triples")
        assert resp.text == NT

    def test_bad_query_400(self, client):
        assert client.get("/sparql", params={"query": "SELECT"}).status_code == 400

    def test_served_results_match_inprocess(self, client):
        import random

        from semgraph.rdf.ntriples import serialize_ntriples
        from semgraph.sparql.eval import eval_select
        from semgraph.sparql.parser import parse_query
        from semgraph.sparql.store import TripleStore

        from conftest import random_tripleset
        rng = random.Random(17)
        ts = {t for t in random_tripleset(rng, 30)}
        client.post("/sparql/data", content=serialize_ntriples(ts))
        query = "SELECT ?s ?p ?o WHERE { ?s ?p ?o } ORDER BY ?s"
        http_rows = client.get("/sparql", params={"query": query}).json()
        local = eval_select(TripleStore(ts), parse_query(query))

        def term_json(t):
            from semgraph.rdf.terms import Blank, Iri
            if isinstance(t, Iri):
                return {"type": "uri", "value": t.value}
            if isinstance(t, Blank):
                return {"type": "bnode", "value": t.label}
            d = {"type": "literal", "value": t.lexical}
            if t.datatype:
                d["datatype"] = t.datatype
            if t.lang:
                d["xml:lang"] = t.lang
            return d

        expected = [{k: term_json(v) for k, v in sol.items()} for sol in local]
        assert sorted(http_rows["results"]["bindings"], key=json.dumps) == \
            sorted(expected, key=json.dumps)


class TestMutationConcurrency:
    def test_409_when_mutation_in_flight(self, live_server):
        gid = httpx.post(f"{live_server.url}/graphs").json()["id"]
        httpx.post(f"{live_server.url}/graphs/{gid}/import/rdf", content=NT,
                   headers={"Content-Type": "application/n-triples"})
        # a workflow step stalls on a slow import.sparql fetch while a
        # second mutation arrives
        release = threading.Event()
        entered = threading.Event()

        from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

        class SlowHandler(BaseHTTPRequestHandler):
            def do_GET(self):
                entered.set()
                release.wait(timeout=10)
                self.send_response(200)
                self.end_headers()
                self.wfile.write(b"")

            def log_message(self, *args):
                pass

        slow = ThreadingHTTPServer(("127.0.0.1", 0), SlowHandler)
        slow_thread = threading.Thread(target=slow.serve_forever, daemon=True)
        slow_thread.start()
        try:
            body = {"name": "w", "steps": [{"op": "import.sparql", "params": {
                "endpoint": f"http://127.0.0.1:{slow.server_port}",
                "query": "CONSTRUCT { ?s ?p ?o } WHERE { ?s ?p ?o }",
                "source": "slow"}}]}
            codes = []

            def run_wf():
                codes.append(httpx.post(
                    f"{live_server.url}/graphs/{gid}/workflow",
                    json=body, timeout=30).status_code)

            t = threading.Thread(target=run_wf)
            t.start()
            assert entered.wait(timeout=10)
            conflicting = httpx.post(
                f"{live_server.url}/graphs/{gid}/plugins/degree_stats",
                json={}, timeout=10)
            assert conflicting.status_code == 409
            release.set()
            t.join(timeout=30)
            assert codes == [200]
        finally:
            slow.shutdown()
