"""HTTP service: graph lifecycle, imports, plug-ins, workflows, exports,
and a local SPARQL-protocol endpoint.

Per-graph mutations are serialized by an exclusive non-blocking lock:
a mutation arriving while another is in flight gets 409, making the
single-writer contract observable.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from time import time
from typing import Dict

from fastapi import FastAPI, HTTPException, Request, Response

from ..errors import ParseError, SemgraphError
from ..graph import SemanticGraph
from ..mapping import export_graph, import_triples, skolemize
from ..rdf.ntriples import parse_ntriples, serialize_ntriples
from ..rdf.terms import Blank, Iri, Literal
from ..rdf.turtle import parse_turtle_subset
from ..sparql.eval import eval_construct, eval_select
from ..sparql.parser import parse_query
from ..sparql.store import TripleStore
from ..plugins import registry_list, run_plugin
from ..workflow import Step, WorkflowSpec, parse_workflow, run_workflow, validate_workflow
from .models import (ConceptDetail, GraphCreated, PluginInfo, PluginResult,
                     SparqlImportRequest, ViewClass, ViewEdge, ViewGraph,
                     ViewNode)


@dataclass
class GraphHandle:
    id: str
    graph: SemanticGraph
    created: float = field(default_factory=time)
    lock: threading.Lock = field(default_factory=threading.Lock)


def iri_tail(iri: str) -> str:
    for sep in ("#", "/"):
        if sep in iri:
            tail = iri.rsplit(sep, 1)[1]
            if tail:
                return tail
    return iri


def build_view(graph: SemanticGraph) -> ViewGraph:
    degrees = {cid: 0 for cid in graph.concepts}
    for rel in graph.relations.values():
        degrees[rel.from_id] += 1
        degrees[rel.to_id] += 1
    nodes = []
    class_counts: Dict[str, int] = {}
    for c in sorted(graph.concepts.values(), key=lambda c: c.id):
        label = c.name if c.name else (iri_tail(c.iri) if c.iri else f"concept:{c.id}")
        nodes.append(ViewNode(id=c.id, label=label, cls=c.class_id,
                              degree=degrees[c.id]))
        class_counts[c.class_id] = class_counts.get(c.class_id, 0) + 1
    edges = [ViewEdge(source=r.from_id, target=r.to_id, rtype=r.rtype)
             for r in sorted(graph.relations.values(), key=lambda r: r.id)]
    classes = [ViewClass(id=cid, label=graph.classes[cid].label, count=n)
               for cid, n in sorted(class_counts.items())]
    return ViewGraph(nodes=nodes, edges=edges, classes=classes)


def create_app() -> FastAPI:
    app = FastAPI(title="semgraph")
    graphs: Dict[str, GraphHandle] = {}
    state_lock = threading.Lock()
    counter = {"n": 0}
    sparql_store = TripleStore()
    sparql_store_lock = threading.Lock()

    def get_handle(graph_id: str) -> GraphHandle:
        handle = graphs.get(graph_id)
        if handle is None:
            raise HTTPException(404, f"unknown graph {graph_id!r}")
        return handle

    @contextmanager
    def mutation(handle: GraphHandle):
        if not handle.lock.acquire(blocking=False):
            raise HTTPException(409, f"graph {handle.id} has a mutation in flight")
        try:
            yield
        finally:
            handle.lock.release()

    @app.post("/graphs", status_code=201, response_model=GraphCreated)
    def create_graph():
        with state_lock:
            counter["n"] += 1
            gid = f"g{counter['n']}"
            graphs[gid] = GraphHandle(id=gid, graph=SemanticGraph())
        return GraphCreated(id=gid)

    @app.get("/graphs/{graph_id}/view", response_model=ViewGraph)
    def view_graph(graph_id: str):
        return build_view(get_handle(graph_id).graph)

    @app.get("/graphs/{graph_id}/concepts/{concept_id}", response_model=ConceptDetail)
    def concept_detail(graph_id: str, concept_id: int):
        graph = get_handle(graph_id).graph
        c = graph.concepts.get(concept_id)
        if c is None:
            raise HTTPException(404, f"unknown concept {concept_id}")
        degree = sum(1 for r in graph.relations.values()
                     if r.from_id == concept_id) + \
            sum(1 for r in graph.relations.values() if r.to_id == concept_id)
        return ConceptDetail(
            id=c.id, iri=c.iri, name=c.name, cls=c.class_id, degree=degree,
            accessions=sorted([a.namespace, a.value] for a in c.accessions),
            attributes=[{"name": a.name, "lexical": a.lexical,
                         "datatype": a.datatype, "lang": a.lang}
                        for a in sorted(c.attributes,
                                        key=lambda a: (a.name, a.lexical))],
            sources=sorted(c.sources))

    @app.post("/graphs/{graph_id}/import/rdf")
    async def import_rdf(graph_id: str, request: Request):
        handle = get_handle(graph_id)
        body = (await request.body()).decode("utf-8")
        ctype = request.headers.get("content-type", "").split(";")[0].strip()
        with mutation(handle):
            try:
                if ctype in ("text/turtle", "application/x-turtle"):
                    ts = parse_turtle_subset(body)
                else:
                    ts = parse_ntriples(body)
                ts = skolemize(ts, "upload")
                report = import_triples(handle.graph, ts, "upload")
            except ParseError as e:
                raise HTTPException(400, str(e))
        return report.to_dict()

    @app.post("/graphs/{graph_id}/import/sparql")
    def import_sparql(graph_id: str, req: SparqlImportRequest):
        from ..client import EndpointConfig, import_from_endpoint
        handle = get_handle(graph_id)
        with mutation(handle):
            try:
                ep = EndpointConfig(url=req.endpoint)
            except ValueError as e:
                raise HTTPException(400, str(e))
            try:
                report = import_from_endpoint(handle.graph, ep, req.query, req.source)
            except SemgraphError as e:
                raise HTTPException(502, f"{type(e).__name__}: {e}")
            except TimeoutError as e:
                raise HTTPException(504, str(e))
        return report.to_dict()

    @app.post("/graphs/{graph_id}/plugins/{name}", response_model=PluginResult)
    def apply_plugin(graph_id: str, name: str, params: Dict = None):
        handle = get_handle(graph_id)
        params = params or {}
        if name not in {d.name for d in registry_list()}:
            raise HTTPException(404, f"unknown plugin {name!r}")
        probe = WorkflowSpec(name="_", steps=[Step(op=name, params=dict(params))])
        violations = validate_workflow(probe)
        if violations:
            raise HTTPException(400, violations)
        with mutation(handle):
            try:
                outcome = run_plugin(handle.graph, name, probe.steps[0].params)
            except SemgraphError as e:
                raise HTTPException(400, [str(e)])
            handle.graph = outcome.graph
        return PluginResult(metrics=outcome.metrics, notes=outcome.notes)

    @app.post("/graphs/{graph_id}/workflow")
    def run_graph_workflow(graph_id: str, body: Dict):
        # sync endpoint: runs in the threadpool so import.sparql steps may
        # call back into this same server without blocking the event loop
        import json as _json
        handle = get_handle(graph_id)
        try:
            spec = parse_workflow(_json.dumps(body))
        except SemgraphError as e:
            raise HTTPException(400, [str(e)])
        violations = validate_workflow(spec)
        if violations:
            raise HTTPException(400, violations)
        with mutation(handle):
            graph, report = run_workflow(spec, handle.graph)
            handle.graph = graph
        return report.to_dict()

    @app.get("/graphs/{graph_id}/export.nt")
    def export_nt(graph_id: str):
        graph = get_handle(graph_id).graph
        return Response(serialize_ntriples(export_graph(graph)),
                        media_type=NTRIPLES_MEDIA)

    @app.get("/plugins")
    def list_plugins():
        return [PluginInfo(name=d.name, kind=d.kind,
                           params=[{"name": p.name, "type": p.type,
                                    "required": p.required, "default": p.default}
                                   for p in d.params])
                for d in registry_list()]

    # --- built-in SPARQL-protocol endpoint over a server-local store ---

    @app.post("/sparql/data")
    async def seed_sparql(request: Request):
        body = (await request.body()).decode("utf-8")
        try:
            ts = parse_ntriples(body)
        except ParseError as e:
            raise HTTPException(400, str(e))
        with sparql_store_lock:
            added = sum(sparql_store.insert(t) for t in ts)
        return {"inserted": added, "size": len(sparql_store)}

    @app.get("/sparql")
    def sparql_endpoint(query: str):
        try:
            ast = parse_query(query)
        except SemgraphError as e:
            raise HTTPException(400, str(e))
        if ast.form == "construct":
            ts = eval_construct(sparql_store, ast)
            return Response(serialize_ntriples(ts), media_type=NTRIPLES_MEDIA)
        sols = eval_select(sparql_store, ast)
        variables = ast.projection
        if variables is None:
            seen = []
            for pat in ast.where:
                for v in pat.variables():
                    if v not in seen:
                        seen.append(v)
            variables = seen
        bindings = []
        for sol in sols:
            row = {}
            for var, term in sol.items():
                if isinstance(term, Iri):
                    row[var] = {"type": "uri", "value": term.value}
                elif isinstance(term, Blank):
                    row[var] = {"type": "bnode", "value": term.label}
                else:
                    entry = {"type": "literal", "value": term.lexical}
                    if term.datatype is not None:
                        entry["datatype"] = term.datatype
                    if term.lang is not None:
                        entry["xml:lang"] = term.lang
                    row[var] = entry
            bindings.append(row)
        return Response(
            content=_results_json(variables, bindings),
            media_type="application/sparql-results+json")

    return app


NTRIPLES_MEDIA = "application/n-triples"


def _results_json(variables, bindings) -> str:
    import json
    return json.dumps({"head": {"vars": variables},
                       "results": {"bindings": bindings}})
