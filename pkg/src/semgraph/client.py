"""SPARQL 1.1 protocol client and the query-driven import path.

Queries go out as GET url?query=... with the appropriate Accept header;
SELECT results come back as SPARQL Query Results JSON, CONSTRUCT results
as N-Triples.  Imports are all-or-nothing: triples land in a scratch copy
of the graph which replaces the original only on success.
"""

from __future__ import annotations

import concurrent.futures
import os
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import httpx

from .errors import (HttpError, LocalSyntaxError, ParseError, ProtocolError,
                     SemgraphError)
from .graph import SemanticGraph
from .mapping import ImportReport, import_triples, skolemize
from .rdf.ntriples import parse_ntriples
from .rdf.terms import Blank, Iri, Literal, Term, TripleSet
from .sparql.eval import Solution
from .sparql.parser import parse_query

RESULTS_JSON = "application/sparql-results+json"
NTRIPLES = "application/n-triples"


def _default_timeout_ms() -> int:
    return int(os.environ.get("SGW_HTTP_TIMEOUT_MS", "30000"))


@dataclass
class EndpointConfig:
    url: str
    timeout_ms: int = field(default_factory=_default_timeout_ms)
    retries: int = 2
    backoff_ms: int = 250

    def __post_init__(self):
        parsed = httpx.URL(self.url)
        if parsed.scheme not in ("http", "https"):
            raise ValueError(f"endpoint URL must be absolute http(s): {self.url!r}")
        if self.timeout_ms <= 0:
            raise ValueError("timeout must be > 0")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


@dataclass
class FederationEntry:
    endpoint: EndpointConfig
    query: str
    source: str


@dataclass
class FederationPlan:
    entries: List[FederationEntry]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("federation plan must be non-empty")
        tags = [e.source for e in self.entries]
        if len(set(tags)) != len(tags):
            raise ValueError("source tags must be unique within a plan")


@dataclass
class FederationResult:
    source: str
    report: Optional[ImportReport] = None
    error: Optional[str] = None


def _fetch(ep: EndpointConfig, query: str, accept: str) -> httpx.Response:
    last_exc: Optional[Exception] = None
    timeout = ep.timeout_ms / 1000.0
    for attempt in range(ep.retries + 1):
        if attempt:
            time.sleep(ep.backoff_ms / 1000.0 * (2 ** (attempt - 1)))
        try:
            resp = httpx.get(ep.url, params={"query": query},
                             headers={"Accept": accept}, timeout=timeout)
        except httpx.TimeoutException as e:
            last_exc = TimeoutError(f"{ep.url}: {e}")
            continue
        except httpx.HTTPError as e:
            last_exc = HttpError(0, f"{ep.url}: {e}")
            continue
        if 200 <= resp.status_code < 300:
            return resp
        last_exc = HttpError(resp.status_code, ep.url)
    raise last_exc


def _term_from_binding(b: dict) -> Term:
    kind = b.get("type")
    value = b.get("value")
    if not isinstance(value, str):
        raise ProtocolError(f"binding without string value: {b!r}")
    if kind == "uri":
        return Iri(value)
    if kind == "bnode":
        return Blank(value)
    if kind in ("literal", "typed-literal"):
        lang = b.get("xml:lang")
        return Literal(value, datatype=b.get("datatype"),
                       lang=lang.lower() if lang else None)
    raise ProtocolError(f"unknown binding type: {kind!r}")


def select_remote(ep: EndpointConfig, query: str) -> List[Solution]:
    try:
        ast = parse_query(query)
    except SemgraphError as e:
        raise LocalSyntaxError(str(e))
    if ast.form != "select":
        raise LocalSyntaxError("select_remote requires a SELECT query")
    resp = _fetch(ep, query, RESULTS_JSON)
    try:
        data = resp.json()
        bindings = data["results"]["bindings"]
        return [{var: _term_from_binding(b) for var, b in row.items()}
                for row in bindings]
    except ProtocolError:
        raise
    except Exception as e:
        raise ProtocolError(f"unparseable results JSON from {ep.url}: {e}")


def construct_remote(ep: EndpointConfig, query: str) -> TripleSet:
    try:
        ast = parse_query(query)
    except SemgraphError as e:
        raise LocalSyntaxError(str(e))
    if ast.form != "construct":
        raise LocalSyntaxError("construct_remote requires a CONSTRUCT query")
    resp = _fetch(ep, query, NTRIPLES)
    try:
        return parse_ntriples(resp.text)
    except ParseError as e:
        raise ParseError(f"malformed N-Triples from {ep.url}: {e.message}",
                         e.line, e.column)


def _swap_import(graph: SemanticGraph, ts: TripleSet, source: str) -> ImportReport:
    # import into a scratch copy; swap in only on success (all-or-nothing)
    scratch = graph.copy()
    report = import_triples(scratch, skolemize(ts, source), source)
    graph.__dict__.update(scratch.__dict__)
    return report


def import_from_endpoint(graph: SemanticGraph, ep: EndpointConfig,
                         query: str, source: str) -> ImportReport:
    ts = construct_remote(ep, query)
    return _swap_import(graph, ts, source)


def federated_import(graph: SemanticGraph, plan: FederationPlan,
                     parallelism: int = 4) -> List[FederationResult]:
    """Fetch all plan entries (concurrently), then import sequentially in
    plan order; a failing entry is recorded without aborting the others."""
    fetched: List[Union[TripleSet, Exception]] = [None] * len(plan.entries)

    def fetch(i: int):
        entry = plan.entries[i]
        try:
            fetched[i] = construct_remote(entry.endpoint, entry.query)
        except Exception as e:
            fetched[i] = e

    with concurrent.futures.ThreadPoolExecutor(max_workers=parallelism) as pool:
        list(pool.map(fetch, range(len(plan.entries))))

    results: List[FederationResult] = []
    for entry, data in zip(plan.entries, fetched):
        if isinstance(data, Exception):
            results.append(FederationResult(entry.source,
                                            error=f"{type(data).__name__}: {data}"))
            continue
        try:
            report = _swap_import(graph, data, entry.source)
            results.append(FederationResult(entry.source, report=report))
        except Exception as e:
            results.append(FederationResult(entry.source,
                                            error=f"{type(e).__name__}: {e}"))
    return results
