"""Declarative linear pipelines over importers, plug-ins, and exporters.

Workflow files are UTF-8 JSON (extension .wf.json):

    {"name": "...", "steps": [{"op": "...", "params": {...}}, ...]}

An op is a plug-in name, "import.rdf_file", "import.sparql", or
"export.ntriples".  ${ENV_NAME} in string params is substituted from the
environment at run time.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import JsonError, SchemaError, UnknownPlugin
from .graph import SemanticGraph
from .mapping import import_triples, skolemize
from .plugins import PluginParam, registry_lookup, run_plugin
from .rdf.ntriples import parse_ntriples, serialize_ntriples
from .rdf.turtle import parse_turtle_subset

_ENV_RE = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)\}")

# parameter schemas for the pseudo-ops handled by the engine itself
_PSEUDO_OPS: Dict[str, Tuple[PluginParam, ...]] = {
    "import.rdf_file": (
        PluginParam("path", "string", required=True),
        PluginParam("source", "string", default="file"),
        PluginParam("format", "string", default=""),
    ),
    "import.sparql": (
        PluginParam("endpoint", "string", required=True),
        PluginParam("query", "string", required=True),
        PluginParam("source", "string", required=True),
    ),
    "export.ntriples": (
        PluginParam("path", "string", required=True),
    ),
}


@dataclass
class Step:
    op: str
    params: Dict = field(default_factory=dict)


@dataclass
class WorkflowSpec:
    name: str
    steps: List[Step]


@dataclass
class StepReport:
    op: str
    status: str  # ok | failed | skipped
    duration_ms: float = 0.0
    metrics: Dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {"op": self.op, "status": self.status,
                "duration_ms": self.duration_ms, "metrics": self.metrics,
                "error": self.error}


@dataclass
class RunReport:
    steps: List[StepReport]
    concept_count: int = 0
    relation_count: int = 0

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps],
                "graph": {"concepts": self.concept_count,
                          "relations": self.relation_count}}


def parse_workflow(text: str) -> WorkflowSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise JsonError(str(e))
    if not isinstance(data, dict):
        raise SchemaError("workflow must be a JSON object")
    unknown = set(data) - {"name", "steps"}
    if unknown:
        raise SchemaError(f"unknown top-level keys: {sorted(unknown)}")
    if not isinstance(data.get("name"), str):
        raise SchemaError("workflow 'name' must be a string")
    steps_raw = data.get("steps")
    if not isinstance(steps_raw, list) or not steps_raw:
        raise SchemaError("'steps' must be a non-empty list")
    steps = []
    for i, s in enumerate(steps_raw):
        if not isinstance(s, dict) or not isinstance(s.get("op"), str):
            raise SchemaError(f"step {i}: must be an object with a string 'op'")
        params = s.get("params", {})
        if not isinstance(params, dict):
            raise SchemaError(f"step {i}: 'params' must be an object")
        unknown = set(s) - {"op", "params"}
        if unknown:
            raise SchemaError(f"step {i}: unknown keys {sorted(unknown)}")
        steps.append(Step(op=s["op"], params=dict(params)))
    return WorkflowSpec(name=data["name"], steps=steps)


def _type_ok(value, ptype: str) -> bool:
    if ptype == "string":
        return isinstance(value, str)
    if ptype == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if ptype == "bool":
        return isinstance(value, bool)
    if ptype == "string-list":
        return isinstance(value, list) and all(isinstance(v, str) for v in value)
    return False


def validate_workflow(spec: WorkflowSpec) -> List[str]:
    """Static checks only: op existence, param presence/types, defaults
    filled in place.  Returns violations; empty list means valid."""
    violations = []
    for i, step in enumerate(spec.steps):
        if step.op in _PSEUDO_OPS:
            schema = _PSEUDO_OPS[step.op]
        else:
            try:
                schema = registry_lookup(step.op).params
            except UnknownPlugin:
                violations.append(f"step {i}: unknown op {step.op!r}")
                continue
        names = {p.name for p in schema}
        for key in step.params:
            if key not in names:
                violations.append(f"step {i} ({step.op}): unknown param {key!r}")
        for p in schema:
            if p.name not in step.params:
                if p.required:
                    violations.append(
                        f"step {i} ({step.op}): missing required param {p.name!r}")
                elif p.default is not None:
                    step.params[p.name] = p.default
                continue
            if not _type_ok(step.params[p.name], p.type):
                violations.append(
                    f"step {i} ({step.op}): param {p.name!r} must be {p.type}")
        if step.op == "neighborhood" and isinstance(step.params.get("depth"), int) \
                and step.params["depth"] < 0:
            violations.append(f"step {i} (neighborhood): param 'depth' must be >= 0")
    return violations


def _substitute_env(value):
    if isinstance(value, str):
        def repl(m):
            name = m.group(1)
            if name not in os.environ:
                raise KeyError(f"environment variable {name} not set")
            return os.environ[name]
        return _ENV_RE.sub(repl, value)
    if isinstance(value, list):
        return [_substitute_env(v) for v in value]
    return value


def _run_step(graph: SemanticGraph, step: Step, report: StepReport) -> SemanticGraph:
    params = {k: _substitute_env(v) for k, v in step.params.items()}
    if step.op == "import.rdf_file":
        path = Path(params["path"])
        text = path.read_text(encoding="utf-8")
        fmt = params.get("format") or ("ttl" if path.suffix == ".ttl" else "nt")
        ts = parse_turtle_subset(text) if fmt == "ttl" else parse_ntriples(text)
        ts = skolemize(ts, params.get("source", "file"))
        imp = import_triples(graph, ts, params.get("source", "file"))
        report.metrics = {"triples_seen": imp.triples_seen,
                          "concepts_created": imp.concepts_created,
                          "relations_created": imp.relations_created}
        return graph
    if step.op == "import.sparql":
        from .client import EndpointConfig, import_from_endpoint
        ep = EndpointConfig(url=params["endpoint"])
        imp = import_from_endpoint(graph, ep, params["query"], params["source"])
        report.metrics = {"triples_seen": imp.triples_seen,
                          "concepts_created": imp.concepts_created,
                          "relations_created": imp.relations_created}
        return graph
    if step.op == "export.ntriples":
        from .mapping import export_graph
        text = serialize_ntriples(export_graph(graph))
        Path(params["path"]).write_text(text, encoding="utf-8")
        report.metrics = {"triples_written": text.count("\n")}
        return graph
    outcome = run_plugin(graph, step.op, params)
    report.metrics = dict(outcome.metrics)
    return outcome.graph


def run_workflow(spec: WorkflowSpec,
                 initial: Optional[SemanticGraph] = None
                 ) -> Tuple[SemanticGraph, RunReport]:
    """Execute steps in order; a failing step fails its report entry and
    the remaining steps are skipped.  Never raises."""
    violations = validate_workflow(spec)
    graph = initial if initial is not None else SemanticGraph()
    reports: List[StepReport] = []
    failed = bool(violations)
    for i, step in enumerate(spec.steps):
        rep = StepReport(op=step.op, status="skipped")
        if failed:
            if violations and not reports:
                rep.error = "; ".join(violations)
            reports.append(rep)
            continue
        start = time.monotonic()
        try:
            graph = _run_step(graph, step, rep)
            rep.status = "ok"
        except Exception as e:  # captured, not raised: report is the contract
            rep.status = "failed"
            rep.error = f"{type(e).__name__}: {e}"
            failed = True
        rep.duration_ms = (time.monotonic() - start) * 1000.0
        reports.append(rep)
    return graph, RunReport(steps=reports,
                            concept_count=len(graph.concepts),
                            relation_count=len(graph.relations))
