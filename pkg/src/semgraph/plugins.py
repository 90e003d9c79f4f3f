"""Built-in graph analysis, transformation, matching, and reduction plug-ins.

Every plug-in is graph-in/graph-out: the input graph is copied, never
mutated, so workflow steps can snapshot intermediate results.  All
tie-breaking is by smallest concept id for deterministic outputs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

from .errors import (NegativeDepth, UnknownClass, UnknownConcept,
                     UnknownPlugin, UnknownRelationType)
from .graph import EQU_RTYPE, SemanticGraph


@dataclass(frozen=True)
class PluginParam:
    name: str
    type: str  # string | int | bool | string-list
    required: bool = False
    default: object = None


@dataclass(frozen=True)
class PluginDescriptor:
    name: str
    kind: str  # filter | transformer | matcher | analysis
    params: Tuple[PluginParam, ...]


@dataclass
class PluginOutcome:
    graph: SemanticGraph
    metrics: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)


def _restrict(graph: SemanticGraph, keep_concepts: Set[int]) -> SemanticGraph:
    """Induced subgraph on keep_concepts; ids preserved."""
    g = graph.copy()
    for cid in list(g.concepts):
        if cid not in keep_concepts:
            del g.concepts[cid]
    for rid in list(g.relations):
        rel = g.relations[rid]
        if rel.from_id not in keep_concepts or rel.to_id not in keep_concepts:
            g.delete_relation(rid)
    for iri, cid in list(g.iri_index.items()):
        if cid not in keep_concepts:
            del g.iri_index[iri]
    return g


def filter_by_concept_class(graph: SemanticGraph, classes: List[str],
                            include_subclasses: bool = False) -> PluginOutcome:
    for c in classes:
        if c not in graph.classes:
            raise UnknownClass(f"unknown class: {c}")
    keep: Set[int] = set()
    for concept in graph.concepts.values():
        if include_subclasses:
            if any(graph.is_subclass_of(concept.class_id, c) for c in classes):
                keep.add(concept.id)
        elif concept.class_id in classes:
            keep.add(concept.id)
    g = _restrict(graph, keep)
    return PluginOutcome(g, metrics={"kept": len(keep),
                                     "removed": len(graph.concepts) - len(keep)})


def filter_by_relation_type(graph: SemanticGraph, rtypes: List[str]) -> PluginOutcome:
    for r in rtypes:
        if r not in graph.rtypes:
            raise UnknownRelationType(f"unknown relation type: {r}")
    g = graph.copy()
    removed = 0
    for rid in list(g.relations):
        if g.relations[rid].rtype not in rtypes:
            g.delete_relation(rid)
            removed += 1
    return PluginOutcome(g, metrics={"kept": len(g.relations), "removed": removed})


def _undirected_adjacency(graph: SemanticGraph) -> Dict[int, Set[int]]:
    adj: Dict[int, Set[int]] = {cid: set() for cid in graph.concepts}
    for rel in graph.relations.values():
        adj[rel.from_id].add(rel.to_id)
        adj[rel.to_id].add(rel.from_id)
    return adj


def neighborhood(graph: SemanticGraph, seeds: List[int], depth: int) -> PluginOutcome:
    if depth < 0:
        raise NegativeDepth(f"depth must be >= 0, got {depth}")
    for s in seeds:
        if s not in graph.concepts:
            raise UnknownConcept(f"unknown concept: {s}")
    adj = _undirected_adjacency(graph)
    dist: Dict[int, int] = {s: 0 for s in seeds}
    frontier = deque(seeds)
    while frontier:
        cur = frontier.popleft()
        if dist[cur] == depth:
            continue
        for nxt in adj[cur]:
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                frontier.append(nxt)
    g = _restrict(graph, set(dist))
    return PluginOutcome(g, metrics={"radius_used": depth, "kept": len(dist)})


def connected_components(graph: SemanticGraph) -> PluginOutcome:
    adj = _undirected_adjacency(graph)
    component: Dict[int, int] = {}
    k = 0
    for start in sorted(graph.concepts):
        if start in component:
            continue
        k += 1
        stack = [start]
        component[start] = k
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in component:
                    component[nxt] = k
                    stack.append(nxt)
    notes = [f"{cid}:{component[cid]}" for cid in sorted(component)]
    return PluginOutcome(graph.copy(), metrics={"components": k}, notes=notes)


def degree_stats(graph: SemanticGraph) -> PluginOutcome:
    degrees: Dict[int, int] = {cid: 0 for cid in graph.concepts}
    for rel in graph.relations.values():
        degrees[rel.from_id] += 1
        degrees[rel.to_id] += 1
    if degrees:
        values = list(degrees.values())
        metrics = {"min": float(min(values)), "max": float(max(values)),
                   "mean": sum(values) / len(values)}
    else:
        metrics = {"min": 0.0, "max": 0.0, "mean": 0.0}
    return PluginOutcome(graph.copy(), metrics=metrics)


def shortest_path(graph: SemanticGraph, a: int, b: int,
                  directed: bool = False) -> PluginOutcome:
    for cid in (a, b):
        if cid not in graph.concepts:
            raise UnknownConcept(f"unknown concept: {cid}")
    # distances measured toward b, so the path can be rebuilt from a by
    # greedily picking the smallest-id next hop
    back: Dict[int, Set[int]] = {cid: set() for cid in graph.concepts}
    fwd: Dict[int, Set[int]] = {cid: set() for cid in graph.concepts}
    for rel in graph.relations.values():
        fwd[rel.from_id].add(rel.to_id)
        back[rel.to_id].add(rel.from_id)
        if not directed:
            fwd[rel.to_id].add(rel.from_id)
            back[rel.from_id].add(rel.to_id)
    dist_to_b: Dict[int, int] = {b: 0}
    frontier = deque([b])
    while frontier:
        cur = frontier.popleft()
        for prev in back[cur]:
            if prev not in dist_to_b:
                dist_to_b[prev] = dist_to_b[cur] + 1
                frontier.append(prev)
    if a not in dist_to_b:
        return PluginOutcome(graph.copy(), metrics={"length": -1},
                             notes=["unreachable"])
    path = [a]
    cur = a
    while cur != b:
        cur = min(n for n in fwd[cur]
                  if dist_to_b.get(n, -1) == dist_to_b[cur] - 1)
        path.append(cur)
    return PluginOutcome(graph.copy(), metrics={"length": dist_to_b[a]},
                         notes=["path:" + "->".join(map(str, path))])


def accession_map(graph: SemanticGraph, require_same_class: bool = True) -> PluginOutcome:
    g = graph.copy()
    matches = 0
    ids = sorted(g.concepts)
    for i, c1 in enumerate(ids):
        for c2 in ids[i + 1:]:
            a, b = g.concepts[c1], g.concepts[c2]
            if a.sources & b.sources:
                continue
            if not (a.accessions & b.accessions):
                continue
            if require_same_class and a.class_id != b.class_id:
                continue
            if (c1, c2, EQU_RTYPE) in g._rel_index or \
                    (c2, c1, EQU_RTYPE) in g._rel_index:
                continue
            g.add_relation(c1, c2, EQU_RTYPE, "accession_map")
            matches += 1
    return PluginOutcome(g, metrics={"matches": matches})


def collapse_equivalences(graph: SemanticGraph) -> PluginOutcome:
    g = graph.copy()
    adj: Dict[int, Set[int]] = {cid: set() for cid in g.concepts}
    for rel in g.relations.values():
        if rel.rtype == EQU_RTYPE:
            adj[rel.from_id].add(rel.to_id)
            adj[rel.to_id].add(rel.from_id)
    collapsed = 0
    seen: Set[int] = set()
    for start in sorted(g.concepts):
        if start in seen or not adj[start]:
            continue
        members = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in members:
                    members.add(nxt)
                    stack.append(nxt)
        seen |= members
        keep = min(members)
        for drop in sorted(members - {keep}):
            g.merge_concepts(keep, drop)
            collapsed += 1
    return PluginOutcome(g, metrics={"collapsed": collapsed})


_SL = "string-list"

_REGISTRY: Dict[str, Tuple[PluginDescriptor, Callable]] = {}


def _register(desc: PluginDescriptor, fn: Callable):
    _REGISTRY[desc.name] = (desc, fn)


_register(PluginDescriptor("accession_map", "matcher", (
    PluginParam("require_same_class", "bool", default=True),)), accession_map)
_register(PluginDescriptor("collapse_equivalences", "transformer", ()),
          collapse_equivalences)
_register(PluginDescriptor("connected_components", "analysis", ()),
          connected_components)
_register(PluginDescriptor("degree_stats", "analysis", ()), degree_stats)
_register(PluginDescriptor("filter_by_concept_class", "filter", (
    PluginParam("classes", _SL, required=True),
    PluginParam("include_subclasses", "bool", default=False))),
    filter_by_concept_class)
_register(PluginDescriptor("filter_by_relation_type", "filter", (
    PluginParam("rtypes", _SL, required=True),)), filter_by_relation_type)
_register(PluginDescriptor("neighborhood", "filter", (
    PluginParam("seeds", _SL, required=True),
    PluginParam("depth", "int", required=True))), neighborhood)
_register(PluginDescriptor("shortest_path", "analysis", (
    PluginParam("a", "string", required=True),
    PluginParam("b", "string", required=True),
    PluginParam("directed", "bool", default=False))), shortest_path)


def registry_lookup(name: str) -> PluginDescriptor:
    if name not in _REGISTRY:
        raise UnknownPlugin(f"unknown plugin: {name}")
    return _REGISTRY[name][0]


def registry_list() -> List[PluginDescriptor]:
    return [_REGISTRY[name][0] for name in sorted(_REGISTRY)]


def _resolve_concept_ref(graph: SemanticGraph, ref: str) -> int:
    """Concept reference in string params: numeric id or IRI."""
    if ref.isdigit():
        return int(ref)
    if ref in graph.iri_index:
        return graph.iri_index[ref]
    raise UnknownConcept(f"unknown concept reference: {ref!r}")


def run_plugin(graph: SemanticGraph, name: str, params: Dict) -> PluginOutcome:
    """Invoke a plug-in by name with string-typed params coerced to the
    function's expectations (concept refs resolved via the IRI index)."""
    desc, fn = _REGISTRY.get(name, (None, None))
    if desc is None:
        raise UnknownPlugin(f"unknown plugin: {name}")
    kwargs = dict(params)
    if name == "neighborhood":
        kwargs["seeds"] = [_resolve_concept_ref(graph, str(s))
                           for s in kwargs.get("seeds", [])]
    if name == "shortest_path":
        for key in ("a", "b"):
            if key in kwargs:
                kwargs[key] = _resolve_concept_ref(graph, str(kwargs[key]))
    return fn(graph, **kwargs)
