"""Ontology-annotated property graph: concepts, relations, class hierarchies.

A SemanticGraph is a single-writer value: callers may share it between
concurrent readers, but mutations must be externally serialized (the HTTP
layer enforces one exclusive mutation at a time per graph).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .errors import (DanglingEndpoint, SelfMerge, UnknownClass,
                     UnknownConcept, UnknownRelationType)

THING_CLASS = "Thing"
EQU_RTYPE = "equ"


@dataclass
class ConceptClass:
    id: str
    label: str
    parent: Optional[str] = None


@dataclass
class RelationType:
    id: str
    label: str
    parent: Optional[str] = None


@dataclass(frozen=True)
class Accession:
    namespace: str
    value: str

    def __post_init__(self):
        if not self.namespace or not self.value:
            raise ValueError("accession namespace and value must be non-empty")


@dataclass(frozen=True)
class AttributeValue:
    name: str
    lexical: str
    datatype: Optional[str] = None
    lang: Optional[str] = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("attribute name must be non-empty")
        if self.datatype is not None and self.lang is not None:
            raise ValueError("attribute cannot carry both datatype and language tag")


@dataclass
class Concept:
    id: int
    class_id: str
    iri: Optional[str] = None
    name: Optional[str] = None
    accessions: Set[Accession] = field(default_factory=set)
    attributes: Set[AttributeValue] = field(default_factory=set)
    sources: Set[str] = field(default_factory=set)


@dataclass
class Relation:
    id: int
    from_id: int
    to_id: int
    rtype: str
    attributes: Set[AttributeValue] = field(default_factory=set)
    sources: Set[str] = field(default_factory=set)


class SemanticGraph:
    def __init__(self):
        self.concepts: Dict[int, Concept] = {}
        self.relations: Dict[int, Relation] = {}
        self.classes: Dict[str, ConceptClass] = {}
        self.rtypes: Dict[str, RelationType] = {}
        self.iri_index: Dict[str, int] = {}
        self._rel_index: Dict[Tuple[int, int, str], int] = {}
        self._next_concept_id = 1
        self._next_relation_id = 1
        self.register_class(THING_CLASS, label=THING_CLASS)
        self.register_rtype(EQU_RTYPE, label="equivalent")

    # --- registries ---

    def register_class(self, class_id: str, label: Optional[str] = None,
                       parent: Optional[str] = None) -> ConceptClass:
        existing = self.classes.get(class_id)
        if existing is not None:
            if label is not None and existing.label == existing.id:
                existing.label = label
            if parent is not None and existing.parent is None:
                if not self._would_cycle(class_id, parent, self.classes):
                    existing.parent = parent
            return existing
        if parent is not None and parent not in self.classes:
            self.register_class(parent)
        cc = ConceptClass(class_id, label if label is not None else class_id, parent)
        self.classes[class_id] = cc
        return cc

    def register_rtype(self, rtype_id: str, label: Optional[str] = None,
                       parent: Optional[str] = None) -> RelationType:
        existing = self.rtypes.get(rtype_id)
        if existing is not None:
            return existing
        rt = RelationType(rtype_id, label if label is not None else rtype_id, parent)
        self.rtypes[rtype_id] = rt
        return rt

    @staticmethod
    def _would_cycle(child: str, parent: str, registry) -> bool:
        seen = {child}
        cur = parent
        while cur is not None:
            if cur in seen:
                return True
            seen.add(cur)
            entry = registry.get(cur)
            cur = entry.parent if entry is not None else None
        return False

    def set_class_parent(self, child: str, parent: str) -> bool:
        """Register a hierarchy edge; returns False (edge skipped) if it
        would close a cycle."""
        self.register_class(child)
        self.register_class(parent)
        if self._would_cycle(child, parent, self.classes):
            return False
        self.classes[child].parent = parent
        return True

    def is_subclass_of(self, c1: str, c2: str) -> bool:
        if c1 not in self.classes or c2 not in self.classes:
            raise UnknownClass(f"unknown class: {c1 if c1 not in self.classes else c2}")
        cur: Optional[str] = c1
        while cur is not None:
            if cur == c2:
                return True
            cur = self.classes[cur].parent
        return False

    # --- concepts ---

    def create_concept(self, iri: Optional[str], class_id: str, source: str,
                       auto_register: bool = True) -> int:
        if class_id not in self.classes:
            if not auto_register:
                raise UnknownClass(f"unknown class: {class_id}")
            self.register_class(class_id)
        if iri is not None and iri in self.iri_index:
            cid = self.iri_index[iri]
            self.concepts[cid].sources.add(source)
            return cid
        cid = self._next_concept_id
        self._next_concept_id += 1
        concept = Concept(id=cid, class_id=class_id, iri=iri, sources={source})
        self.concepts[cid] = concept
        if iri is not None:
            self.iri_index[iri] = cid
        return cid

    def _get_concept(self, cid: int) -> Concept:
        if cid not in self.concepts:
            raise UnknownConcept(f"unknown concept: {cid}")
        return self.concepts[cid]

    # --- relations ---

    def add_relation(self, from_id: int, to_id: int, rtype: str, source: str,
                     auto_register: bool = True) -> int:
        if from_id not in self.concepts or to_id not in self.concepts:
            missing = from_id if from_id not in self.concepts else to_id
            raise DanglingEndpoint(f"relation endpoint does not exist: {missing}")
        if rtype not in self.rtypes:
            if not auto_register:
                raise UnknownRelationType(f"unknown relation type: {rtype}")
            self.register_rtype(rtype)
        key = (from_id, to_id, rtype)
        if key in self._rel_index:
            rid = self._rel_index[key]
            self.relations[rid].sources.add(source)
            return rid
        rid = self._next_relation_id
        self._next_relation_id += 1
        self.relations[rid] = Relation(id=rid, from_id=from_id, to_id=to_id,
                                       rtype=rtype, sources={source})
        self._rel_index[key] = rid
        return rid

    def delete_relation(self, rid: int):
        rel = self.relations.pop(rid)
        del self._rel_index[(rel.from_id, rel.to_id, rel.rtype)]

    def merge_concepts(self, keep: int, drop: int):
        """keep absorbs drop: accessions, attributes, sources unioned;
        incident relations re-pointed; equ self-loops removed."""
        if keep == drop:
            raise SelfMerge(f"cannot merge concept {keep} with itself")
        k = self._get_concept(keep)
        d = self._get_concept(drop)
        k.accessions |= d.accessions
        k.attributes |= d.attributes
        k.sources |= d.sources
        if k.name is None and d.name is not None:
            k.name = d.name
        for rid in [r.id for r in self.relations.values()
                    if r.from_id == drop or r.to_id == drop]:
            rel = self.relations[rid]
            new_from = keep if rel.from_id == drop else rel.from_id
            new_to = keep if rel.to_id == drop else rel.to_id
            self.delete_relation(rid)
            if new_from == new_to and rel.rtype == EQU_RTYPE:
                continue
            key = (new_from, new_to, rel.rtype)
            if key in self._rel_index:
                target = self.relations[self._rel_index[key]]
                target.attributes |= rel.attributes
                target.sources |= rel.sources
            else:
                rel.from_id, rel.to_id = new_from, new_to
                self.relations[rid] = rel
                self._rel_index[key] = rid
        del self.concepts[drop]
        # re-index drop's iri as an alias of keep
        for iri, cid in list(self.iri_index.items()):
            if cid == drop:
                self.iri_index[iri] = keep

    def neighbors(self, cid: int, direction: str = "both") -> Set[int]:
        self._get_concept(cid)
        out: Set[int] = set()
        for rel in self.relations.values():
            if direction in ("out", "both") and rel.from_id == cid:
                out.add(rel.to_id)
            if direction in ("in", "both") and rel.to_id == cid:
                out.add(rel.from_id)
        return out

    # --- dumps ---

    def copy(self) -> "SemanticGraph":
        return copy.deepcopy(self)

    def dump(self) -> dict:
        """Canonical JSON-able snapshot; equal graphs give equal dumps."""
        return {
            "classes": [
                {"id": c.id, "label": c.label, "parent": c.parent}
                for c in sorted(self.classes.values(), key=lambda c: c.id)
            ],
            "rtypes": [
                {"id": r.id, "label": r.label, "parent": r.parent}
                for r in sorted(self.rtypes.values(), key=lambda r: r.id)
            ],
            "concepts": [
                {
                    "id": c.id,
                    "iri": c.iri,
                    "name": c.name,
                    "class": c.class_id,
                    "accessions": sorted([a.namespace, a.value] for a in c.accessions),
                    "attributes": sorted(
                        [a.name, a.lexical, a.datatype or "", a.lang or ""]
                        for a in c.attributes),
                    "sources": sorted(c.sources),
                }
                for c in sorted(self.concepts.values(), key=lambda c: c.id)
            ],
            "relations": [
                {
                    "id": r.id,
                    "from": r.from_id,
                    "to": r.to_id,
                    "rtype": r.rtype,
                    "attributes": sorted(
                        [a.name, a.lexical, a.datatype or "", a.lang or ""]
                        for a in r.attributes),
                    "sources": sorted(r.sources),
                }
                for r in sorted(self.relations.values(), key=lambda r: r.id)
            ],
            "iri_index": dict(sorted(self.iri_index.items())),
        }

    @classmethod
    def from_dump(cls, data: dict) -> "SemanticGraph":
        g = cls()
        for c in data.get("classes", []):
            g.classes[c["id"]] = ConceptClass(c["id"], c["label"], c.get("parent"))
        for r in data.get("rtypes", []):
            g.rtypes[r["id"]] = RelationType(r["id"], r["label"], r.get("parent"))
        for c in data.get("concepts", []):
            concept = Concept(
                id=c["id"], class_id=c["class"], iri=c.get("iri"), name=c.get("name"),
                accessions={Accession(ns, v) for ns, v in c.get("accessions", [])},
                attributes={AttributeValue(n, lx, dt or None, lg or None)
                            for n, lx, dt, lg in c.get("attributes", [])},
                sources=set(c.get("sources", [])),
            )
            g.concepts[concept.id] = concept
        for r in data.get("relations", []):
            rel = Relation(
                id=r["id"], from_id=r["from"], to_id=r["to"], rtype=r["rtype"],
                attributes={AttributeValue(n, lx, dt or None, lg or None)
                            for n, lx, dt, lg in r.get("attributes", [])},
                sources=set(r.get("sources", [])),
            )
            g.relations[rel.id] = rel
            g._rel_index[(rel.from_id, rel.to_id, rel.rtype)] = rel.id
        g.iri_index = dict(data.get("iri_index", {}))
        g._next_concept_id = max(g.concepts, default=0) + 1
        g._next_relation_id = max(g.relations, default=0) + 1
        return g
