"""In-memory triple store with SPO, POS, and OSP orderings.

Readers may run concurrently with each other; writes must be serialized
externally (single-writer contract).
"""

from __future__ import annotations

from typing import Dict, Iterator, Optional, Set

from ..rdf.terms import Term, Triple, TripleSet, triple_sort_key

_Index = Dict[Term, Dict[Term, Set[Term]]]


class TripleStore:
    def __init__(self, triples: Optional[TripleSet] = None):
        self.triples: TripleSet = set()
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        for t in triples or ():
            self.insert(t)

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self.triples

    def insert(self, t: Triple) -> bool:
        """Insert a triple; returns True iff it was new (idempotent)."""
        if t in self.triples:
            return False
        self.triples.add(t)
        self._spo.setdefault(t.s, {}).setdefault(t.p, set()).add(t.o)
        self._pos.setdefault(t.p, {}).setdefault(t.o, set()).add(t.s)
        self._osp.setdefault(t.o, {}).setdefault(t.s, set()).add(t.p)
        return True

    def scan_spo(self) -> Iterator[Triple]:
        for s in self._spo:
            for p in self._spo[s]:
                for o in self._spo[s][p]:
                    yield Triple(s, p, o)

    def scan_pos(self) -> Iterator[Triple]:
        for p in self._pos:
            for o in self._pos[p]:
                for s in self._pos[p][o]:
                    yield Triple(s, p, o)

    def scan_osp(self) -> Iterator[Triple]:
        for o in self._osp:
            for s in self._osp[o]:
                for p in self._osp[o][s]:
                    yield Triple(s, p, o)

    def match(self, s: Optional[Term], p: Optional[Term], o: Optional[Term]) -> list:
        """All triples matching the pattern (None = wildcard), in canonical
        sorted order for deterministic evaluation."""
        from ..rdf.terms import Iri, Literal
        # bindings that can never form a valid triple match nothing
        if isinstance(s, Literal) or (p is not None and not isinstance(p, Iri)):
            return []
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            return [t] if t in self.triples else []
        if s is not None:
            by_p = self._spo.get(s, {})
            if p is not None:
                found = (Triple(s, p, obj) for obj in by_p.get(p, ()))
            else:
                found = (Triple(s, pred, obj)
                         for pred, objs in by_p.items() for obj in objs)
        elif p is not None:
            by_o = self._pos.get(p, {})
            if o is not None:
                found = (Triple(subj, p, o) for subj in by_o.get(o, ()))
            else:
                found = (Triple(subj, p, obj)
                         for obj, subjs in by_o.items() for subj in subjs)
        elif o is not None:
            by_s = self._osp.get(o, {})
            found = (Triple(subj, pred, o)
                     for subj, preds in by_s.items() for pred in preds)
        else:
            found = iter(self.triples)
        hits = [t for t in found
                if (s is None or t.s == s)
                and (p is None or t.p == p)
                and (o is None or t.o == o)]
        return sorted(hits, key=triple_sort_key)

    def count_estimate(self, s: Optional[Term], p: Optional[Term],
                       o: Optional[Term]) -> int:
        """Cheap upper bound on match size, used for join ordering."""
        if s is not None:
            by_p = self._spo.get(s, {})
            return len(by_p.get(p, ())) if p is not None else sum(map(len, by_p.values()))
        if p is not None:
            by_o = self._pos.get(p, {})
            return len(by_o.get(o, ())) if o is not None else sum(map(len, by_o.values()))
        if o is not None:
            return sum(map(len, self._osp.get(o, {}).values()))
        return len(self.triples)
