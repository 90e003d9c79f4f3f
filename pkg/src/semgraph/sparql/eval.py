"""BGP evaluation and the SELECT / CONSTRUCT pipelines.

eval_bgp is an index-backed backtracking join; its contract is extensional
equality with the textbook nested-loop definition.  Without ORDER BY the
output order is the deterministic engine order (patterns most-selective
first, candidate triples in canonical term order); callers that need a
specific order must use ORDER BY.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from ..rdf.terms import (Iri, Literal, Term, Triple, TripleSet,
                         numeric_value, term_sort_key)
from .ast import (And, Comparison, FilterExpr, Not, Or, QueryAst,
                  TriplePattern, Variable)
from .store import TripleStore

Solution = Dict[str, Term]


def _resolve(t, binding: Solution) -> Optional[Term]:
    """Pattern term -> concrete term under the binding (None if unbound var)."""
    if isinstance(t, Variable):
        return binding.get(t.name)
    return t


def _selectivity(store: TripleStore, pat: TriplePattern, binding: Solution):
    s = _resolve(pat.s, binding)
    p = _resolve(pat.p, binding)
    o = _resolve(pat.o, binding)
    unbound = sum(1 for x in (s, p, o) if x is None)
    return (unbound, store.count_estimate(s, p, o))


def eval_bgp(store: TripleStore, patterns: List[TriplePattern]) -> List[Solution]:
    """All variable assignments under which every pattern is in the store.

    Returns a multiset (list); order is the deterministic engine order.
    """
    results: List[Solution] = []

    def backtrack(remaining: List[TriplePattern], binding: Solution):
        if not remaining:
            results.append(dict(binding))
            return
        # most-selective-first: fewest unbound vars, then smallest range
        idx = min(range(len(remaining)),
                  key=lambda k: _selectivity(store, remaining[k], binding))
        pat = remaining[idx]
        rest = remaining[:idx] + remaining[idx + 1:]
        s = _resolve(pat.s, binding)
        p = _resolve(pat.p, binding)
        o = _resolve(pat.o, binding)
        for triple in store.match(s, p, o):
            new = dict(binding)
            ok = True
            for pt, val in ((pat.s, triple.s), (pat.p, triple.p), (pat.o, triple.o)):
                if isinstance(pt, Variable):
                    if pt.name in new and new[pt.name] != val:
                        ok = False
                        break
                    new[pt.name] = val
            if ok:
                backtrack(rest, new)

    if not patterns:
        return [{}]
    backtrack(list(patterns), {})
    return results


# --- filters ---

def _compare(op: str, left: Optional[Term], right: Optional[Term]) -> Optional[bool]:
    """Three-valued comparison: None means type error (solution eliminated)."""
    if left is None or right is None:
        return None
    ln, rn = numeric_value(left), numeric_value(right)
    if ln is not None and rn is not None:
        a, b = ln, rn
    elif type(left) is type(right):
        # codepoint comparison on lexical content; kind mismatch eliminates
        def lex(t: Term) -> str:
            return t.lexical if isinstance(t, Literal) else \
                t.value if isinstance(t, Iri) else t.label
        a, b = lex(left), lex(right)
    else:
        return None
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def eval_filter(e: FilterExpr, binding: Solution) -> Optional[bool]:
    if isinstance(e, Comparison):
        return _compare(e.op, _resolve(e.left, binding), _resolve(e.right, binding))
    if isinstance(e, And):
        l, r = eval_filter(e.left, binding), eval_filter(e.right, binding)
        if l is False or r is False:
            return False
        if l is None or r is None:
            return None
        return True
    if isinstance(e, Or):
        l, r = eval_filter(e.left, binding), eval_filter(e.right, binding)
        if l is True or r is True:
            return True
        if l is None or r is None:
            return None
        return False
    inner = eval_filter(e.inner, binding)
    return None if inner is None else not inner


def _solution_sort_key(sol: Solution):
    return sorted((name, term_sort_key(t)) for name, t in sol.items())


def eval_select(store: TripleStore, q: QueryAst) -> List[Solution]:
    assert q.form == "select"
    sols = eval_bgp(store, q.where)
    for f in q.filters:
        sols = [s for s in sols if eval_filter(f, s) is True]
    if q.projection is not None:
        keep = set(q.projection)
        sols = [{k: v for k, v in s.items() if k in keep} for s in sols]
    if q.distinct:
        seen = set()
        unique = []
        for s in sols:
            key = frozenset(s.items())
            if key not in seen:
                seen.add(key)
                unique.append(s)
        # deterministic order for DISTINCT: full-solution lexicographic
        sols = sorted(unique, key=_solution_sort_key)
    if q.order_by is not None:
        var = q.order_by
        missing = (3, "", "", "")  # unbound sorts after all terms
        sols = sorted(sols, key=lambda s: term_sort_key(s[var]) if var in s else missing,
                      reverse=q.order_desc)
    if q.offset is not None:
        sols = sols[q.offset:]
    if q.limit is not None:
        sols = sols[:q.limit]
    return sols


def eval_construct(store: TripleStore, q: QueryAst) -> TripleSet:
    assert q.form == "construct"
    sols = eval_bgp(store, q.where)
    for f in q.filters:
        sols = [s for s in sols if eval_filter(f, s) is True]
    out: TripleSet = set()
    for sol in sols:
        for pat in q.template:
            s = _resolve(pat.s, sol)
            p = _resolve(pat.p, sol)
            o = _resolve(pat.o, sol)
            if s is None or p is None or o is None:
                continue
            if isinstance(s, Literal) or not isinstance(p, Iri):
                continue
            out.add(Triple(s, p, o))
    return out


def nested_loop_bgp(store: TripleStore, patterns: List[TriplePattern]) -> List[Solution]:
    """Brute-force nested-loop definition of BGP matching; the oracle the
    backtracking join is tested against."""
    sols: List[Solution] = [{}]
    for pat in patterns:
        next_sols: List[Solution] = []
        for binding in sols:
            for triple in sorted(store.triples,
                                 key=lambda t: (term_sort_key(t.s), term_sort_key(t.p),
                                                term_sort_key(t.o))):
                new = dict(binding)
                ok = True
                for pt, val in ((pat.s, triple.s), (pat.p, triple.p), (pat.o, triple.o)):
                    if isinstance(pt, Variable):
                        if pt.name in new and new[pt.name] != val:
                            ok = False
                            break
                        new[pt.name] = val
                    elif pt != val:
                        ok = False
                        break
                if ok:
                    next_sols.append(new)
        sols = next_sols
    return sols
