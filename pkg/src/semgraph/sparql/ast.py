"""AST types for the SPARQL subset: SELECT / CONSTRUCT over basic graph
patterns with FILTER, ORDER BY, LIMIT, OFFSET."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

from ..rdf.terms import Term

_VAR_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not _VAR_RE.match(self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")


PatternTerm = Union[Term, Variable]


@dataclass(frozen=True)
class TriplePattern:
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm

    def variables(self) -> List[str]:
        return [t.name for t in (self.s, self.p, self.o) if isinstance(t, Variable)]


# --- filter expressions ---

@dataclass(frozen=True)
class Comparison:
    op: str  # one of = != < <= > >=
    left: Union[Variable, Term]
    right: Union[Variable, Term]


@dataclass(frozen=True)
class And:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Or:
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True)
class Not:
    inner: "FilterExpr"


FilterExpr = Union[Comparison, And, Or, Not]


def filter_variables(e: FilterExpr) -> List[str]:
    if isinstance(e, Comparison):
        return [t.name for t in (e.left, e.right) if isinstance(t, Variable)]
    if isinstance(e, (And, Or)):
        return filter_variables(e.left) + filter_variables(e.right)
    return filter_variables(e.inner)


@dataclass
class QueryAst:
    form: str  # "select" | "construct"
    projection: Optional[List[str]] = None  # None = star (select only)
    distinct: bool = False
    template: List[TriplePattern] = field(default_factory=list)  # construct only
    prefixes: Dict[str, str] = field(default_factory=dict)
    where: List[TriplePattern] = field(default_factory=list)
    filters: List[FilterExpr] = field(default_factory=list)
    order_by: Optional[str] = None
    order_desc: bool = False
    limit: Optional[int] = None
    offset: Optional[int] = None
