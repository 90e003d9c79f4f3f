from .ast import QueryAst, TriplePattern, Variable
from .eval import eval_bgp, eval_construct, eval_select, nested_loop_bgp
from .parser import parse_query
from .store import TripleStore

__all__ = ["QueryAst", "TriplePattern", "Variable", "TripleStore",
           "parse_query", "eval_bgp", "eval_select", "eval_construct",
           "nested_loop_bgp"]
