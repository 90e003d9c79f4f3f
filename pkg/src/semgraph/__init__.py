"""semgraph: semantic-graph integration workbench."""

from .graph import SemanticGraph

__version__ = "0.1.0"
__all__ = ["SemanticGraph", "__version__"]
