"""Exception hierarchy shared across the package."""


class SemgraphError(Exception):
    """Base class for all package-specific errors."""


# --- graph core ---

class UnknownClass(SemgraphError):
    pass


class UnknownRelationType(SemgraphError):
    pass


class UnknownConcept(SemgraphError):
    pass


class DanglingEndpoint(SemgraphError):
    pass


class SelfMerge(SemgraphError):
    pass


# --- parsing (RDF syntaxes and SPARQL) ---

class ParseError(SemgraphError):
    """Syntax error carrying a 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class UnknownPrefix(ParseError):
    pass


class UnboundProjection(SemgraphError):
    """A projected, ordered, or filtered variable never occurs in WHERE."""


# --- mapping ---

class BlankNodePresent(SemgraphError):
    pass


# --- plugins ---

class UnknownPlugin(SemgraphError):
    pass


class NegativeDepth(SemgraphError):
    pass


# --- workflow ---

class JsonError(SemgraphError):
    pass


class SchemaError(SemgraphError):
    pass


# --- endpoint client ---

class HttpError(SemgraphError):
    def __init__(self, status: int, message: str = ""):
        super().__init__(f"HTTP {status}" + (f": {message}" if message else ""))
        self.status = status


class ProtocolError(SemgraphError):
    """Endpoint response body could not be parsed."""


class LocalSyntaxError(SemgraphError):
    """Query rejected by local validation before being sent."""
