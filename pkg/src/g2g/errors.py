"""Exception hierarchy shared by every g2g module."""


class G2GError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(G2GError):
    """Malformed input text. ``line`` and ``column`` are 1-based, 0 if unknown."""

    def __init__(self, reason, line=0, column=0):
        self.reason = reason
        self.line = line
        self.column = column
        where = f"line {line}" if line else ""
        if line and column:
            where += f", column {column}"
        super().__init__(f"{where}: {reason}" if where else reason)


class EmptyPattern(ParseError):
    """A G2GML header with no indented RDF pattern below it."""


class DanglingIndent(ParseError):
    """An indented G2GML block that precedes any header."""


class UndefinedPrefix(ParseError):
    def __init__(self, name, line=0, column=0):
        self.name = name
        super().__init__(f"undefined prefix {name!r}", line, column)


class UnsupportedFeature(ParseError):
    """A SPARQL construct outside the supported pattern subset."""

    def __init__(self, name, line=0, column=0):
        self.name = name
        super().__init__(f"unsupported SPARQL feature: {name}", line, column)


class UndefinedNodeLabel(G2GError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"no node map is labeled {label!r}")


class SchemaError(G2GError):
    """A well-formed JSON-PG document that lacks required keys or has wrong types."""


class MissingEndpoint(G2GError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"edge endpoint {node_id!r} is not a node of the graph")


class UnsupportedValue(G2GError):
    """A value that cannot be represented in the requested output format."""


class EndpointError(G2GError):
    """Base class for failures talking to a remote SPARQL endpoint."""


class NetworkError(EndpointError):
    def __init__(self, cause):
        self.cause = cause
        super().__init__(f"network error: {cause}")


class HttpError(EndpointError):
    def __init__(self, status, body=""):
        self.status = status
        self.body = body
        super().__init__(f"endpoint returned HTTP {status}")


class EndpointTimeout(EndpointError):
    pass


class ResultParseError(EndpointError):
    pass


class MappingError(G2GError):
    """One or more maps failed; ``failures`` holds (map description, exception) pairs."""

    def __init__(self, failures):
        self.failures = list(failures)
        lines = [f"{where}: {exc}" for where, exc in self.failures]
        super().__init__("; ".join(lines))
