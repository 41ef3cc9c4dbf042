"""Reading and writing the flat PG text format and JSON-PG.

A PG file has one node or edge per line::

    101 :person name:Alice age:15 country:"United States"
    101 -- 102 :same_school since:2002
    102 -> 101 :likes since:2005

Tokens are separated by spaces or tabs.  Quoted strings use JSON escaping.
Blank lines and ``#`` comments (at the start of a token) are ignored.
"""

from __future__ import annotations

import json
import math
from typing import Dict, List, Optional, Tuple

from .errors import ParseError, SchemaError, UnsupportedValue
from .model import PgEdge, PgNode, PgValue, PropertyGraph, infer_value, value_kind

DIRECTIONS = ("--", "->")

_ALWAYS_QUOTE = set(':"#\\')
_NUMBER_START = set("0123456789+-.")


def _needs_quote(text: str, extra: str = "") -> bool:
    if not text:
        return True
    for ch in text:
        if ch.isspace() or ch in _ALWAYS_QUOTE or ch in extra or not ch.isprintable():
            return True
    return False


def _escape_char(ch: str) -> str:
    if ch.isprintable():
        return ch
    # json.dumps leaves U+2028, U+0085 and friends raw; escape them so a
    # quoted token never contains a line break of any kind
    return json.dumps(ch)[1:-1]


def quote(text: str) -> str:
    return "".join(_escape_char(ch) for ch in json.dumps(text, ensure_ascii=False))


def format_id(node_id: str) -> str:
    if _needs_quote(node_id) or node_id in DIRECTIONS:
        return quote(node_id)
    return node_id


def format_label(label: str) -> str:
    # a colon inside a label is unambiguous because the leading ':' marks it
    if not label or any(ch.isspace() or ch in '"#\\' or not ch.isprintable() for ch in label):
        return ":" + quote(label)
    return ":" + label


def format_key(key: str) -> str:
    return quote(key) if _needs_quote(key) else key


def format_value(value: PgValue) -> str:
    kind = value_kind(value)
    if kind == "integer":
        return str(value)
    if kind == "double":
        if not math.isfinite(value):
            raise UnsupportedValue(f"non-finite double {value!r}")
        return repr(value)
    # text that could be read back as a number is quoted as well
    if _needs_quote(value) or value[0] in _NUMBER_START:
        return quote(value)
    return value


def _format_props(props: Dict[str, List[PgValue]]) -> str:
    return " ".join(f"{format_key(k)}:{format_value(v)}" for k, vs in props.items() for v in vs)


def _line(head: List[str], labels: List[str], props: Dict[str, List[PgValue]]) -> str:
    parts = head + [format_label(label) for label in sorted(labels)]
    rendered = _format_props(props)
    if rendered:
        parts.append(rendered)
    return " ".join(parts)


def _direction(edge: PgEdge) -> str:
    return "->" if edge.directed else "--"


def _edge_sort_key(edge: PgEdge):
    return (edge.src, edge.dst, _direction(edge), tuple(sorted(edge.labels)), _format_props(edge.properties))


def sorted_edges(graph: PropertyGraph) -> List[PgEdge]:
    return sorted(graph.edges, key=_edge_sort_key)


def write_pg(graph: PropertyGraph) -> str:
    """Serialize ``graph`` deterministically: nodes by id, then edges."""
    lines = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        lines.append(_line([format_id(node.id)], node.labels, node.properties))
    for edge in sorted_edges(graph):
        head = [format_id(edge.src), _direction(edge), format_id(edge.dst)]
        lines.append(_line(head, edge.labels, edge.properties))
    return "".join(line + "\n" for line in lines)


# -- parsing -----------------------------------------------------------------

class _Token:
    __slots__ = ("parts", "column")

    def __init__(self, parts, column):
        # parts: list of (quoted, text) segments making up one whitespace-delimited token
        self.parts: List[Tuple[bool, str]] = parts
        self.column = column

    def is_bare(self, text: str) -> bool:
        return len(self.parts) == 1 and self.parts[0] == (False, text)


def _read_quoted(line: str, start: int, lineno: int) -> Tuple[str, int]:
    i = start + 1
    while i < len(line):
        ch = line[i]
        if ch == "\\":
            i += 2
            continue
        if ch == '"':
            try:
                return json.loads(line[start:i + 1]), i + 1
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad escape in quoted string: {exc.msg}", lineno, start + 1) from None
        i += 1
    raise ParseError("unterminated quoted string", lineno, start + 1)


def _tokenize_line(line: str, lineno: int) -> List[_Token]:
    tokens = []
    i, n = 0, len(line)
    while i < n:
        if line[i] in " \t":
            i += 1
            continue
        if line[i] == "#":
            break
        start = i
        parts: List[Tuple[bool, str]] = []
        while i < n and line[i] not in " \t":
            if line[i] == '"':
                text, i = _read_quoted(line, i, lineno)
                parts.append((True, text))
            else:
                j = i
                while j < n and line[j] not in ' \t"':
                    j += 1
                parts.append((False, line[i:j]))
                i = j
        tokens.append(_Token(parts, start + 1))
    return tokens


def _parse_id(token: _Token, lineno: int) -> str:
    if len(token.parts) != 1:
        raise ParseError("malformed node id", lineno, token.column)
    quoted, text = token.parts[0]
    if not quoted and (not text or text.startswith(":")):
        raise ParseError("missing node id", lineno, token.column)
    return text


def _parse_label_or_property(token: _Token, lineno: int, labels: List[str],
                             props: Dict[str, List[PgValue]]) -> None:
    parts = token.parts
    first_quoted, first = parts[0]
    if not first_quoted and first.startswith(":"):
        if len(parts) == 1 and len(first) > 1:
            labels.append(first[1:])
            return
        if first == ":" and len(parts) == 2 and parts[1][0]:
            labels.append(parts[1][1])
            return
        raise ParseError("malformed label", lineno, token.column)

    if first_quoted:
        key = first
        rest = parts[1:]
        if not rest or rest[0][0] or not rest[0][1].startswith(":"):
            raise ParseError("expected ':' after quoted property key", lineno, token.column)
        rest = [(False, rest[0][1][1:])] + rest[1:]
    else:
        if ":" not in first:
            raise ParseError(f"expected a label or key:value property, got {first!r}",
                             lineno, token.column)
        key, _, tail = first.partition(":")
        rest = [(False, tail)] + parts[1:]

    # drop the empty bare fragment left before a quoted value
    if len(rest) > 1 and rest[0] == (False, ""):
        rest = rest[1:]
    if len(rest) != 1:
        raise ParseError("malformed property value", lineno, token.column)
    quoted, text = rest[0]
    if not quoted and not text:
        raise ParseError(f"property {key!r} has no value", lineno, token.column)
    props.setdefault(key, []).append(infer_value(text, quoted=quoted))


def parse_pg(text: str) -> PropertyGraph:
    """Parse PG text into a graph.

    Edge lines may reference ids that no node line declares; those become
    label-less nodes.
    """
    nodes: List[PgNode] = []
    edges: List[PgEdge] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        tokens = _tokenize_line(raw[:-1] if raw.endswith("\r") else raw, lineno)
        if not tokens:
            continue
        head = _parse_id(tokens[0], lineno)
        labels: List[str] = []
        props: Dict[str, List[PgValue]] = {}
        if len(tokens) >= 2 and any(tokens[1].is_bare(d) for d in DIRECTIONS):
            if len(tokens) < 3:
                raise ParseError("edge line lacks a destination id", lineno, tokens[1].column)
            dst = _parse_id(tokens[2], lineno)
            for token in tokens[3:]:
                _parse_label_or_property(token, lineno, labels, props)
            directed = tokens[1].is_bare("->")
            edges.append(PgEdge(head, dst, directed, labels, props))
        else:
            for token in tokens[1:]:
                _parse_label_or_property(token, lineno, labels, props)
            nodes.append(PgNode(head, labels, props))

    graph = PropertyGraph(nodes)
    for edge in edges:
        for end in (edge.src, edge.dst):
            if end not in graph.nodes:
                graph.upsert_node(PgNode(end))
        graph.add_edge(edge)
    return graph


# -- JSON-PG -----------------------------------------------------------------

def _json_value(value: PgValue):
    if value_kind(value) == "double" and not math.isfinite(value):
        raise UnsupportedValue(f"non-finite double {value!r}")
    return value


def to_json_pg(graph: PropertyGraph) -> dict:
    nodes = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        nodes.append({
            "id": node.id,
            "labels": sorted(node.labels),
            "properties": {k: [_json_value(v) for v in vs] for k, vs in node.properties.items()},
        })
    edges = []
    for edge in sorted_edges(graph):
        edges.append({
            "from": edge.src,
            "to": edge.dst,
            "undirected": not edge.directed,
            "labels": sorted(edge.labels),
            "properties": {k: [_json_value(v) for v in vs] for k, vs in edge.properties.items()},
        })
    return {"nodes": nodes, "edges": edges}


def write_json_pg(graph: PropertyGraph, indent: Optional[int] = 2) -> str:
    return json.dumps(to_json_pg(graph), ensure_ascii=False, indent=indent) + "\n"


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise SchemaError(f"{where}: missing required key {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise SchemaError(f"{where}: {key!r} has the wrong type")
    return value


def _labels_from_json(obj: dict, where: str) -> List[str]:
    labels = obj.get("labels", [])
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SchemaError(f"{where}: 'labels' must be a list of strings")
    return labels


def _props_from_json(obj: dict, where: str) -> Dict[str, List[PgValue]]:
    raw = obj.get("properties", {})
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: 'properties' must be an object")
    props: Dict[str, List[PgValue]] = {}
    for key, values in raw.items():
        if not isinstance(values, list):
            raise SchemaError(f"{where}: property {key!r} must be a list of values")
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float, str)):
                raise SchemaError(f"{where}: property {key!r} has unsupported value {v!r}")
        props[key] = list(values)
    return props


def from_json_pg(doc) -> PropertyGraph:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    raw_nodes = _require(doc, "nodes", list, "document")
    raw_edges = _require(doc, "edges", list, "document")
    graph = PropertyGraph()
    for i, obj in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(f"{where}: must be an object")
        node_id = _require(obj, "id", str, where)
        if not node_id:
            raise SchemaError(f"{where}: empty id")
        graph.upsert_node(PgNode(node_id, _labels_from_json(obj, where), _props_from_json(obj, where)))
    for i, obj in enumerate(raw_edges):
        where = f"edges[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(f"{where}: must be an object")
        src = _require(obj, "from", str, where)
        dst = _require(obj, "to", str, where)
        undirected = obj.get("undirected", False)
        if not isinstance(undirected, bool):
            raise SchemaError(f"{where}: 'undirected' must be a boolean")
        for end in (src, dst):
            if end not in graph.nodes:
                graph.upsert_node(PgNode(end))
        graph.add_edge(PgEdge(src, dst, not undirected,
                              _labels_from_json(obj, where), _props_from_json(obj, where)))
    return graph


def parse_json_pg(text: str) -> PropertyGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_json_pg(doc)
