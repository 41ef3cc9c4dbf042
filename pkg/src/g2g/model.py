"""In-memory property graph model.

Nodes and edges carry zero or more labels and properties whose values are
lists of typed values.  A value is a plain Python ``int`` (64-bit integer),
``float`` (double) or ``str`` (text); the type is part of the value's identity,
so ``2017``, ``2017.0`` and ``"2017"`` are three different values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple, Union

from .errors import MissingEndpoint

PgValue = Union[int, float, str]

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_INTEGER_RE = re.compile(r"[+-]?[0-9]+")
_DOUBLE_RE = re.compile(r"[+-]?(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)(?:[eE][+-]?[0-9]+)?")


def infer_value(lexical: str, quoted: bool = False) -> PgValue:
    """Type a serialized value from its lexical form.

    Integers are optional-sign-plus-digits within the signed 64-bit range,
    doubles follow the usual decimal/scientific grammar, anything else is
    text.  ``quoted`` values are always text.
    """
    if quoted:
        return lexical
    if _INTEGER_RE.fullmatch(lexical):
        number = int(lexical)
        if INT64_MIN <= number <= INT64_MAX:
            return number
        return lexical
    if _DOUBLE_RE.fullmatch(lexical):
        number = float(lexical)
        if math.isfinite(number):
            return number
    return lexical


def value_kind(value: PgValue) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not property values")
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "double"
    if isinstance(value, str):
        return "text"
    raise TypeError(f"unsupported property value {value!r}")


def value_key(value: PgValue) -> Tuple[str, PgValue]:
    """Hashable identity of a value that distinguishes 1, 1.0 and "1"."""
    return (value_kind(value), value)


def _append_unique(values: List[PgValue], seen: set, new: Iterable[PgValue]) -> None:
    for v in new:
        k = value_key(v)
        if k not in seen:
            seen.add(k)
            values.append(v)


def _merge_props(target: Dict[str, List[PgValue]], source: Dict[str, List[PgValue]]) -> None:
    for key, values in source.items():
        current = target.setdefault(key, [])
        _append_unique(current, {value_key(v) for v in current}, values)


def _props_key(props: Dict[str, List[PgValue]]):
    # keys keep their insertion order (the mapping header order) and value
    # lists are ordered, so equal graphs always serialize identically
    return tuple((k, tuple(value_key(v) for v in vs)) for k, vs in props.items())


@dataclass
class PgNode:
    id: str
    labels: List[str] = field(default_factory=list)
    properties: Dict[str, List[PgValue]] = field(default_factory=dict)

    def canonical(self):
        return (self.id, tuple(sorted(set(self.labels))), _props_key(self.properties))


@dataclass
class PgEdge:
    src: str
    dst: str
    directed: bool = True
    labels: List[str] = field(default_factory=list)
    properties: Dict[str, List[PgValue]] = field(default_factory=dict)

    def endpoints(self) -> Tuple[str, str]:
        """Endpoints in canonical order: undirected edges sort their ids."""
        if not self.directed and self.dst < self.src:
            return (self.dst, self.src)
        return (self.src, self.dst)

    def canonical(self):
        return (
            self.endpoints(),
            self.directed,
            tuple(sorted(set(self.labels))),
            _props_key(self.properties),
        )


def _clean_node(node: PgNode) -> PgNode:
    if not node.id:
        raise ValueError("node id must be non-empty")
    labels: List[str] = []
    for label in node.labels:
        if label not in labels:
            labels.append(label)
    props: Dict[str, List[PgValue]] = {}
    _merge_props(props, node.properties)
    return PgNode(node.id, labels, {k: v for k, v in props.items() if v})


class PropertyGraph:
    """A mixed graph of labeled nodes and directed/undirected edges.

    Construction goes through :meth:`upsert_node` and :meth:`add_edge`,
    which merge duplicate nodes and drop duplicate edges.
    """

    def __init__(self, nodes: Iterable[PgNode] = (), edges: Iterable[PgEdge] = ()):
        self.nodes: Dict[str, PgNode] = {}
        self.edges: List[PgEdge] = []
        self._edge_keys: set = set()
        for node in nodes:
            self.upsert_node(node)
        for edge in edges:
            self.add_edge(edge)

    def upsert_node(self, node: PgNode) -> PgNode:
        """Insert ``node`` or merge it into the node with the same id.

        Labels are unioned and property values appended, in first-seen
        order, skipping values already present for that key.
        """
        incoming = _clean_node(node)
        current = self.nodes.get(incoming.id)
        if current is None:
            self.nodes[incoming.id] = incoming
            return incoming
        for label in incoming.labels:
            if label not in current.labels:
                current.labels.append(label)
        _merge_props(current.properties, incoming.properties)
        return current

    def add_edge(self, edge: PgEdge) -> bool:
        """Append ``edge`` unless an identical edge exists; returns True if added.

        Undirected edges are stored with their endpoints in lexicographic
        order so that (a, b) and (b, a) compare equal.
        """
        for end in (edge.src, edge.dst):
            if end not in self.nodes:
                raise MissingEndpoint(end)
        src, dst = edge.endpoints()
        labels: List[str] = []
        for label in edge.labels:
            if label not in labels:
                labels.append(label)
        props: Dict[str, List[PgValue]] = {}
        _merge_props(props, edge.properties)
        stored = PgEdge(src, dst, edge.directed, labels, {k: v for k, v in props.items() if v})
        key = stored.canonical()
        if key in self._edge_keys:
            return False
        self._edge_keys.add(key)
        self.edges.append(stored)
        return True

    def degree_map(self) -> Dict[str, int]:
        degrees = dict.fromkeys(self.nodes, 0)
        for edge in self.edges:
            degrees[edge.src] += 1
            degrees[edge.dst] += 1
        return degrees

    def remove_orphans(self) -> int:
        """Drop nodes incident to no edge; returns how many were removed."""
        degrees = self.degree_map()
        orphans = [nid for nid, deg in degrees.items() if deg == 0]
        for nid in orphans:
            del self.nodes[nid]
        return len(orphans)

    def stats(self) -> Tuple[int, int]:
        return stats(self)

    def canonical(self):
        return (
            tuple(sorted(n.canonical() for n in self.nodes.values())),
            tuple(sorted(e.canonical() for e in self.edges)),
        )

    def __eq__(self, other):
        if not isinstance(other, PropertyGraph):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __repr__(self):
        n, e = stats(self)
        return f"<PropertyGraph nodes={n} edges={e}>"


def stats(graph: PropertyGraph) -> Tuple[int, int]:
    """Return ``(node_count, edge_count)``."""
    return len(graph.nodes), len(graph.edges)
