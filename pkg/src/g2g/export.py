"""One-way export of a property graph to bulk-load CSV files.

Every dialect returns a mapping of file name to file content.  Multiple
labels and multiple property values are joined with ``;``.  None of the
target formats has undirected edges, so each edge row carries an
``undirected`` column instead.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Dict, Iterable, List

from .errors import UnsupportedValue
from .model import PgValue, PropertyGraph, value_kind
from .pgformat import sorted_edges

DIALECTS = ("neo4j", "oracle", "neptune")
SEP = ";"


def _keys(items: Iterable) -> List[str]:
    keys: Dict[str, None] = {}
    for item in items:
        for k in item.properties:
            keys.setdefault(k, None)
    return sorted(keys)


def _cell(values: List[PgValue], where: str) -> str:
    parts = []
    for v in values:
        kind = value_kind(v)
        if kind == "double" and not math.isfinite(v):
            raise UnsupportedValue(f"{where}: non-finite double {v!r}")
        text = repr(v) if kind == "double" else str(v)
        if len(values) > 1 and SEP in text:
            raise UnsupportedValue(f"{where}: value {text!r} contains the list separator {SEP!r}")
        parts.append(text)
    return SEP.join(parts)


def _labels(labels: List[str], where: str, required: bool) -> str:
    if required and not labels:
        raise UnsupportedValue(f"{where}: the format needs at least one label")
    if len(labels) > 1 and any(SEP in label for label in labels):
        raise UnsupportedValue(f"{where}: label contains the list separator {SEP!r}")
    return SEP.join(sorted(labels))


def _csv(header: List[str], rows: List[List[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def export_db(graph: PropertyGraph, dialect: str) -> Dict[str, str]:
    """Render ``graph`` as the node and edge files of ``dialect``."""
    if dialect not in DIALECTS:
        raise ValueError(f"unknown dialect {dialect!r}; expected one of {', '.join(DIALECTS)}")
    nodes = [graph.nodes[k] for k in sorted(graph.nodes)]
    edges = sorted_edges(graph)
    node_keys = _keys(nodes)
    edge_keys = _keys(edges)

    node_rows = []
    for n in nodes:
        where = f"node {n.id!r}"
        row = [n.id, _labels(n.labels, where, required=False)]
        row += [_cell(n.properties.get(k, []), where) for k in node_keys]
        node_rows.append(row)

    edge_rows = []
    label_required = dialect != "oracle"
    for i, e in enumerate(edges):
        where = f"edge {e.src!r}->{e.dst!r}"
        props = [_cell(e.properties.get(k, []), where) for k in edge_keys]
        labels = _labels(e.labels, where, required=label_required)
        undirected = "false" if e.directed else "true"
        if dialect == "neo4j":
            edge_rows.append([e.src, e.dst, labels] + props + [undirected])
        else:
            edge_rows.append([f"e{i}", e.src, e.dst, labels] + props + [undirected])

    if dialect == "neo4j":
        return {
            "nodes.csv": _csv(["id:ID", ":LABEL"] + node_keys, node_rows),
            "edges.csv": _csv([":START_ID", ":END_ID", ":TYPE"] + edge_keys + ["undirected:boolean"],
                              edge_rows),
        }
    if dialect == "neptune":
        return {
            "vertices.csv": _csv(["~id", "~label"] + node_keys, node_rows),
            "edges.csv": _csv(["~id", "~from", "~to", "~label"] + edge_keys + ["undirected:Bool"],
                              edge_rows),
        }
    return {
        "nodes.opv.csv": _csv(["id", "labels"] + node_keys, node_rows),
        "edges.ope.csv": _csv(["id", "src", "dst", "labels"] + edge_keys + ["undirected"], edge_rows),
    }
