"""Compile G2GML maps and materialize the property graph.

Edge maps import the RDF conditions of the node maps their endpoint labels
refer to, so an edge is only produced between resources that are nodes
themselves.  The imported patterns are alpha-renamed and conjoined as
nested groups.

Grouping rules:

* a node is identified by its node variable binding; every property value
  seen for it is collected (first occurrence order, no duplicates);
* an edge is identified by the bindings of all variables in the mandatory
  (non-OPTIONAL) part of the edge map's own pattern.  Mandatory property
  variables are therefore single-valued, while OPTIONAL property values
  are collected per edge.  Two emails between the same people are two
  edges; one email with two attachments is one edge with two values.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .endpoint import EndpointConfig, build_select, execute
from .errors import G2GError, MappingError, UndefinedNodeLabel
from .g2gml import Diagnostic, EdgeMapDef, G2GDocument, NodeMapDef
from .lexer import rename_variables, tokenize
from .model import INT64_MAX, INT64_MIN, PgEdge, PgNode, PgValue, PropertyGraph
from .rdf import FLOAT_TYPES, INTEGER_TYPES, IRI, BlankNode, Literal, Term, TripleStore
from .sparql import GraphPattern, Solution, evaluate, mandatory_vars, parse_pattern, project

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PropBinding:
    name: str
    var: str
    optional: bool


@dataclass
class CompiledMap:
    kind: str
    label: str
    projection: List[str]
    key_vars: List[str]
    prop_bindings: List[PropBinding]
    pattern: GraphPattern
    pattern_text: str
    origin: Union[NodeMapDef, EdgeMapDef]
    prefixes: Dict[str, str] = field(default_factory=dict)

    def describe(self) -> str:
        return f"line {self.origin.line}: {self.origin.header()}"


@dataclass
class RunOptions:
    source: Union[TripleStore, EndpointConfig]
    include_orphans: bool = False
    parallelism: int = 1


def _dedupe(names: Sequence[str]) -> List[str]:
    out: List[str] = []
    for n in names:
        if n not in out:
            out.append(n)
    return out


def _prop_bindings(props, mandatory: Sequence[str]) -> List[PropBinding]:
    return [PropBinding(name, var, var not in mandatory) for name, var in props]


def compile_node_map(definition: NodeMapDef, prefixes: Mapping[str, str]) -> CompiledMap:
    src = definition.rdf_pattern
    pattern = parse_pattern(src.raw_text, prefixes, line_offset=src.line - 1 if src.line else 0)
    bindings = _prop_bindings(definition.props, mandatory_vars(pattern))
    projection = _dedupe([definition.node_var] + [b.var for b in bindings])
    return CompiledMap("node", definition.label, projection, [definition.node_var], bindings,
                       pattern, src.raw_text, definition, dict(prefixes))


def _names_in(text: str) -> set:
    names = set()
    for tok in tokenize(text):
        if tok.kind == "VAR":
            names.add(tok.value)
        elif tok.kind == "BNODE":
            names.add("_:" + tok.value[2:])
    return names


def _import_node_pattern(node_map: NodeMapDef, endpoint_var: str, side: str, taken: set) -> str:
    """Node map pattern with its node variable replaced by ``endpoint_var``.

    All other variables and blank labels get a ``__<side><k>`` suffix, with
    ``k`` the smallest number that avoids every name in ``taken``.
    """
    text = node_map.rdf_pattern.raw_text
    names = _names_in(text)
    k = 0
    while True:
        suffix = f"__{side}{k}"
        renamed = {n + suffix for n in names if n != node_map.node_var}
        if not renamed & taken:
            break
        k += 1

    def rename(name, blank):
        if not blank and name == node_map.node_var:
            return endpoint_var
        return name + suffix

    result = rename_variables(text, rename)
    taken.update(renamed)
    return result


def merge_edge_pattern(definition: EdgeMapDef, node_maps, prefixes: Mapping[str, str]) -> CompiledMap:
    """Compile an edge map, importing the conditions of its endpoint node maps."""
    if not isinstance(node_maps, Mapping):
        node_maps = {m.label: m for m in node_maps}
    own_text = definition.rdf_pattern.raw_text
    taken = _names_in(own_text)
    parts = [own_text]
    for side, var, label in (("s", definition.src_var, definition.src_label),
                             ("d", definition.dst_var, definition.dst_label)):
        if label is None:
            continue
        if label not in node_maps:
            raise UndefinedNodeLabel(label)
        imported = _import_node_pattern(node_maps[label], var, side, taken)
        parts.append("{\n" + imported + "\n}")
    merged_text = "\n".join(parts)

    src = definition.rdf_pattern
    own = parse_pattern(own_text, prefixes, line_offset=src.line - 1 if src.line else 0)
    mandatory = mandatory_vars(own)
    head = [definition.src_var, definition.dst_var] + ([definition.edge_var] if definition.edge_var else [])
    key_vars = _dedupe(head + mandatory)
    bindings = _prop_bindings(definition.props, mandatory)
    projection = _dedupe(key_vars + [b.var for b in bindings])
    pattern = parse_pattern(merged_text, prefixes)
    return CompiledMap("edge", definition.edge_label, projection, key_vars, bindings,
                       pattern, merged_text, definition, dict(prefixes))


# -- term conversion ---------------------------------------------------------

def term_id(term: Term) -> str:
    if isinstance(term, IRI):
        return term.value
    if isinstance(term, BlankNode):
        return "_:" + term.label
    return term.lexical


def term_value(term: Term) -> PgValue:
    """Property value for an RDF term: integers and floats by datatype, else text."""
    if isinstance(term, Literal):
        if term.datatype in INTEGER_TYPES:
            try:
                number = int(term.lexical.strip())
            except ValueError:
                return term.lexical
            return number if INT64_MIN <= number <= INT64_MAX else term.lexical
        if term.datatype in FLOAT_TYPES:
            try:
                number = float(term.lexical.strip())
            except ValueError:
                return term.lexical
            return number if math.isfinite(number) else term.lexical
        return term.lexical
    return term_id(term)


def _add_value(props: Dict[str, List[PgValue]], seen: Dict[str, set], name: str, term: Term) -> None:
    value = term_value(term)
    marker = (type(value).__name__, value)
    bucket = seen.setdefault(name, set())
    if marker not in bucket:
        bucket.add(marker)
        props.setdefault(name, []).append(value)


# -- materialization ---------------------------------------------------------

def materialize_nodes(cmap: CompiledMap, solutions: Sequence[Solution]) -> List[PgNode]:
    node_var = cmap.key_vars[0]
    nodes: Dict[str, PgNode] = {}
    seen: Dict[str, Dict[str, set]] = {}
    for row in solutions:
        term = row.get(node_var)
        if term is None:
            continue
        nid = term_id(term)
        node = nodes.get(nid)
        if node is None:
            node = nodes[nid] = PgNode(nid, [cmap.label], {})
            seen[nid] = {}
        for b in cmap.prop_bindings:
            if b.var in row:
                _add_value(node.properties, seen[nid], b.name, row[b.var])
    return list(nodes.values())


def materialize_edges(cmap: CompiledMap, solutions: Sequence[Solution]) -> List[PgEdge]:
    origin = cmap.origin
    rest = cmap.key_vars[2:]
    edges: Dict[tuple, PgEdge] = {}
    seen: Dict[tuple, Dict[str, set]] = {}
    for row in solutions:
        s, d = row.get(origin.src_var), row.get(origin.dst_var)
        if s is None or d is None:
            continue
        src, dst = term_id(s), term_id(d)
        ends = (src, dst) if origin.directed or src <= dst else (dst, src)
        key = ends + tuple(row.get(v) for v in rest)
        edge = edges.get(key)
        if edge is None:
            edge = edges[key] = PgEdge(ends[0], ends[1], origin.directed, [cmap.label], {})
            seen[key] = {}
        for b in cmap.prop_bindings:
            if b.var in row:
                _add_value(edge.properties, seen[key], b.name, row[b.var])
    return list(edges.values())


# -- running -----------------------------------------------------------------

def compile_document(doc: G2GDocument) -> List[CompiledMap]:
    prefixes = doc.prefix_map
    node_maps = {m.label: m for m in doc.node_maps}
    compiled, failures = [], []
    for m in doc.node_maps:
        try:
            compiled.append(compile_node_map(m, prefixes))
        except G2GError as exc:
            failures.append((f"line {m.line}: {m.header()}", exc))
    for m in doc.edge_maps:
        try:
            compiled.append(merge_edge_pattern(m, node_maps, prefixes))
        except G2GError as exc:
            failures.append((f"line {m.line}: {m.header()}", exc))
    if failures:
        raise MappingError(failures)
    return compiled


def fetch_solutions(cmap: CompiledMap, source) -> List[Solution]:
    """Solutions of a compiled map restricted to its projection."""
    if isinstance(source, TripleStore):
        return project(evaluate(cmap.pattern, source), cmap.projection)
    query = build_select(cmap.prefixes, cmap.pattern_text, cmap.projection)
    return project(execute(source, query), cmap.projection)


def run(doc: G2GDocument, options: RunOptions,
        diagnostics: Optional[List[Diagnostic]] = None) -> PropertyGraph:
    """Execute every map of ``doc`` against ``options.source``."""
    compiled = compile_document(doc)

    def attempt(cmap):
        try:
            return fetch_solutions(cmap, options.source), None
        except G2GError as exc:
            return None, exc

    workers = max(1, options.parallelism)
    if workers == 1 or len(compiled) < 2:
        results = [attempt(c) for c in compiled]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(attempt, compiled))
    failures = [(c.describe(), exc) for c, (_, exc) in zip(compiled, results) if exc is not None]
    if failures:
        raise MappingError(failures)

    graph = PropertyGraph()
    for cmap, (rows, _) in zip(compiled, results):
        if cmap.kind == "node":
            for node in materialize_nodes(cmap, rows):
                graph.upsert_node(node)
    for cmap, (rows, _) in zip(compiled, results):
        if cmap.kind != "edge":
            continue
        origin = cmap.origin
        # labeled endpoints always materialize through the imported node map,
        # so a missing endpoint can only be created for an unlabeled side
        unlabeled = origin.src_label is None or origin.dst_label is None
        dropped = 0
        for edge in materialize_edges(cmap, rows):
            missing = [end for end in (edge.src, edge.dst) if end not in graph.nodes]
            if missing and unlabeled:
                for end in missing:
                    graph.upsert_node(PgNode(end))
            elif missing:
                dropped += 1
                continue
            graph.add_edge(edge)
        if dropped:
            msg = f"{dropped} :{cmap.label} edge(s) dropped because an endpoint is not a node"
            log.warning(msg)
            if diagnostics is not None:
                diagnostics.append(Diagnostic("DroppedEdges", cmap.label, msg, severity="warning",
                                              line=origin.line))
    if doc.edge_maps and not options.include_orphans:
        graph.remove_orphans()
    return graph
