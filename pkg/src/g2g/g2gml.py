"""G2GML documents: parsing, validation and pretty-printing.

A document is a list of ``PREFIX`` lines followed by mappings.  Each mapping
is a property-graph pattern header written at column 0, followed by an
indented SPARQL group-graph-pattern body::

    PREFIX : <http://example.org/>
    (p:person {name:n})
        ?p a :Person .
        ?p :name ?n .
    (p1:person)-[:supervised_by]->(p2:person)
        ?p1 :supervised_by ?p2 .
"""

from __future__ import annotations

import re
import textwrap
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import DanglingIndent, EmptyPattern, ParseError
from .lexer import rename_variables, tokenize

_NAME = r"[^\W\d]\w*"
_VAR = rf"\??{_NAME}"
_PROPS = r"\{[^{}]*\}"

_PREFIX_RE = re.compile(
    r"PREFIX\s+(?P<name>(?:[^\W\d_][\w.\-]*)?):\s*<(?P<iri>[^<>\s]*)>\s*(?:#.*)?$",
    re.IGNORECASE,
)
_NODE_RE = re.compile(
    rf"\(\s*(?P<var>{_VAR})\s*:\s*(?P<label>\w+)\s*(?P<props>{_PROPS})?\s*\)$"
)
_EDGE_RE = re.compile(
    rf"\(\s*(?P<src>{_VAR})\s*(?::\s*(?P<src_label>\w+)\s*)?\)"
    rf"\s*-\s*\[\s*(?P<evar>{_VAR})?\s*:\s*(?P<elabel>\w+)\s*(?P<props>{_PROPS})?\s*\]"
    rf"\s*(?P<arrow>->|-)\s*"
    rf"\(\s*(?P<dst>{_VAR})\s*(?::\s*(?P<dst_label>\w+)\s*)?\)$"
)
_PROP_RE = re.compile(rf"\s*(?P<name>\w+)\s*:\s*(?P<var>{_VAR})\s*")


@dataclass(frozen=True)
class RdfPatternSrc:
    raw_text: str
    variables: frozenset
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class NodeMapDef:
    node_var: str
    label: str
    props: Tuple[Tuple[str, str], ...]
    rdf_pattern: RdfPatternSrc
    line: int = field(default=0, compare=False)

    def header(self) -> str:
        return f"({self.node_var}:{self.label}{_format_props(self.props)})"


@dataclass(frozen=True)
class EdgeMapDef:
    src_var: str
    src_label: Optional[str]
    dst_var: str
    dst_label: Optional[str]
    edge_var: Optional[str]
    edge_label: str
    directed: bool
    props: Tuple[Tuple[str, str], ...]
    rdf_pattern: RdfPatternSrc
    line: int = field(default=0, compare=False)

    def header(self) -> str:
        def end(var, label):
            return f"({var}:{label})" if label else f"({var})"
        arrow = "->" if self.directed else "-"
        return (f"{end(self.src_var, self.src_label)}"
                f"-[{self.edge_var or ''}:{self.edge_label}{_format_props(self.props)}]"
                f"{arrow}{end(self.dst_var, self.dst_label)}")


@dataclass
class G2GDocument:
    prefixes: List[Tuple[str, str]] = field(default_factory=list)
    node_maps: List[NodeMapDef] = field(default_factory=list)
    edge_maps: List[EdgeMapDef] = field(default_factory=list)

    @property
    def prefix_map(self):
        return dict(self.prefixes)

    def node_map(self, label: str) -> Optional[NodeMapDef]:
        for m in self.node_maps:
            if m.label == label:
                return m
        return None

    def to_text(self) -> str:
        """Pretty-print; the output parses back to an equal document."""
        out = [f"PREFIX {name}: <{iri}>" for name, iri in self.prefixes]
        for m in [*self.node_maps, *self.edge_maps]:
            out.append(m.header())
            out.extend(("    " + line) if line.strip() else "" for line in m.rdf_pattern.raw_text.split("\n"))
        return "\n".join(out) + "\n"


def _format_props(props) -> str:
    if not props:
        return ""
    return " {" + ", ".join(f"{name}:{var}" for name, var in props) + "}"


def _strip_comment(line: str) -> str:
    """Cut a trailing ``#`` comment that is not inside a quoted string."""
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _parse_props(text: Optional[str], lineno: int) -> Tuple[Tuple[str, str], ...]:
    if not text:
        return ()
    inner = text[1:-1]
    props = []
    for item in inner.split(","):
        m = _PROP_RE.fullmatch(item)
        if not m:
            raise ParseError(f"malformed property {item.strip()!r} (expected name:variable)", lineno)
        props.append((m["name"], m["var"].lstrip("?")))
    return tuple(props)


def _var(text: Optional[str]) -> Optional[str]:
    return text.lstrip("?") if text else None


def _parse_header(text: str, lineno: int):
    """Return a partially built map (pattern filled in later)."""
    if "[" in text or "]" in text:
        m = _EDGE_RE.fullmatch(text)
        if not m:
            raise ParseError(f"malformed edge pattern {text!r}", lineno)
        return dict(
            kind="edge",
            src_var=_var(m["src"]), src_label=m["src_label"],
            dst_var=_var(m["dst"]), dst_label=m["dst_label"],
            edge_var=_var(m["evar"]), edge_label=m["elabel"],
            directed=m["arrow"] == "->",
            props=_parse_props(m["props"], lineno),
            line=lineno,
        )
    m = _NODE_RE.fullmatch(text)
    if not m:
        raise ParseError(f"malformed node pattern {text!r}", lineno)
    return dict(kind="node", node_var=_var(m["var"]), label=m["label"],
                props=_parse_props(m["props"], lineno), line=lineno)


def _build_pattern(body: List[str], first_line: int) -> RdfPatternSrc:
    while body and not body[-1].strip():
        body.pop()
    raw = textwrap.dedent("\n".join(body))
    if "$" in raw:
        raw = rename_variables(raw, lambda name, blank: name)
    names = [tok.value for tok in tokenize(raw, first_line - 1) if tok.kind == "VAR"]
    return RdfPatternSrc(raw, frozenset(names), first_line)


def parse_g2gml(text: str) -> G2GDocument:
    doc = G2GDocument()
    header = None
    body: List[str] = []
    body_start = 0

    def finish():
        if header is None:
            return
        if not body:
            raise EmptyPattern("mapping has no indented RDF pattern", header["line"])
        pattern = _build_pattern(body, body_start)
        kind = header.pop("kind")
        if kind == "node":
            doc.node_maps.append(NodeMapDef(rdf_pattern=pattern, **header))
        else:
            doc.edge_maps.append(EdgeMapDef(rdf_pattern=pattern, **header))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if not stripped:
            if body:
                body.append("")
            continue
        if line[0] in " \t":
            if header is None:
                if stripped.startswith("#"):
                    continue
                raise DanglingIndent("indented text before any mapping header", lineno)
            if not body:
                body_start = lineno
            body.append(line)
            continue
        content = _strip_comment(line).strip()
        if not content:
            # column-0 comment; keep line numbering of an open body intact
            if body:
                body.append("")
            continue
        if content[:6].upper() == "PREFIX":
            if header is not None or doc.node_maps or doc.edge_maps:
                raise ParseError("PREFIX declarations must precede all mappings", lineno)
            m = _PREFIX_RE.match(line.strip())
            if not m:
                raise ParseError("malformed PREFIX declaration", lineno)
            doc.prefixes.append((m["name"], m["iri"]))
            continue
        if not content.startswith("("):
            raise ParseError(f"expected PREFIX or a mapping header, found {content!r}", lineno)
        finish()
        header = _parse_header(content, lineno)
        body = []
    finish()
    return doc


def read_g2gml(path) -> G2GDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_g2gml(fh.read())


# -- validation --------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: str
    message: str = field(default="", compare=False)
    severity: str = "error"
    line: int = field(default=0, compare=False)

    def __str__(self):
        where = f"line {self.line}: " if self.line else ""
        return f"{where}{self.severity}: {self.code}({self.subject}) {self.message}".rstrip()


def _used_prefixes(doc: G2GDocument) -> set:
    used = set()
    for m in [*doc.node_maps, *doc.edge_maps]:
        for tok in tokenize(m.rdf_pattern.raw_text):
            if tok.kind == "PNAME":
                used.add(tok.value.partition(":")[0])
    return used


def validate(doc: G2GDocument) -> List[Diagnostic]:
    """Check label uniqueness, label references and header variables."""
    diags: List[Diagnostic] = []
    labels = set()
    for m in doc.node_maps:
        if m.label in labels:
            diags.append(Diagnostic("DuplicateLabel", m.label,
                                    f"node map label {m.label!r} is defined more than once", line=m.line))
        labels.add(m.label)
        for var in [m.node_var] + [v for _, v in m.props]:
            if var not in m.rdf_pattern.variables:
                diags.append(Diagnostic("MissingVariable", var,
                                        f"?{var} does not occur in the pattern of ({m.node_var}:{m.label})",
                                        line=m.line))
    for m in doc.edge_maps:
        for label in (m.src_label, m.dst_label):
            if label is not None and label not in labels:
                diags.append(Diagnostic("UndefinedNodeLabel", label,
                                        f"edge map :{m.edge_label} references undefined node label {label!r}",
                                        line=m.line))
        if m.src_var == m.dst_var:
            diags.append(Diagnostic("SameEndpointVariable", m.src_var,
                                    "source and destination use the same variable", line=m.line))
        header_vars = [m.src_var, m.dst_var] + ([m.edge_var] if m.edge_var else []) + [v for _, v in m.props]
        for var in header_vars:
            if var not in m.rdf_pattern.variables:
                diags.append(Diagnostic("MissingVariable", var,
                                        f"?{var} does not occur in the pattern of :{m.edge_label}",
                                        line=m.line))
    used = _used_prefixes(doc)
    for name, _ in doc.prefixes:
        if name not in used:
            diags.append(Diagnostic("UnusedPrefix", name, f"prefix {name!r} is never used",
                                    severity="warning"))
    return diags


def errors_only(diags: List[Diagnostic]) -> List[Diagnostic]:
    return [d for d in diags if d.severity == "error"]
