"""SELECT query generation and execution against a SPARQL 1.1 endpoint."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Sequence
from urllib.parse import urlencode, urlparse

import requests

from .errors import EndpointTimeout, HttpError, NetworkError, ResultParseError
from .lexer import tokenize
from .rdf import IRI, BlankNode, Literal, Term
from .sparql import DEFAULT_PREFIXES, Solution

log = logging.getLogger(__name__)

RESULTS_JSON = "application/sparql-results+json"
# Beyond this many URL-encoded bytes, "auto" switches from GET to POST.
MAX_GET_LENGTH = 2000


@dataclass
class EndpointConfig:
    url: str
    timeout: float = 60.0
    method: str = "auto"
    page_size: Optional[int] = None

    def __post_init__(self):
        scheme = urlparse(self.url).scheme
        if scheme not in ("http", "https"):
            raise ValueError(f"endpoint URL must be http or https, got {self.url!r}")
        if self.method not in ("auto", "get", "post"):
            raise ValueError(f"unknown HTTP method mode {self.method!r}")
        if self.page_size is not None and self.page_size < 1:
            raise ValueError("page_size must be positive")


def prefixes_used(text: str) -> List[str]:
    names: List[str] = []
    for tok in tokenize(text):
        if tok.kind == "PNAME":
            name = tok.value.partition(":")[0]
            if name not in names:
                names.append(name)
    return names


def build_select(prefixes: Mapping[str, str], pattern_text: str, projection: Sequence[str],
                 limit: Optional[int] = None, offset: Optional[int] = None) -> str:
    """Build ``PREFIX... SELECT ?v... WHERE { pattern }``.

    No DISTINCT: repeated solutions matter when values are grouped later.
    Well-known prefixes the pattern uses but the document omits are
    declared too, so endpoints without predefined prefixes still accept it.
    """
    decls = dict(prefixes)
    for name in prefixes_used(pattern_text):
        if name not in decls and name in DEFAULT_PREFIXES:
            decls[name] = DEFAULT_PREFIXES[name]
    lines = [f"PREFIX {name}: <{iri}>" for name, iri in decls.items()]
    lines.append("SELECT " + " ".join(f"?{v}" for v in projection))
    body = pattern_text.strip()
    if "\n" in body or "#" in body:
        lines.append("WHERE {")
        lines.extend(body.split("\n"))
        lines.append("}")
    else:
        lines.append(f"WHERE {{ {body} }}")
    if limit is not None:
        lines.append(f"LIMIT {limit}")
    if offset:
        lines.append(f"OFFSET {offset}")
    return "\n".join(lines)


def _paged(query: str, limit: int, offset: int) -> str:
    tail = f"\nLIMIT {limit}"
    if offset:
        tail += f"\nOFFSET {offset}"
    return query + tail


# -- results format ----------------------------------------------------------

def decode_term(obj) -> Term:
    if not isinstance(obj, dict) or "type" not in obj or "value" not in obj:
        raise ResultParseError(f"malformed RDF term {obj!r}")
    kind, value = obj["type"], obj["value"]
    if kind == "uri":
        return IRI(value)
    if kind == "bnode":
        return BlankNode(value)
    if kind in ("literal", "typed-literal"):
        lang = obj.get("xml:lang")
        datatype = obj.get("datatype")
        try:
            return Literal(value, lang=lang, datatype=None if lang else datatype)
        except ValueError as exc:
            raise ResultParseError(str(exc)) from None
    raise ResultParseError(f"unknown term type {kind!r}")


def encode_term(term: Term) -> dict:
    if isinstance(term, IRI):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    out = {"type": "literal", "value": term.lexical}
    if term.lang:
        out["xml:lang"] = term.lang
    elif term.datatype:
        out["datatype"] = term.datatype
    return out


def parse_results(doc) -> List[Solution]:
    """Decode an ``application/sparql-results+json`` document."""
    try:
        bindings = doc["results"]["bindings"]
    except (KeyError, TypeError):
        raise ResultParseError("missing results.bindings") from None
    if not isinstance(bindings, list):
        raise ResultParseError("results.bindings must be a list")
    rows = []
    for row in bindings:
        if not isinstance(row, dict):
            raise ResultParseError("binding rows must be objects")
        rows.append({name: decode_term(obj) for name, obj in row.items()})
    return rows


def results_to_json(variables: Sequence[str], rows: Iterable[Solution]) -> dict:
    return {
        "head": {"vars": list(variables)},
        "results": {"bindings": [{k: encode_term(v) for k, v in row.items()} for row in rows]},
    }


# -- HTTP --------------------------------------------------------------------

def _request(config: EndpointConfig, query: str, session: Optional[requests.Session]) -> List[Solution]:
    http = session or requests
    headers = {"Accept": RESULTS_JSON}
    use_get = config.method == "get" or (
        config.method == "auto" and len(urlencode({"query": query})) <= MAX_GET_LENGTH)
    try:
        if use_get:
            resp = http.get(config.url, params={"query": query}, headers=headers, timeout=config.timeout)
        else:
            resp = http.post(config.url, data={"query": query}, headers=headers, timeout=config.timeout)
    except requests.Timeout as exc:
        raise EndpointTimeout(f"no answer from {config.url} within {config.timeout}s") from exc
    except requests.RequestException as exc:
        raise NetworkError(exc) from exc
    if resp.status_code >= 400:
        raise HttpError(resp.status_code, resp.text[:500])
    try:
        doc = json.loads(resp.content.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ResultParseError(f"response is not SPARQL results JSON: {exc}") from None
    return parse_results(doc)


def execute(config: EndpointConfig, query: str,
            session: Optional[requests.Session] = None) -> List[Solution]:
    """Run a SELECT query and return its solutions.

    With ``config.page_size`` set, LIMIT/OFFSET pages are fetched until a
    short page comes back.  There is no retry.
    """
    if not config.page_size:
        return _request(config, query, session)
    rows: List[Solution] = []
    offset = 0
    while True:
        page = _request(config, _paged(query, config.page_size, offset), session)
        rows.extend(page)
        log.debug("fetched %d rows at offset %d", len(page), offset)
        if len(page) < config.page_size:
            return rows
        offset += config.page_size
