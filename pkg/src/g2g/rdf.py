"""RDF terms, a Turtle-subset reader and an indexed in-memory triple store."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .errors import ParseError, UndefinedPrefix, UnsupportedFeature
from .lexer import Token, TokenStream, tokenize

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
XSD = "http://www.w3.org/2001/XMLSchema#"
OWL = "http://www.w3.org/2002/07/owl#"

RDF_TYPE = RDF + "type"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
RDF_LANGSTRING = RDF + "langString"

INTEGER_TYPES = frozenset(XSD + t for t in (
    "integer", "int", "long", "short", "byte", "nonNegativeInteger", "nonPositiveInteger",
    "positiveInteger", "negativeInteger", "unsignedLong", "unsignedInt", "unsignedShort",
    "unsignedByte",
))
FLOAT_TYPES = frozenset({XSD_DECIMAL, XSD_DOUBLE, XSD + "float"})
NUMERIC_TYPES = INTEGER_TYPES | FLOAT_TYPES


@dataclass(frozen=True)
class IRI:
    value: str

    def n3(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class BlankNode:
    label: str

    def n3(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    lang: Optional[str] = None
    datatype: Optional[str] = None

    def __post_init__(self):
        if self.lang is not None and self.datatype is not None:
            raise ValueError("a literal cannot have both a language tag and a datatype")
        if self.lang is not None:
            object.__setattr__(self, "lang", self.lang.lower())
        if self.datatype in (XSD_STRING, RDF_LANGSTRING):
            object.__setattr__(self, "datatype", None)

    @property
    def is_numeric(self) -> bool:
        return self.datatype in NUMERIC_TYPES

    def n3(self) -> str:
        escaped = (self.lexical.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\r", "\\r"))
        text = f'"{escaped}"'
        if self.lang:
            return f"{text}@{self.lang}"
        if self.datatype:
            return f"{text}^^<{self.datatype}>"
        return text


Term = Union[IRI, BlankNode, Literal]


@dataclass(frozen=True)
class Triple:
    s: Union[IRI, BlankNode]
    p: IRI
    o: Term

    def __iter__(self):
        return iter((self.s, self.p, self.o))


def term_sort_key(term) -> Tuple:
    """Total order over terms: blank nodes, then IRIs, then literals."""
    if term is None:
        return (0,)
    if isinstance(term, BlankNode):
        return (1, term.label)
    if isinstance(term, IRI):
        return (2, term.value)
    return (3, term.lexical, term.lang or "", term.datatype or "")


# -- Turtle ------------------------------------------------------------------

class _TurtleParser:
    def __init__(self, text: str):
        self.stream = TokenStream(tokenize(text))
        self.prefixes: Dict[str, str] = {}
        self.triples: List[Triple] = []
        used = {tok.value[2:] for tok in self.stream.tokens if tok.kind == "BNODE"}
        self._fresh = (f"g{n}" for n in itertools.count() if f"g{n}" not in used)

    def error(self, tok: Optional[Token], reason: str) -> ParseError:
        if tok is None:
            return ParseError(reason)
        return ParseError(reason, tok.line, tok.column)

    def parse(self) -> List[Triple]:
        s = self.stream
        while not s.at_end():
            tok = s.peek()
            if tok.kind == "AT" and tok.value == "prefix":
                s.next()
                self._prefix_decl(tok)
                s.expect_punct(".")
            elif tok.kind == "WORD" and tok.value.upper() == "PREFIX":
                s.next()
                self._prefix_decl(tok)
            elif (tok.kind == "AT" and tok.value == "base") or (tok.kind == "WORD" and tok.value.upper() == "BASE"):
                raise UnsupportedFeature("base IRI declarations", tok.line, tok.column)
            else:
                self._triples()
                s.expect_punct(".")
        return self.triples

    def _prefix_decl(self, at: Token) -> None:
        name = self.stream.next()
        if name.kind != "PNAME" or not name.value.endswith(":") or name.value.count(":") != 1:
            raise self.error(name, "expected a prefix name such as 'ex:'")
        iri = self.stream.next()
        if iri.kind != "IRI":
            raise self.error(iri, "expected an IRI in angle brackets")
        self.prefixes[name.value[:-1]] = iri.value

    def _resolve(self, tok: Token) -> IRI:
        prefix, _, local = tok.value.partition(":")
        if prefix not in self.prefixes:
            raise UndefinedPrefix(prefix, tok.line, tok.column)
        return IRI(self.prefixes[prefix] + local.replace("\\", ""))

    def _fresh_bnode(self) -> BlankNode:
        return BlankNode(next(self._fresh))

    def _triples(self) -> None:
        s = self.stream
        if s.is_punct("["):
            subject = self._blank_property_list()
            if s.is_punct("."):
                return
        else:
            subject = self._subject()
        self._predicate_object_list(subject)

    def _subject(self):
        tok = self.stream.next()
        if tok.kind == "IRI":
            return IRI(tok.value)
        if tok.kind == "PNAME":
            return self._resolve(tok)
        if tok.kind == "BNODE":
            return BlankNode(tok.value[2:])
        if tok.kind == "PUNCT" and tok.value == "(":
            raise UnsupportedFeature("RDF collections", tok.line, tok.column)
        raise self.error(tok, f"expected a subject, found {tok.value!r}")

    def _blank_property_list(self) -> BlankNode:
        s = self.stream
        s.expect_punct("[")
        node = self._fresh_bnode()
        if not s.accept_punct("]"):
            self._predicate_object_list(node)
            s.expect_punct("]")
        return node

    def _verb(self) -> IRI:
        tok = self.stream.next()
        if tok.kind == "WORD" and tok.value == "a":
            return IRI(RDF_TYPE)
        if tok.kind == "IRI":
            return IRI(tok.value)
        if tok.kind == "PNAME":
            return self._resolve(tok)
        raise self.error(tok, f"expected a predicate, found {tok.value!r}")

    def _predicate_object_list(self, subject) -> None:
        s = self.stream
        while True:
            predicate = self._verb()
            while True:
                self.triples.append(Triple(subject, predicate, self._object()))
                if not s.accept_punct(","):
                    break
            if not s.accept_punct(";"):
                return
            while s.accept_punct(";"):
                pass
            if s.is_punct(".") or s.is_punct("]"):
                return

    def _object(self):
        s = self.stream
        if s.is_punct("["):
            return self._blank_property_list()
        tok = s.next()
        if tok.kind == "IRI":
            return IRI(tok.value)
        if tok.kind == "PNAME":
            return self._resolve(tok)
        if tok.kind == "BNODE":
            return BlankNode(tok.value[2:])
        if tok.kind == "STRING":
            nxt = s.peek()
            if nxt is not None and nxt.kind == "AT":
                s.next()
                return Literal(tok.value, lang=nxt.value)
            if s.accept_punct("^^"):
                dt = s.next()
                if dt.kind == "IRI":
                    return Literal(tok.value, datatype=dt.value)
                if dt.kind == "PNAME":
                    return Literal(tok.value, datatype=self._resolve(dt).value)
                raise self.error(dt, "expected a datatype IRI")
            return Literal(tok.value)
        if tok.kind == "INTEGER":
            return Literal(tok.value, datatype=XSD_INTEGER)
        if tok.kind == "DECIMAL":
            return Literal(tok.value, datatype=XSD_DECIMAL)
        if tok.kind == "DOUBLE":
            return Literal(tok.value, datatype=XSD_DOUBLE)
        if tok.kind == "WORD" and tok.value in ("true", "false"):
            return Literal(tok.value, datatype=XSD_BOOLEAN)
        if tok.kind == "PUNCT" and tok.value == "(":
            raise UnsupportedFeature("RDF collections", tok.line, tok.column)
        raise self.error(tok, f"expected an object, found {tok.value!r}")


def parse_turtle(text: str) -> List[Triple]:
    """Parse the Turtle subset used by typical desk-scale data files.

    Anonymous blank nodes get labels ``g0``, ``g1``, ... skipping any
    label the document itself uses.
    """
    return _TurtleParser(text).parse()


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return "".join(f"{t.s.n3()} {t.p.n3()} {t.o.n3()} .\n" for t in triples)


# -- store -------------------------------------------------------------------

class TripleStore:
    """Set of triples with SPO, POS and OSP indexes.

    Iteration order inside each index is insertion order, so results are
    reproducible for a given input file.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._spo: Dict = {}
        self._pos: Dict = {}
        self._osp: Dict = {}
        self._triples: Dict[Triple, None] = {}
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> bool:
        if triple in self._triples:
            return False
        if not isinstance(triple.p, IRI):
            raise ValueError("predicate must be an IRI")
        self._triples[triple] = None
        s, p, o = triple.s, triple.p, triple.o
        self._spo.setdefault(s, {}).setdefault(p, {})[o] = triple
        self._pos.setdefault(p, {}).setdefault(o, {})[s] = triple
        self._osp.setdefault(o, {}).setdefault(s, {})[p] = triple
        return True

    def __len__(self):
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple) -> bool:
        return triple in self._triples

    def terms(self) -> List[Term]:
        seen: Dict[Term, None] = {}
        for t in self._triples:
            for term in t:
                seen.setdefault(term, None)
        return list(seen)

    def match(self, s=None, p=None, o=None) -> Iterator[Triple]:
        """Triples matching the bound positions; ``None`` is a wildcard."""
        if s is not None:
            by_p = self._spo.get(s, {})
            if p is not None:
                by_o = by_p.get(p, {})
                if o is not None:
                    if o in by_o:
                        yield by_o[o]
                    return
                yield from by_o.values()
                return
            if o is not None:
                yield from self._osp.get(o, {}).get(s, {}).values()
                return
            for by_o in by_p.values():
                yield from by_o.values()
            return
        if p is not None:
            by_o = self._pos.get(p, {})
            if o is not None:
                yield from by_o.get(o, {}).values()
                return
            for by_s in by_o.values():
                yield from by_s.values()
            return
        if o is not None:
            for by_p in self._osp.get(o, {}).values():
                yield from by_p.values()
            return
        yield from self._triples


def load_turtle(text: str) -> TripleStore:
    return TripleStore(parse_turtle(text))
