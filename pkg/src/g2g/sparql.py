"""Parser and evaluator for the SPARQL graph-pattern subset used in mappings.

Supported inside a group: triple blocks with ``;`` and ``,``, ``a``,
sequence paths ``p1/p2``, ``[]`` blank nodes, ``OPTIONAL {}``, nested
``{}`` groups, ``FILTER(...)`` with ``=``/``!=``/``lang()``/``str()``, and
``BIND(... AS ?v)``.  Anything else raises :class:`UnsupportedFeature`.

Evaluation follows the SPARQL algebra: consecutive triple patterns are
joined left to right using the store indexes, OPTIONAL is a left join whose
condition is the optional group's own filters, BIND extends rows, and a
group's filters are applied last.  Duplicate solutions are kept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ParseError, UndefinedPrefix, UnsupportedFeature
from .lexer import Token, TokenStream, tokenize
from .rdf import (
    IRI, OWL, RDF, RDF_TYPE, RDFS, XSD, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER,
    Literal, Term, TripleStore, INTEGER_TYPES, FLOAT_TYPES,
)

# Prefixes most public endpoints predefine; used when a document omits them.
DEFAULT_PREFIXES = {"rdf": RDF, "rdfs": RDFS, "xsd": XSD, "owl": OWL}

HIDDEN = "_:"

Solution = Dict[str, Term]


@dataclass(frozen=True)
class Var:
    """A query variable.  Names starting with ``_:`` are anonymous (blank nodes)."""
    name: str

    @property
    def hidden(self) -> bool:
        return self.name.startswith(HIDDEN)


@dataclass(frozen=True)
class Path:
    steps: Tuple[IRI, ...]


@dataclass(frozen=True)
class TriplePattern:
    s: Union[Var, Term]
    p: Union[Var, IRI, Path]
    o: Union[Var, Term]


@dataclass(frozen=True)
class Const:
    term: Term


@dataclass(frozen=True)
class Lang:
    arg: "Expr"


@dataclass(frozen=True)
class Str:
    arg: "Expr"


@dataclass(frozen=True)
class Eq:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neq:
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Const, Lang, Str, Eq, Neq]


@dataclass(frozen=True)
class Filter:
    expr: Expr


@dataclass(frozen=True)
class Bind:
    expr: Expr
    var: Var


@dataclass(frozen=True)
class OptionalGroup:
    pattern: "GraphPattern"


@dataclass(frozen=True)
class Group:
    pattern: "GraphPattern"


@dataclass(frozen=True)
class GraphPattern:
    elements: Tuple = ()

    def triple_patterns(self, include_optional: bool = True) -> List[TriplePattern]:
        """All triple patterns, descending into nested groups."""
        found = []
        for el in self.elements:
            if isinstance(el, TriplePattern):
                found.append(el)
            elif isinstance(el, Group):
                found.extend(el.pattern.triple_patterns(include_optional))
            elif isinstance(el, OptionalGroup) and include_optional:
                found.extend(el.pattern.triple_patterns(include_optional))
        return found


_UNSUPPORTED_WORDS = {
    "UNION", "MINUS", "GRAPH", "SERVICE", "VALUES", "SELECT", "CONSTRUCT", "ASK", "DESCRIBE",
    "EXISTS", "NOT", "GROUP", "ORDER", "HAVING", "BOUND", "REGEX", "IF", "COALESCE",
    "CONTAINS", "STRSTARTS", "LCASE", "UCASE", "DATATYPE", "ISIRI", "ISURI", "ISLITERAL",
    "ISBLANK", "LANGMATCHES", "SAMETERM", "CONCAT", "STRLEN", "IN",
}


def expr_vars(expr) -> List[str]:
    if isinstance(expr, Var):
        return [expr.name]
    if isinstance(expr, Const):
        return []
    if isinstance(expr, (Lang, Str)):
        return expr_vars(expr.arg)
    return expr_vars(expr.left) + expr_vars(expr.right)


def pattern_vars(pattern: GraphPattern, include_hidden: bool = False) -> List[str]:
    """Variables of ``pattern`` in order of first occurrence."""
    names: List[str] = []

    def add(name):
        if name not in names and (include_hidden or not name.startswith(HIDDEN)):
            names.append(name)

    def walk(gp):
        for el in gp.elements:
            if isinstance(el, TriplePattern):
                for t in (el.s, el.p, el.o):
                    if isinstance(t, Var):
                        add(t.name)
            elif isinstance(el, (OptionalGroup, Group)):
                walk(el.pattern)
            elif isinstance(el, Filter):
                for n in expr_vars(el.expr):
                    add(n)
            elif isinstance(el, Bind):
                for n in expr_vars(el.expr):
                    add(n)
                add(el.var.name)

    walk(pattern)
    return names


def mandatory_vars(pattern: GraphPattern) -> List[str]:
    """Variables with at least one occurrence outside every OPTIONAL block."""
    names: List[str] = []

    def walk(gp):
        for el in gp.elements:
            if isinstance(el, TriplePattern):
                found = [t.name for t in (el.s, el.p, el.o) if isinstance(t, Var)]
            elif isinstance(el, Group):
                walk(el.pattern)
                continue
            elif isinstance(el, Filter):
                found = expr_vars(el.expr)
            elif isinstance(el, Bind):
                found = expr_vars(el.expr) + [el.var.name]
            else:
                continue
            for n in found:
                if n not in names and not n.startswith(HIDDEN):
                    names.append(n)

    walk(pattern)
    return names


# -- parsing -----------------------------------------------------------------

class _PatternParser:
    def __init__(self, tokens: List[Token], prefixes: Mapping[str, str]):
        self.stream = TokenStream(tokens)
        self.prefixes = dict(prefixes)
        used = {tok.value[2:] for tok in tokens if tok.kind == "BNODE"}
        self._anon = (f"b{n}" for n in itertools.count() if f"b{n}" not in used)

    def error(self, tok, reason):
        return ParseError(reason, tok.line, tok.column) if tok else ParseError(reason)

    def resolve(self, tok: Token) -> IRI:
        prefix, _, local = tok.value.partition(":")
        if prefix in self.prefixes:
            return IRI(self.prefixes[prefix] + local)
        if prefix in DEFAULT_PREFIXES:
            return IRI(DEFAULT_PREFIXES[prefix] + local)
        raise UndefinedPrefix(prefix, tok.line, tok.column)

    def fresh_anon(self) -> Var:
        return Var(HIDDEN + next(self._anon))

    # group body up to a closing '}' (or end of input at top level)
    def group(self, top: bool = False) -> GraphPattern:
        s = self.stream
        elements: List = []
        in_scope: set = set()
        while True:
            tok = s.peek()
            if tok is None:
                if top:
                    break
                raise ParseError("missing '}'")
            if tok.kind == "PUNCT" and tok.value == "}":
                if top:
                    raise self.error(tok, "unbalanced '}'")
                break
            if tok.kind == "PUNCT" and tok.value == ".":
                s.next()
                continue
            if tok.kind == "PUNCT" and tok.value == "{":
                s.next()
                inner = self.group()
                s.expect_punct("}")
                if s.is_word("UNION"):
                    bad = s.peek()
                    raise UnsupportedFeature("UNION", bad.line, bad.column)
                elements.append(Group(inner))
                in_scope.update(pattern_vars(inner))
                continue
            if tok.kind == "WORD":
                word = tok.value.upper()
                if word == "OPTIONAL":
                    s.next()
                    s.expect_punct("{")
                    inner = self.group()
                    s.expect_punct("}")
                    elements.append(OptionalGroup(inner))
                    in_scope.update(pattern_vars(inner))
                    continue
                if word == "FILTER":
                    s.next()
                    s.expect_punct("(")
                    expr = self.expression()
                    s.expect_punct(")")
                    elements.append(Filter(expr))
                    continue
                if word == "BIND":
                    s.next()
                    s.expect_punct("(")
                    expr = self.expression()
                    as_tok = s.next()
                    if as_tok.kind != "WORD" or as_tok.value.upper() != "AS":
                        raise self.error(as_tok, "expected AS in BIND")
                    var_tok = s.next()
                    if var_tok.kind != "VAR":
                        raise self.error(var_tok, "expected a variable after AS")
                    s.expect_punct(")")
                    if var_tok.value in in_scope:
                        raise self.error(var_tok, f"BIND target ?{var_tok.value} is already in scope")
                    elements.append(Bind(expr, Var(var_tok.value)))
                    in_scope.add(var_tok.value)
                    continue
                if word in _UNSUPPORTED_WORDS:
                    raise UnsupportedFeature(word, tok.line, tok.column)
                if tok.value != "a":
                    raise self.error(tok, f"unexpected keyword {tok.value!r}")
            start = len(elements)
            self.triples_block(elements)
            for el in elements[start:]:
                in_scope.update(t.name for t in (el.s, el.p, el.o) if isinstance(t, Var))
            if not (s.at_end() or s.is_punct(".") or s.is_punct("}")) and not self._starts_element():
                bad = s.peek()
                raise self.error(bad, f"expected '.' after triple, found {bad.value!r}")
        return GraphPattern(tuple(elements))

    def _starts_element(self) -> bool:
        tok = self.stream.peek()
        return tok is not None and (
            (tok.kind == "WORD" and tok.value.upper() in ("OPTIONAL", "FILTER", "BIND"))
            or (tok.kind == "PUNCT" and tok.value == "{")
        )

    def triples_block(self, out: List) -> None:
        s = self.stream
        if s.is_punct("["):
            subject = self.blank_property_list(out)
            if s.is_punct(".") or s.is_punct("}") or s.at_end():
                return
        else:
            subject = self.term(allow_literal=True)
        self.predicate_object_list(subject, out)

    def blank_property_list(self, out: List) -> Var:
        s = self.stream
        s.expect_punct("[")
        node = self.fresh_anon()
        if not s.accept_punct("]"):
            self.predicate_object_list(node, out)
            s.expect_punct("]")
        return node

    def predicate_object_list(self, subject, out: List) -> None:
        s = self.stream
        while True:
            verb = self.verb()
            while True:
                obj = self.blank_property_list(out) if s.is_punct("[") else self.term(allow_literal=True)
                out.append(TriplePattern(subject, verb, obj))
                if not s.accept_punct(","):
                    break
            if not s.accept_punct(";"):
                return
            while s.accept_punct(";"):
                pass
            if s.is_punct(".") or s.is_punct("]") or s.is_punct("}") or s.at_end() or self._starts_element():
                return

    def verb(self):
        s = self.stream
        tok = s.peek()
        if tok is not None and tok.kind == "VAR":
            s.next()
            return Var(tok.value)
        steps = [self.path_step()]
        while s.accept_punct("/"):
            steps.append(self.path_step())
        nxt = s.peek()
        if nxt is not None and nxt.kind == "PUNCT" and nxt.value in ("|", "*", "+", "?", "^"):
            raise UnsupportedFeature(f"property path operator {nxt.value!r}", nxt.line, nxt.column)
        return steps[0] if len(steps) == 1 else Path(tuple(steps))

    def path_step(self) -> IRI:
        tok = self.stream.next()
        if tok.kind == "WORD" and tok.value == "a":
            return IRI(RDF_TYPE)
        if tok.kind == "IRI":
            return IRI(tok.value)
        if tok.kind == "PNAME":
            return self.resolve(tok)
        if tok.kind == "PUNCT" and tok.value in ("^", "!", "("):
            raise UnsupportedFeature(f"property path operator {tok.value!r}", tok.line, tok.column)
        raise self.error(tok, f"expected a predicate, found {tok.value!r}")

    def term(self, allow_literal: bool):
        s = self.stream
        tok = s.next()
        if tok.kind == "VAR":
            return Var(tok.value)
        if tok.kind == "IRI":
            return IRI(tok.value)
        if tok.kind == "PNAME":
            return self.resolve(tok)
        if tok.kind == "BNODE":
            return Var(HIDDEN + tok.value[2:])
        if allow_literal:
            lit = self.literal(tok)
            if lit is not None:
                return lit
        if tok.kind == "PUNCT" and tok.value == "(":
            raise UnsupportedFeature("RDF collections", tok.line, tok.column)
        raise self.error(tok, f"expected a term, found {tok.value!r}")

    def literal(self, tok: Token) -> Optional[Literal]:
        s = self.stream
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
                    return Literal(tok.value, datatype=self.resolve(dt).value)
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
        return None

    # expression := primary (('=' | '!=') primary)?
    def expression(self) -> Expr:
        left = self.primary()
        s = self.stream
        tok = s.peek()
        if tok is not None and tok.kind == "PUNCT":
            if tok.value == "=":
                s.next()
                return Eq(left, self.primary())
            if tok.value == "!=":
                s.next()
                return Neq(left, self.primary())
            if tok.value in ("<", ">", "<=", ">=", "&&", "||", "+", "-", "*", "/"):
                raise UnsupportedFeature(f"operator {tok.value!r}", tok.line, tok.column)
        return left

    def primary(self) -> Expr:
        s = self.stream
        tok = s.next()
        if tok.kind == "PUNCT" and tok.value == "(":
            inner = self.expression()
            s.expect_punct(")")
            return inner
        if tok.kind == "PUNCT" and tok.value == "!":
            raise UnsupportedFeature("operator '!'", tok.line, tok.column)
        if tok.kind == "VAR":
            return Var(tok.value)
        if tok.kind == "WORD" and tok.value.lower() in ("lang", "str"):
            s.expect_punct("(")
            arg = self.expression()
            s.expect_punct(")")
            return Lang(arg) if tok.value.lower() == "lang" else Str(arg)
        if tok.kind == "WORD" and s.is_punct("("):
            raise UnsupportedFeature(f"function {tok.value}", tok.line, tok.column)
        if tok.kind == "IRI":
            return Const(IRI(tok.value))
        if tok.kind == "PNAME":
            return Const(self.resolve(tok))
        lit = self.literal(tok)
        if lit is not None:
            return Const(lit)
        raise self.error(tok, f"unexpected {tok.value!r} in expression")


def parse_pattern(text: str, prefixes: Mapping[str, str] = (), line_offset: int = 0) -> GraphPattern:
    """Parse a group graph pattern body (without the surrounding braces)."""
    parser = _PatternParser(tokenize(text, line_offset), dict(prefixes))
    return parser.group(top=True)


@dataclass
class SelectQuery:
    prefixes: Dict[str, str]
    projection: List[str]
    pattern: GraphPattern
    limit: Optional[int] = None
    offset: Optional[int] = None


def parse_select(text: str) -> SelectQuery:
    """Parse ``PREFIX* SELECT ?v... WHERE { pattern } [LIMIT n] [OFFSET m]``."""
    stream = TokenStream(tokenize(text))
    prefixes: Dict[str, str] = {}
    while stream.is_word("PREFIX"):
        stream.next()
        name = stream.next()
        iri = stream.next()
        if name.kind != "PNAME" or not name.value.endswith(":") or iri.kind != "IRI":
            raise ParseError("malformed PREFIX declaration", name.line, name.column)
        prefixes[name.value[:-1]] = iri.value
    tok = stream.next()
    if tok.kind != "WORD" or tok.value.upper() != "SELECT":
        raise UnsupportedFeature(f"query form {tok.value!r}", tok.line, tok.column)
    if stream.is_word("DISTINCT") or stream.is_word("REDUCED"):
        bad = stream.next()
        raise UnsupportedFeature(bad.value.upper(), bad.line, bad.column)
    projection: List[str] = []
    if stream.accept_punct("*"):
        projection = ["*"]
    while stream.peek() is not None and stream.peek().kind == "VAR":
        projection.append(stream.next().value)
    if not projection:
        raise ParseError("SELECT needs at least one variable", tok.line, tok.column)
    if stream.is_word("WHERE"):
        stream.next()
    stream.expect_punct("{")
    parser = _PatternParser(stream.tokens, prefixes)
    parser.stream = stream
    pattern = parser.group()
    stream.expect_punct("}")
    limit = offset = None
    while not stream.at_end():
        word = stream.next()
        number = stream.next()
        if word.kind != "WORD" or number.kind != "INTEGER":
            raise UnsupportedFeature(f"solution modifier {word.value!r}", word.line, word.column)
        if word.value.upper() == "LIMIT":
            limit = int(number.value)
        elif word.value.upper() == "OFFSET":
            offset = int(number.value)
        else:
            raise UnsupportedFeature(f"solution modifier {word.value!r}", word.line, word.column)
    if projection == ["*"]:
        projection = pattern_vars(pattern)
    return SelectQuery(prefixes, projection, pattern, limit, offset)


# -- rendering ---------------------------------------------------------------

def _render_term(t) -> str:
    if isinstance(t, Var):
        return t.name if t.hidden else f"?{t.name}"
    if isinstance(t, Path):
        return "/".join(step.n3() for step in t.steps)
    return t.n3()


def render_expr(expr) -> str:
    if isinstance(expr, Var):
        return _render_term(expr)
    if isinstance(expr, Const):
        return expr.term.n3()
    if isinstance(expr, Lang):
        return f"lang({render_expr(expr.arg)})"
    if isinstance(expr, Str):
        return f"str({render_expr(expr.arg)})"
    op = "=" if isinstance(expr, Eq) else "!="
    return f"({render_expr(expr.left)} {op} {render_expr(expr.right)})"


def render_pattern(pattern: GraphPattern, indent: str = "") -> str:
    """Render a pattern back to SPARQL text with full IRIs."""
    lines = []
    for el in pattern.elements:
        if isinstance(el, TriplePattern):
            lines.append(f"{indent}{_render_term(el.s)} {_render_term(el.p)} {_render_term(el.o)} .")
        elif isinstance(el, Filter):
            lines.append(f"{indent}FILTER({render_expr(el.expr)})")
        elif isinstance(el, Bind):
            lines.append(f"{indent}BIND({render_expr(el.expr)} AS ?{el.var.name})")
        else:
            keyword = "OPTIONAL " if isinstance(el, OptionalGroup) else ""
            lines.append(f"{indent}{keyword}{{")
            lines.append(render_pattern(el.pattern, indent + "  "))
            lines.append(f"{indent}}}")
    return "\n".join(line for line in lines if line)


# -- evaluation --------------------------------------------------------------

class ExprError(Exception):
    """Evaluation error inside an expression; the surrounding row is dropped."""


def _numeric_value(lit: Literal):
    try:
        if lit.datatype in INTEGER_TYPES:
            return int(lit.lexical)
        if lit.datatype in FLOAT_TYPES:
            return float(lit.lexical)
    except ValueError:
        raise ExprError(f"bad numeric lexical form {lit.lexical!r}") from None
    return None


def eval_expr(expr, row: Mapping[str, Term]):
    if isinstance(expr, Var):
        if expr.name not in row:
            raise ExprError(f"?{expr.name} is unbound")
        return row[expr.name]
    if isinstance(expr, Const):
        return expr.term
    if isinstance(expr, Lang):
        arg = eval_expr(expr.arg, row)
        if not isinstance(arg, Literal):
            raise ExprError("lang() of a non-literal")
        return Literal(arg.lang or "")
    if isinstance(expr, Str):
        arg = eval_expr(expr.arg, row)
        if isinstance(arg, Literal):
            return Literal(arg.lexical)
        if isinstance(arg, IRI):
            return Literal(arg.value)
        raise ExprError("str() of a blank node")
    left = eval_expr(expr.left, row)
    right = eval_expr(expr.right, row)
    equal = terms_equal(left, right)
    result = equal if isinstance(expr, Eq) else not equal
    return Literal("true" if result else "false", datatype=XSD_BOOLEAN)


def terms_equal(a: Term, b: Term) -> bool:
    """``=`` semantics: numeric literals compare by value, everything else by term."""
    if isinstance(a, Literal) and isinstance(b, Literal) and a.is_numeric and b.is_numeric:
        return _numeric_value(a) == _numeric_value(b)
    return a == b


def effective_boolean(term: Term) -> bool:
    if isinstance(term, Literal):
        if term.datatype == XSD_BOOLEAN:
            return term.lexical in ("true", "1")
        if term.is_numeric:
            return _numeric_value(term) != 0
        if term.datatype is None:
            return term.lexical != ""
    raise ExprError("no effective boolean value")


def _holds(exprs: Sequence, row: Mapping[str, Term]) -> bool:
    try:
        return all(effective_boolean(eval_expr(e, row)) for e in exprs)
    except ExprError:
        return False


def _compatible(a: Solution, b: Solution) -> bool:
    if len(b) < len(a):
        a, b = b, a
    return all(b.get(k, v) == v for k, v in a.items())


def _join(left: List[Solution], right: List[Solution], conditions: Sequence = (),
          outer: bool = False) -> List[Solution]:
    """Join (or left join with ``conditions``) two solution sequences."""
    certain = set.intersection(*(set(r) for r in right)) if right else set()
    indexes: Dict[Tuple[str, ...], Dict] = {}
    out: List[Solution] = []
    for mu in left:
        shared = tuple(sorted(certain.intersection(mu)))
        index = indexes.get(shared)
        if index is None:
            index = {}
            for r in right:
                index.setdefault(tuple(r[k] for k in shared), []).append(r)
            indexes[shared] = index
        matched = False
        for r in index.get(tuple(mu[k] for k in shared), ()):
            if not _compatible(mu, r):
                continue
            merged = {**mu, **r}
            if conditions and not _holds(conditions, merged):
                continue
            out.append(merged)
            matched = True
        if outer and not matched:
            out.append(mu)
    return out


class _Evaluator:
    def __init__(self, store: TripleStore):
        self.store = store
        self._fresh = itertools.count()

    def expand(self, tp: TriplePattern) -> List[TriplePattern]:
        if not isinstance(tp.p, Path):
            return [tp]
        chain = []
        subject = tp.s
        for step in tp.p.steps[:-1]:
            link = Var(f"{HIDDEN}~p{next(self._fresh)}")
            chain.append(TriplePattern(subject, step, link))
            subject = link
        chain.append(TriplePattern(subject, tp.p.steps[-1], tp.o))
        return chain

    def match_into(self, tp: TriplePattern, mu: Solution) -> Iterable[Solution]:
        def bound(t):
            if isinstance(t, Var):
                return mu.get(t.name)
            return t

        s, p, o = bound(tp.s), bound(tp.p), bound(tp.o)
        if isinstance(s, Literal) or (p is not None and not isinstance(p, IRI)):
            return
        for triple in self.store.match(s, p, o):
            ext = dict(mu)
            ok = True
            for pos, term in ((tp.s, triple.s), (tp.p, triple.p), (tp.o, triple.o)):
                if isinstance(pos, Var):
                    seen = ext.get(pos.name)
                    if seen is None:
                        ext[pos.name] = term
                    elif seen != term:
                        ok = False
                        break
            if ok:
                yield ext

    def group(self, gp: GraphPattern) -> List[Solution]:
        rows: List[Solution] = [{}]
        filters = []
        for el in gp.elements:
            if isinstance(el, TriplePattern):
                for step in self.expand(el):
                    rows = [ext for mu in rows for ext in self.match_into(step, mu)]
            elif isinstance(el, OptionalGroup):
                inner_filters = [e.expr for e in el.pattern.elements if isinstance(e, Filter)]
                body = GraphPattern(tuple(e for e in el.pattern.elements if not isinstance(e, Filter)))
                rows = _join(rows, self.group(body), inner_filters, outer=True)
            elif isinstance(el, Group):
                rows = _join(rows, self.group(el.pattern))
            elif isinstance(el, Bind):
                extended = []
                for mu in rows:
                    try:
                        value = eval_expr(el.expr, mu)
                    except ExprError:
                        extended.append(mu)
                        continue
                    extended.append({**mu, el.var.name: value})
                rows = extended
            elif isinstance(el, Filter):
                filters.append(el.expr)
        if filters:
            rows = [mu for mu in rows if _holds(filters, mu)]
        return rows


def evaluate(pattern: GraphPattern, store: TripleStore) -> List[Solution]:
    """All solutions of ``pattern`` over ``store``, with anonymous variables removed."""
    rows = _Evaluator(store).group(pattern)
    return [{k: v for k, v in mu.items() if not k.startswith(HIDDEN)} for mu in rows]


def project(solutions: Iterable[Solution], variables: Sequence[str]) -> List[Solution]:
    """Restrict each solution to ``variables`` (duplicates kept)."""
    return [{v: mu[v] for v in variables if v in mu} for mu in solutions]


def run_select(query: SelectQuery, store: TripleStore) -> List[Solution]:
    rows = project(evaluate(query.pattern, store), query.projection)
    start = query.offset or 0
    end = start + query.limit if query.limit is not None else None
    return rows[start:end]
