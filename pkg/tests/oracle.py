"""Brute-force reference evaluator for the pattern subset.

Written directly from the algebra definitions: each basic graph pattern is
solved by enumerating every assignment of its variables over the store's
terms and checking membership of each instantiated triple.  It shares no
code with ``g2g.sparql`` evaluation; only the AST classes are reused.
"""

import itertools

from g2g.rdf import FLOAT_TYPES, INTEGER_TYPES, IRI, Literal
from g2g.sparql import (
    Bind, Const, Eq, Filter, Group, Lang, OptionalGroup, Path, Str, TriplePattern, Var,
)

XSD_BOOLEAN = "http://www.w3.org/2001/XMLSchema#boolean"


class _Err(Exception):
    pass


def _num(lit):
    if lit.datatype in INTEGER_TYPES:
        return int(lit.lexical)
    return float(lit.lexical)


def _is_num(t):
    return isinstance(t, Literal) and (t.datatype in INTEGER_TYPES or t.datatype in FLOAT_TYPES)


def _ev(expr, mu):
    if isinstance(expr, Var):
        if expr.name not in mu:
            raise _Err
        return mu[expr.name]
    if isinstance(expr, Const):
        return expr.term
    if isinstance(expr, Lang):
        v = _ev(expr.arg, mu)
        if not isinstance(v, Literal):
            raise _Err
        return Literal(v.lang or "")
    if isinstance(expr, Str):
        v = _ev(expr.arg, mu)
        if isinstance(v, Literal):
            return Literal(v.lexical)
        if isinstance(v, IRI):
            return Literal(v.value)
        raise _Err
    a, b = _ev(expr.left, mu), _ev(expr.right, mu)
    same = _num(a) == _num(b) if _is_num(a) and _is_num(b) else a == b
    return same if isinstance(expr, Eq) else not same


def _true(expr, mu):
    try:
        v = _ev(expr, mu)
    except _Err:
        return False
    if isinstance(v, bool):
        return v
    if isinstance(v, Literal):
        if v.datatype == XSD_BOOLEAN:
            return v.lexical in ("true", "1")
        if _is_num(v):
            return _num(v) != 0
        if v.datatype is None:
            return v.lexical != ""
    return False


def _compatible(a, b):
    return all(b[k] == v for k, v in a.items() if k in b)


class BruteForce:
    def __init__(self, triples):
        self.triples = set(triples)
        terms = set()
        for t in self.triples:
            terms.update((t.s, t.p, t.o))
        self.terms = sorted(terms, key=repr)
        self.counter = itertools.count()

    def bgp(self, patterns):
        names = []
        for tp in patterns:
            for x in (tp.s, tp.p, tp.o):
                if isinstance(x, Var) and x.name not in names:
                    names.append(x.name)
        out = []
        for values in itertools.product(self.terms, repeat=len(names)):
            mu = dict(zip(names, values))
            inst = lambda x: mu[x.name] if isinstance(x, Var) else x  # noqa: E731
            if all(_triple(inst(tp.s), inst(tp.p), inst(tp.o)) in self.triples for tp in patterns):
                out.append(mu)
        return out

    def expand(self, tp):
        if not isinstance(tp.p, Path):
            return [tp]
        out, subj = [], tp.s
        for step in tp.p.steps[:-1]:
            link = Var(f"_:oracle{next(self.counter)}")
            out.append(TriplePattern(subj, step, link))
            subj = link
        out.append(TriplePattern(subj, tp.p.steps[-1], tp.o))
        return out

    def group(self, gp):
        omega = [{}]
        filters = []
        block = []

        def flush(omega):
            if not block:
                return omega
            right = self.bgp(block)
            block.clear()
            return [{**a, **b} for a in omega for b in right if _compatible(a, b)]

        for el in gp.elements:
            if isinstance(el, TriplePattern):
                block.extend(self.expand(el))
                continue
            omega = flush(omega)
            if isinstance(el, Filter):
                filters.append(el.expr)
            elif isinstance(el, Bind):
                new = []
                for mu in omega:
                    try:
                        v = _ev(el.expr, mu)
                    except _Err:
                        new.append(mu)
                        continue
                    if isinstance(v, bool):
                        v = Literal("true" if v else "false", datatype=XSD_BOOLEAN)
                    new.append({**mu, el.var.name: v})
                omega = new
            elif isinstance(el, Group):
                right = self.group(el.pattern)
                omega = [{**a, **b} for a in omega for b in right if _compatible(a, b)]
            elif isinstance(el, OptionalGroup):
                cond = [e.expr for e in el.pattern.elements if isinstance(e, Filter)]
                body = type(el.pattern)(tuple(e for e in el.pattern.elements if not isinstance(e, Filter)))
                right = self.group(body)
                new = []
                for a in omega:
                    hits = [{**a, **b} for b in right
                             if _compatible(a, b) and all(_true(c, {**a, **b}) for c in cond)]
                    new.extend(hits if hits else [a])
                omega = new
        omega = flush(omega)
        return [mu for mu in omega if all(_true(f, mu) for f in filters)]

    def evaluate(self, pattern):
        return [{k: v for k, v in mu.items() if not k.startswith("_:")} for mu in self.group(pattern)]


def _triple(s, p, o):
    from g2g.rdf import Triple
    return Triple(s, p, o)


def brute_evaluate(pattern, triples):
    return BruteForce(triples).evaluate(pattern)


def as_multiset(solutions):
    from collections import Counter
    return Counter(frozenset(mu.items()) for mu in solutions)
