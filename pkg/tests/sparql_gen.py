"""Random small stores and in-subset graph patterns for oracle comparisons.

Every basic block is kept to at most three distinct variables (counting the
hidden link of a sequence path) so the brute-force oracle stays cheap.
"""

import random

from g2g.rdf import XSD, BlankNode, IRI, Literal, Triple
from g2g.sparql import (
    Bind, Const, Eq, Filter, GraphPattern, Group, Lang, Neq, OptionalGroup, Path, Str, TriplePattern, Var,
)

EX = "http://example.org/"
IRIS = [IRI(EX + c) for c in "abcd"]
BNODE = BlankNode("z")  # appears in data only
PREDS = [IRI(EX + p) for p in ("p", "q", "r")]
LITERALS = [
    Literal("x", lang="en"), Literal("x", lang="EN-gb"), Literal("x", lang="fr"), Literal("x"),
    Literal("y"), Literal("1", datatype=XSD + "integer"), Literal("1.0", datatype=XSD + "decimal"),
    Literal("01", datatype=XSD + "integer"),
]
VARS = ["x", "y", "z"]
MAX_BLOCK_VARS = 3


def random_store(rng: random.Random, max_triples=50):
    subjects = IRIS + [BNODE]
    candidates = [Triple(s, p, o) for s in subjects for p in PREDS for o in subjects + LITERALS]
    return rng.sample(candidates, rng.randint(min(10, max_triples), max_triples))


class PatternGen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.bind_used = False

    def _node(self, literal_ok, avoid=()):
        r = self.rng.random()
        free = [v for v in VARS if v not in avoid]
        # mostly fresh names: repeated variables inside one triple rarely match
        if r < 0.8 and free and self.rng.random() < 0.9:
            return Var(self.rng.choice(free))
        if r < 0.8:
            return Var(self.rng.choice(VARS))
        if literal_ok and r < 0.9:
            return self.rng.choice(LITERALS)
        return self.rng.choice(IRIS)

    def _triple(self, block_vars):
        for _ in range(20):
            s = self._node(False)
            o = self._node(True, avoid={s.name} if isinstance(s, Var) else ())
            used = {x.name for x in (s, o) if isinstance(x, Var)}
            r = self.rng.random()
            extra = 0
            if r < 0.75:
                p = self.rng.choice(PREDS)
            elif r < 0.87:
                p = self._node(False, avoid=used)
                if not isinstance(p, Var):
                    p = self.rng.choice(PREDS)
            else:
                p = Path((self.rng.choice(PREDS), self.rng.choice(PREDS)))
                extra = 1
            names = {x.name for x in (s, p, o) if isinstance(x, Var)}
            if len(block_vars | names) + extra <= MAX_BLOCK_VARS:
                block_vars |= names
                if extra:
                    block_vars.add(f"path link {len(block_vars)}")
                return TriplePattern(s, p, o)
        return TriplePattern(self.rng.choice(IRIS), self.rng.choice(PREDS), Var("x"))

    def _expr(self):
        rng = self.rng
        names = VARS + (["w"] if self.bind_used else [])
        v = Var(rng.choice(names))
        r = rng.random()
        if r < 0.1:
            return v
        left = rng.choice([v, Lang(v), Str(v)])
        if isinstance(left, Lang):
            right = Const(Literal(rng.choice(["en", "fr", "en-gb", ""])))
        elif rng.random() < 0.4:
            right = Var(rng.choice(names))
        else:
            right = Const(rng.choice(LITERALS + IRIS))
        return (Eq if rng.random() < 0.6 else Neq)(left, right)

    def group(self, depth=0, min_triples=1):
        rng = self.rng
        elements = []
        block = set()
        for _ in range(rng.randint(min_triples, 2)):
            elements.append(self._triple(block))
        for _ in range(rng.randint(0, 2)):
            kind = rng.random()
            if kind < 0.3:
                inner = self.group(depth + 1) if depth < 1 else GraphPattern((self._triple(set()),))
                if rng.random() < 0.4:
                    inner = GraphPattern(inner.elements + (Filter(self._expr()),))
                elements.append(OptionalGroup(inner))
                block = set()
            elif kind < 0.5:
                elements.append(Filter(self._expr()))
            elif kind < 0.65 and not self.bind_used:
                v = Var(rng.choice(VARS))
                elements.append(Bind(rng.choice([Str(v), Lang(v), Eq(v, Const(rng.choice(LITERALS)))]),
                                     Var("w")))
                self.bind_used = True
                block = set()
            elif kind < 0.8:
                inner = self.group(depth + 1) if depth < 1 else GraphPattern((self._triple(set()),))
                elements.append(Group(inner))
                block = set()
            else:
                elements.append(self._triple(block))
        return GraphPattern(tuple(elements))


def random_pattern(rng: random.Random) -> GraphPattern:
    return PatternGen(rng).group()
