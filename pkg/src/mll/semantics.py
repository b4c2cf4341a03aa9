"""Coherence spaces, their concordance presentation, and cliques of proofs.

Spaces built from formulae can be large (a carrier of 2**n tokens), so the
product spaces keep their relation implicit and answer ``coherent`` by
recursion on token shape.  Only ``FiniteSpace`` stores edges.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .di_kernel import DiDerivation, check_di
from .sc_kernel import (
    Ax, Cut, Exch, Id, ParRule, TensorRule, check_sc, children,
)
from .syntax import (
    Atom, MllError, NegAtom, Par, Tensor, Formula, render_formula,
    sequent_to_formula, subformula_at, negate,
)

DEFAULT_LIMIT = 10


class SemanticsError(MllError):
    pass


class CarrierTooLarge(SemanticsError):
    pass


class MissingAtom(SemanticsError):
    pass


# spaces

class CoherenceSpace:
    """A carrier with a reflexive, symmetric coherence relation."""

    @property
    def carrier(self) -> frozenset:
        cached = self.__dict__.get("_carrier")
        if cached is None:
            cached = frozenset(self.elements())
            self.__dict__["_carrier"] = cached
        return cached

    def elements(self) -> Iterable:
        raise NotImplementedError

    def contains(self, x) -> bool:
        return x in self.carrier

    def coherent(self, x, y) -> bool:
        raise NotImplementedError

    def strictly_coherent(self, x, y) -> bool:
        return x != y and self.coherent(x, y)

    def size(self) -> int:
        return len(self.carrier)

    def edges(self) -> frozenset:
        """Strict coherence as a set of two-element frozensets."""
        xs = sorted(self.carrier, key=token_key)
        return frozenset(frozenset((x, y)) for x, y in itertools.combinations(xs, 2)
                         if self.coherent(x, y))

    def materialize(self) -> "FiniteSpace":
        return FiniteSpace(self.carrier, self.edges())

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoherenceSpace):
            return NotImplemented
        return self.carrier == other.carrier and self.edges() == other.edges()

    def __hash__(self):
        return hash(self.carrier)


class FiniteSpace(CoherenceSpace):
    def __init__(self, carrier: Iterable, edges: Iterable = ()):
        carrier = frozenset(carrier)
        rel = set()
        for e in edges:
            x, y = tuple(e) if len(tuple(e)) == 2 else (tuple(e)[0], tuple(e)[0])
            if x not in carrier or y not in carrier:
                raise SemanticsError(f"edge {x!r}-{y!r} leaves the carrier")
            if x != y:
                rel.add(frozenset((x, y)))
        self.__dict__["_carrier"] = carrier
        self._edges = frozenset(rel)

    def elements(self):
        return self.carrier

    def coherent(self, x, y) -> bool:
        return x == y or frozenset((x, y)) in self._edges

    def edges(self) -> frozenset:
        return self._edges

    def __repr__(self):
        return f"FiniteSpace({sorted(self.carrier, key=token_key)!r}, {len(self._edges)} edges)"


class DualSpace(CoherenceSpace):
    def __init__(self, base: CoherenceSpace):
        self.base = base

    def elements(self):
        return self.base.carrier

    def contains(self, x) -> bool:
        return self.base.contains(x)

    def coherent(self, x, y) -> bool:
        return x == y or not self.base.coherent(x, y)


class _ProductSpace(CoherenceSpace):
    def __init__(self, a: CoherenceSpace, b: CoherenceSpace):
        self.a = a
        self.b = b

    def elements(self):
        return itertools.product(self.a.carrier, self.b.carrier)

    def contains(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == 2 and self.a.contains(x[0]) and self.b.contains(x[1])

    def size(self) -> int:
        return self.a.size() * self.b.size()


class TensorSpace(_ProductSpace):
    def coherent(self, x, y) -> bool:
        return self.a.coherent(x[0], y[0]) and self.b.coherent(x[1], y[1])


class ParSpace(_ProductSpace):
    def coherent(self, x, y) -> bool:
        return (x == y or self.a.strictly_coherent(x[0], y[0])
                or self.b.strictly_coherent(x[1], y[1]))


def dual_space(c: CoherenceSpace) -> CoherenceSpace:
    return c.base if isinstance(c, DualSpace) else DualSpace(c)


def tensor_space(a: CoherenceSpace, b: CoherenceSpace) -> CoherenceSpace:
    return TensorSpace(a, b)


def par_space(a: CoherenceSpace, b: CoherenceSpace) -> CoherenceSpace:
    return ParSpace(a, b)


UNIT = FiniteSpace(["*"])


def complete_space(labels) -> FiniteSpace:
    labels = list(labels)
    return FiniteSpace(labels, itertools.combinations(labels, 2))


def discrete_space(labels) -> FiniteSpace:
    return FiniteSpace(labels)


# concordance view

def _check_limit(n: int, limit: int):
    if n > limit:
        raise CarrierTooLarge(f"carrier of {n} elements exceeds the limit of {limit}")


def _subsets(xs):
    for r in range(len(xs) + 1):
        for combo in itertools.combinations(xs, r):
            yield frozenset(combo)


def orth(carrier, family, limit: int = DEFAULT_LIMIT) -> frozenset:
    """All subsets of ``carrier`` meeting every member of ``family`` in at most one point."""
    xs = sorted(carrier, key=token_key)
    _check_limit(len(xs), limit)
    pos = {x: i for i, x in enumerate(xs)}
    masks = {sum(1 << pos[e] for e in u) for u in family}
    out = []
    for m in range(1 << len(xs)):
        if all(bin(m & u).count("1") <= 1 for u in masks):
            out.append(frozenset(x for i, x in enumerate(xs) if m >> i & 1))
    return frozenset(out)


@dataclass(frozen=True)
class ConcordanceView:
    carrier: frozenset
    cliques: frozenset
    anticliques: frozenset


def to_concordance(c: CoherenceSpace, limit: int = DEFAULT_LIMIT) -> ConcordanceView:
    xs = sorted(c.carrier, key=token_key)
    _check_limit(len(xs), limit)
    cliques, anti = [], []
    for s in _subsets(xs):
        pairs = list(itertools.combinations(sorted(s, key=token_key), 2))
        if all(c.coherent(x, y) for x, y in pairs):
            cliques.append(s)
        if all(not c.strictly_coherent(x, y) for x, y in pairs):
            anti.append(s)
    return ConcordanceView(frozenset(xs), frozenset(cliques), frozenset(anti))


def from_concordance(v: ConcordanceView) -> FiniteSpace:
    xs = sorted(v.carrier, key=token_key)
    return FiniteSpace(xs, [(x, y) for x, y in itertools.combinations(xs, 2)
                            if frozenset((x, y)) in v.cliques])


def concordance_properties(v: ConcordanceView, limit: int = DEFAULT_LIMIT) -> dict:
    """The five structural facts a concordance space must satisfy."""
    singles = {frozenset([x]) for x in v.carrier}

    def down_closed(fam):
        return all(frozenset(sub) in fam for s in fam for sub in _subsets(sorted(s, key=token_key)))

    pairs = [frozenset(p) for p in itertools.combinations(sorted(v.carrier, key=token_key), 2)]
    return {
        "singletons": singles <= v.cliques and singles <= v.anticliques,
        "downward_closed": down_closed(v.cliques) and down_closed(v.anticliques),
        "orthogonal_fixpoint": (orth(v.carrier, v.anticliques, limit) == v.cliques
                                and orth(v.carrier, v.cliques, limit) == v.anticliques),
        "two_element_dichotomy": all((p in v.cliques) != (p in v.anticliques) for p in pairs),
        "pairwise_criterion": all(
            (s in v.cliques) == all(frozenset(p) in v.cliques for p in itertools.combinations(s, 2))
            for s in _subsets(sorted(v.carrier, key=token_key))),
    }


# relations and morphisms

@dataclass(frozen=True)
class Relation:
    source: CoherenceSpace
    target: CoherenceSpace
    pairs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for x, y in self.pairs:
            if not self.source.contains(x) or not self.target.contains(y):
                raise SemanticsError(f"pair {x!r} -> {y!r} leaves the typed carriers")

    def image(self, u) -> frozenset:
        return frozenset(y for x, y in self.pairs if x in u)

    def preimage(self, w) -> frozenset:
        return frozenset(x for x, y in self.pairs if y in w)


def identity_relation(c: CoherenceSpace) -> Relation:
    return Relation(c, c, frozenset((x, x) for x in c.carrier))


def morphism_by_coherence(rel: Relation) -> bool:
    """Coherence goes forward; incoherence (which allows equality) goes backward."""
    src, tgt = rel.source, rel.target
    for (x, y), (x2, y2) in itertools.product(rel.pairs, repeat=2):
        if src.coherent(x, x2) and not tgt.coherent(y, y2):
            return False
        if not tgt.strictly_coherent(y, y2) and src.strictly_coherent(x, x2):
            return False
    return True


def morphism_by_concordance(rel: Relation, limit: int = DEFAULT_LIMIT) -> bool:
    src = to_concordance(rel.source, limit)
    tgt = to_concordance(rel.target, limit)
    return (all(rel.image(u) in tgt.cliques for u in src.cliques)
            and all(rel.preimage(y) in src.anticliques for y in tgt.anticliques))


def is_morphism(rel: Relation, limit: int = DEFAULT_LIMIT, cross_check: bool = True) -> bool:
    """Coherence-preservation test, cross-checked against the concordance form when small."""
    verdict = morphism_by_coherence(rel)
    if cross_check and len(rel.source.carrier) <= limit and len(rel.target.carrier) <= limit:
        other = morphism_by_concordance(rel, limit)
        if other != verdict:
            raise SemanticsError(f"morphism criteria disagree: coherence={verdict}, concordance={other}")
    return verdict


def dual_relation(rel: Relation) -> Relation:
    return Relation(dual_space(rel.target), dual_space(rel.source),
                    frozenset((y, x) for x, y in rel.pairs))


def reassociation(a, b, c, inverse: bool = False) -> Relation:
    """The relation (x,(y,z)) -> ((x,y),z) from A*(B%C) to (A*B)%C, or its converse."""
    src = tensor_space(a, par_space(b, c))
    tgt = par_space(tensor_space(a, b), c)
    pairs = frozenset(((x, (y, z)), ((x, y), z))
                      for x in a.carrier for y in b.carrier for z in c.carrier)
    if inverse:
        return Relation(tgt, src, frozenset((q, p) for p, q in pairs))
    return Relation(src, tgt, pairs)


# valuations and formula spaces

class Valuation:
    """Atom name to space; atoms not listed get the default space."""

    def __init__(self, spaces: Optional[Mapping] = None, default: Optional[CoherenceSpace] = None):
        self.spaces = dict(spaces or {})
        self.default = default

    def __getitem__(self, atom: str) -> CoherenceSpace:
        if atom in self.spaces:
            return self.spaces[atom]
        if self.default is None:
            raise MissingAtom(f"no space given for atom {atom!r}")
        return self.default


def default_valuation() -> Valuation:
    return Valuation({}, complete_space([0, 1]))


def interpret_formula(f: Formula, v: Optional[Valuation] = None) -> CoherenceSpace:
    v = v or default_valuation()
    if isinstance(f, Atom):
        return v[f.name]
    if isinstance(f, NegAtom):
        return dual_space(v[f.name])
    if isinstance(f, Tensor):
        return tensor_space(interpret_formula(f.left, v), interpret_formula(f.right, v))
    if isinstance(f, Par):
        return par_space(interpret_formula(f.left, v), interpret_formula(f.right, v))
    raise SemanticsError(f"cannot interpret {f!r}")


def tokens_of(f: Formula, v: Valuation) -> list:
    """Every token of the shape of ``f``."""
    if isinstance(f, (Atom, NegAtom)):
        return sorted(v[f.name].carrier, key=token_key)
    return [(x, y) for x in tokens_of(f.left, v) for y in tokens_of(f.right, v)]


def is_clique(space: CoherenceSpace, s) -> bool:
    s = list(s)
    for t in s:
        if not space.contains(t):
            raise SemanticsError(f"token {render_token(t)} is not in the carrier")
    return all(space.coherent(x, y) for x, y in itertools.combinations(s, 2))


def diagonal_clique(space: CoherenceSpace) -> frozenset:
    return frozenset((r, r) for r in space.carrier)


def cliques_equal(c1, c2) -> bool:
    return frozenset(c1) == frozenset(c2)


# tokens

def token_key(t):
    return render_token(t)


def render_token(t) -> str:
    if isinstance(t, tuple):
        return "(" + " ".join(render_token(x) for x in t) + ")"
    return str(t)


def get_at(t, p: str):
    for step in p:
        t = t[0] if step == "L" else t[1]
    return t


def set_at(t, p: str, new):
    if not p:
        return new
    if p[0] == "L":
        return (set_at(t[0], p[1:], new), t[1])
    return (t[0], set_at(t[1], p[1:], new))


def render_clique(clique, formula: Formula) -> str:
    lines = [f"# clique of {render_formula(formula)}: {len(clique)} tokens"]
    lines += sorted(render_token(t) for t in clique)
    return "\n".join(lines) + "\n"


# interpretation of derivations

_REBRACKET = {
    "sigma-up": lambda t: (t[1], t[0]),
    "sigma-down": lambda t: (t[1], t[0]),
    "alpha-up": lambda t: ((t[0], t[1][0]), t[1][1]),
    "alpha-down": lambda t: (t[0][0], (t[0][1], t[1])),
    "switch": lambda t: ((t[0], t[1][0]), t[1][1]),
    "sigma-switch": lambda t: (t[0][0], (t[0][1], t[1])),
}


def interpret_di(d: DiDerivation, v: Optional[Valuation] = None) -> frozenset:
    v = v or default_valuation()
    check_di(d)
    if d.kind == "open":
        raise SemanticsError("an open derivation has no clique of its own")
    a = Atom(d.payload) if d.kind == "ai-down" else d.payload
    clique = {(r, r) for r in tokens_of(a, v)}
    for s in d.steps:
        p = s.path
        if s.rule in ("ai-down", "i-down"):
            diag = [(r, r) for r in tokens_of(s.payload(), v)]
            clique = {set_at(t, p, (get_at(t, p), dr)) for t in clique for dr in diag}
        elif s.rule in ("ai-up", "i-up"):
            kept = set()
            for t in clique:
                sub = get_at(t, p)
                if sub[0][0] == sub[0][1]:
                    kept.add(set_at(t, p, sub[1]))
            clique = kept
        else:
            fn = _REBRACKET[s.rule]
            clique = {set_at(t, p, fn(get_at(t, p))) for t in clique}
    return frozenset(clique)


def _sequent_token(parts: tuple):
    acc = parts[0]
    for x in parts[1:]:
        acc = (acc, x)
    return acc


def _flat(n, v, k=None, allowed=None) -> frozenset:
    """Flat clique of ``n``; with ``k`` set, only tokens whose member ``k`` lies in ``allowed``.

    Restricting on demand keeps cuts against large identity-built lemmas cheap:
    the lemma side is only expanded where it meets the other premise.
    """
    if isinstance(n, (Ax, Id)):
        a = Atom(n.atom) if isinstance(n, Ax) else n.formula
        if k is None:
            return frozenset((r, r) for r in tokens_of(a, v))
        carrier = interpret_formula(a, v)
        if k == 0:
            return frozenset((negr, negr) for negr in allowed if carrier.contains(negr))
        return frozenset((r, r) for r in allowed if carrier.contains(r))
    if isinstance(n, Exch):
        i = n.index
        ck = None if k is None else (i + 1 if k == i else i if k == i + 1 else k)
        return frozenset(t[:i] + (t[i + 1], t[i]) + t[i + 2:] for t in _flat(n.child, v, ck, allowed))
    if isinstance(n, ParRule):
        i = n.index
        if k is None or k < i:
            kids = _flat(n.child, v, k, allowed)
        elif k == i:
            kids = _flat(n.child, v, i, frozenset(x[0] for x in allowed))
            kids = [t for t in kids if (t[i], t[i + 1]) in allowed]
        else:
            kids = _flat(n.child, v, k + 1, allowed)
        return frozenset(t[:i] + ((t[i], t[i + 1]),) + t[i + 2:] for t in kids)
    m = len(check_sc(n.left))
    if isinstance(n, TensorRule):
        if k is None or (k != m - 1):
            on_left = k is not None and k < m - 1
            left = _flat(n.left, v, k if on_left else None, allowed if on_left else None)
            on_right = k is not None and k > m - 1
            right = _flat(n.right, v, k - m + 1 if on_right else None, allowed if on_right else None)
        else:
            left = _flat(n.left, v, m - 1, frozenset(x[0] for x in allowed))
            right = _flat(n.right, v, 0, frozenset(x[1] for x in allowed))
        out = (t1[:-1] + ((t1[-1], t2[0]),) + t2[1:] for t1 in left for t2 in right)
        if k == m - 1:
            return frozenset(t for t in out if t[k] in allowed)
        return frozenset(out)
    # cut: evaluate one premise, then the other only where it can meet the first
    if k is None or k < m - 1:
        left = _flat(n.left, v, k, allowed)
        right = _flat(n.right, v, 0, frozenset(t[-1] for t in left))
    else:
        right = _flat(n.right, v, k - m + 2, allowed)
        left = _flat(n.left, v, m - 1, frozenset(t[0] for t in right))
    by_head = {}
    for t2 in right:
        by_head.setdefault(t2[0], []).append(t2)
    return frozenset(t1[:-1] + t2[1:] for t1 in left for t2 in by_head.get(t1[-1], ()))


def interpret_sc_flat(d, v: Optional[Valuation] = None) -> frozenset:
    """Clique as tuples with one component per sequent member."""
    v = v or default_valuation()
    check_sc(d)
    return _flat(d, v)


def interpret_sc(d, v: Optional[Valuation] = None) -> frozenset:
    flat = interpret_sc_flat(d, v)
    if not check_sc(d):
        return flat
    return frozenset(_sequent_token(t) for t in flat)


# structure of proof cliques

def leaf_values(t, f: Formula) -> list:
    if isinstance(f, (Atom, NegAtom)):
        return [t]
    return leaf_values(t[0], f.left) + leaf_values(t[1], f.right)


def _leaf_list(f: Formula) -> list:
    out = []

    def go(g):
        if isinstance(g, (Atom, NegAtom)):
            out.append((g.name, isinstance(g, Atom)))
        else:
            go(g.left)
            go(g.right)
    go(f)
    return out


def find_matching(clique, f: Formula, v: Optional[Valuation] = None) -> Optional[list]:
    """A pairing of dual leaves under which ``clique`` is exactly the diagonal product.

    Returns pairs of leaf indices (negative leaf, positive leaf) or None.
    """
    v = v or default_valuation()
    leaves = _leaf_list(f)
    rows = [leaf_values(t, f) for t in clique]
    if not rows:
        return None
    negs = [i for i, (_, pos) in enumerate(leaves) if not pos]
    poss = [i for i, (_, pos) in enumerate(leaves) if pos]
    if len(negs) != len(poss):
        return None
    options = {i: [j for j in poss if leaves[j][0] == leaves[i][0]
                   and all(r[i] == r[j] for r in rows)] for i in negs}
    expected = 1
    for i in negs:
        expected *= len(v[leaves[i][0]].carrier)

    def search(k, used, acc):
        if k == len(negs):
            if _is_diagonal_product(clique, f, v, acc, expected):
                return list(acc)
            return None
        i = negs[k]
        for j in options[i]:
            if j not in used:
                found = search(k + 1, used | {j}, acc + [(i, j)])
                if found is not None:
                    return found
        return None

    return search(0, frozenset(), [])


def _is_diagonal_product(clique, f, v, pairs, expected) -> bool:
    if len(clique) != expected:
        return False
    leaves = _leaf_list(f)
    n = len(leaves)
    carriers = [sorted(v[leaves[i][0]].carrier, key=token_key) for i, _ in pairs]
    built = set()
    for values in itertools.product(*carriers):
        row = [None] * n
        for (i, j), x in zip(pairs, values):
            row[i] = row[j] = x
        built.add(_assemble(row, f))
    return built == set(clique)


def _assemble(row, f):
    it = iter(row)

    def go(g):
        if isinstance(g, (Atom, NegAtom)):
            return next(it)
        left = go(g.left)
        return (left, go(g.right))
    return go(f)


def has_diagonal_product_structure(clique, f: Formula, v: Optional[Valuation] = None) -> bool:
    return find_matching(clique, f, v) is not None


def brute_force_clique(f: Formula, pairs, v: Optional[Valuation] = None) -> frozenset:
    """Every shape token of ``f`` whose paired leaves agree; pairs are leaf indices."""
    v = v or default_valuation()
    out = set()
    for t in tokens_of(f, v):
        vals = leaf_values(t, f)
        if all(vals[i] == vals[j] for i, j in pairs):
            out.add(t)
    return frozenset(out)


# valuation files

def parse_valuation(text: str) -> Valuation:
    import re

    spaces = {}
    line_re = re.compile(r"^\s*([a-z][a-z0-9_]*)\s*:\s*carrier\s*=\s*\[(.*?)\]\s*(?:;\s*coherent\s*=\s*\[(.*)\])?\s*$")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = line_re.match(line)
        if not m:
            raise SemanticsError(f"valuation line {lineno}: cannot parse {raw!r}")
        labels = [_label(x) for x in m.group(2).split(",") if x.strip()]
        if not labels:
            raise SemanticsError(f"valuation line {lineno}: empty carrier")
        edges = []
        if m.group(3):
            for a, b in re.findall(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)", m.group(3)):
                edges.append((_label(a), _label(b)))
        spaces[m.group(1)] = FiniteSpace(labels, edges)
    return Valuation(spaces)


def _label(text: str):
    text = text.strip()
    return int(text) if text.lstrip("-").isdigit() else text
