"""One-sided sequent calculus: derivation trees, checking and cut elimination.

Rules pivot on adjacent positions.  ``TensorRule`` and ``Cut`` combine the
last member of the left premise with the first member of the right one;
everything else is moved into place with ``Exch``.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Union

from .syntax import (
    Atom, MllError, NegAtom, Par, Tensor, Formula, check_atom_name, negate,
    render_formula, FormulaSyntaxError, NnfViolation,
)


class ScCheckError(MllError):
    pass


class CutMismatch(ScCheckError):
    def __init__(self, left: Formula, right: Formula):
        super().__init__(
            f"cut mismatch: left premise ends with {left}, right premise starts with {right}, "
            f"expected {negate(left)}")
        self.left = left
        self.right = right


class DerivationSyntaxError(MllError):
    pass


class RuleMetrics(Counter):
    """Per-rule counts; missing rules read as zero."""

    def as_dict(self) -> dict:
        return {k: v for k, v in sorted(self.items()) if v}


@dataclass(frozen=True, eq=True)
class Ax:
    atom: str


@dataclass(frozen=True, eq=True)
class Id:
    formula: Formula


@dataclass(frozen=True, eq=True)
class Exch:
    index: int
    child: "ScDerivation"


@dataclass(frozen=True, eq=True)
class ParRule:
    index: int
    child: "ScDerivation"


@dataclass(frozen=True, eq=True)
class TensorRule:
    left: "ScDerivation"
    right: "ScDerivation"


@dataclass(frozen=True, eq=True)
class Cut:
    left: "ScDerivation"
    right: "ScDerivation"


ScDerivation = Union[Ax, Id, Exch, ParRule, TensorRule, Cut]
LEAVES = (Ax, Id)
UNARY = (Exch, ParRule)
BINARY = (TensorRule, Cut)


def children(d) -> tuple:
    if isinstance(d, UNARY):
        return (d.child,)
    if isinstance(d, BINARY):
        return (d.left, d.right)
    return ()


def with_children(d, kids):
    if isinstance(d, UNARY):
        return type(d)(d.index, kids[0])
    if isinstance(d, BINARY):
        return type(d)(kids[0], kids[1])
    return d


# checking

def _rule_conclusion(d, prem) -> tuple:
    if isinstance(d, Ax):
        check_atom_name(d.atom)
        return (NegAtom(d.atom), Atom(d.atom))
    if isinstance(d, Id):
        return (negate(d.formula), d.formula)
    if isinstance(d, (Exch, ParRule)):
        (s,) = prem
        i = d.index
        name = "exch" if isinstance(d, Exch) else "par"
        if not (isinstance(i, int) and 0 <= i and i + 1 < len(s)):
            raise ScCheckError(f"{name} index {i} out of range for premise of length {len(s)}")
        if isinstance(d, Exch):
            return s[:i] + (s[i + 1], s[i]) + s[i + 2:]
        return s[:i] + (Par(s[i], s[i + 1]),) + s[i + 2:]
    left, right = prem
    name = "tensor" if isinstance(d, TensorRule) else "cut"
    if not left or not right:
        raise ScCheckError(f"{name} needs nonempty premises")
    if isinstance(d, TensorRule):
        return left[:-1] + (Tensor(left[-1], right[0]),) + right[1:]
    if right[0] != negate(left[-1]):
        raise CutMismatch(left[-1], right[0])
    return left[:-1] + right[1:]


def check_sc(d: ScDerivation) -> tuple:
    """Return the conclusion of ``d`` or raise ``ScCheckError``."""
    cached = d.__dict__.get("_concl")
    if cached is not None:
        return cached
    stack = [(d, False)]
    while stack:
        node, ready = stack.pop()
        if "_concl" in node.__dict__:
            continue
        kids = children(node)
        if not ready and kids:
            stack.append((node, True))
            stack.extend((k, False) for k in kids if "_concl" not in k.__dict__)
            continue
        if not isinstance(node, (Ax, Id, Exch, ParRule, TensorRule, Cut)):
            raise ScCheckError(f"not a derivation node: {node!r}")
        concl = _rule_conclusion(node, [k.__dict__["_concl"] for k in kids])
        object.__setattr__(node, "_concl", concl)
    return d.__dict__["_concl"]


def is_valid(d) -> bool:
    try:
        check_sc(d)
        return True
    except MllError:
        return False


def nodes(d):
    """All nodes, pre-order."""
    stack = [d]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


RULE_NAMES = {Ax: "ax", Id: "id", Exch: "exch", ParRule: "par", TensorRule: "tensor", Cut: "cut"}


def sc_metrics(d: ScDerivation) -> RuleMetrics:
    m = RuleMetrics({name: 0 for name in RULE_NAMES.values()})
    for n in nodes(d):
        m[RULE_NAMES[type(n)]] += 1
    return m


def height(d) -> int:
    kids = children(d)
    return 1 + max((height(k) for k in kids), default=0)


# text format

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([*%⊗⅋])|([~A-Za-z0-9_]+)|(\S))")


def _tokens(text: str):
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if rest:
                raise DerivationSyntaxError(f"unexpected {rest[:10]!r} at byte {len(text[:pos].encode())}")
            return
        if m.group(5):
            raise DerivationSyntaxError(f"unexpected {m.group(5)!r} at byte {len(text[:m.start(5)].encode())}")
        yield m.group(m.lastindex), len(text[:m.start(m.lastindex)].encode())
        pos = m.end()


def _read_sexp(text: str):
    stack, top = [], []
    for tok, off in _tokens(text):
        if tok == "(":
            stack.append((top, off))
            top = []
        elif tok == ")":
            if not stack:
                raise DerivationSyntaxError(f"unbalanced ')' at byte {off}")
            parent, _ = stack.pop()
            parent.append(top)
            top = parent
        else:
            top.append(tok)
    if stack:
        raise DerivationSyntaxError(f"unclosed '(' opened at byte {stack[-1][1]}")
    return top


def sexp_to_formula(x) -> Formula:
    if isinstance(x, str):
        if x.startswith("~"):
            name = x[1:]
            if name.startswith("~") or not name:
                raise NnfViolation(x, 0)
            return NegAtom(check_atom_name(name))
        return Atom(check_atom_name(x))
    if len(x) == 3 and x[1] in ("*", "⊗", "%", "⅋"):
        node = Tensor if x[1] in ("*", "⊗") else Par
        return node(sexp_to_formula(x[0]), sexp_to_formula(x[2]))
    if len(x) == 2 and x[0] == "~":
        raise NnfViolation("~" + str(x[1]), 0)
    raise FormulaSyntaxError(f"bad formula {x!r}", 0)


def _build(x):
    if not isinstance(x, list) or not x or not isinstance(x[0], str):
        raise DerivationSyntaxError(f"expected a rule, found {x!r}")
    head, args = x[0], x[1:]

    def need(n):
        if len(args) != n:
            raise DerivationSyntaxError(f"({head} ...) takes {n} arguments, got {len(args)}")

    def index(tok):
        if not isinstance(tok, str) or not tok.isdigit():
            raise DerivationSyntaxError(f"({head} ...) needs a numeric index, got {tok!r}")
        return int(tok)

    if head == "ax":
        need(1)
        if not isinstance(args[0], str):
            raise DerivationSyntaxError("(ax ...) takes an atom")
        return Ax(check_atom_name(args[0]))
    if head == "id":
        need(1)
        return Id(sexp_to_formula(args[0]))
    if head in ("exch", "par"):
        need(2)
        return (Exch if head == "exch" else ParRule)(index(args[0]), _build(args[1]))
    if head in ("tensor", "cut"):
        need(2)
        return (TensorRule if head == "tensor" else Cut)(_build(args[0]), _build(args[1]))
    raise DerivationSyntaxError(f"unknown rule {head!r}")


def parse_sc(text: str) -> ScDerivation:
    lines = [ln.split(";", 1)[0] for ln in text.splitlines()]
    forms = _read_sexp("\n".join(lines))
    if len(forms) != 1:
        raise DerivationSyntaxError(f"expected one derivation, found {len(forms)}")
    return _build(forms[0])


def render_sc(d: ScDerivation, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(d, Ax):
        return f"{pad}(ax {d.atom})"
    if isinstance(d, Id):
        return f"{pad}(id {render_formula(d.formula)})"
    if isinstance(d, UNARY):
        name = "exch" if isinstance(d, Exch) else "par"
        return f"{pad}({name} {d.index}\n{render_sc(d.child, indent + 1)})"
    name = "tensor" if isinstance(d, TensorRule) else "cut"
    return f"{pad}({name}\n{render_sc(d.left, indent + 1)}\n{render_sc(d.right, indent + 1)})"


# small builders

def exch_chain(d, indices) -> ScDerivation:
    for i in indices:
        d = Exch(i, d)
    return d


def permute(d: ScDerivation, order) -> ScDerivation:
    """Reorder the conclusion so that new[k] = old[order[k]], via adjacent swaps."""
    n = len(check_sc(d))
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{order} is not a permutation of {n} positions")
    cur = list(range(n))
    for k, want in enumerate(order):
        j = cur.index(want)
        while j > k:
            d = Exch(j - 1, d)
            cur[j - 1], cur[j] = cur[j], cur[j - 1]
            j -= 1
    return d


def move(d: ScDerivation, src: int, dst: int) -> ScDerivation:
    """Move member ``src`` to position ``dst``, keeping the others in order."""
    n = len(check_sc(d))
    order = [i for i in range(n) if i != src]
    order.insert(dst, src)
    return permute(d, order)


# atomization

def identity_proof(f: Formula) -> ScDerivation:
    """Id-free proof of ``|- negate(f), f``."""
    if isinstance(f, Atom):
        return Ax(f.name)
    if isinstance(f, NegAtom):
        return Exch(0, Ax(f.name))
    pb, pc = identity_proof(f.left), identity_proof(f.right)
    if isinstance(f, Tensor):
        # |- ~B, B*C, ~C  then  |- ~B, ~C, B*C  then  |- ~B%~C, B*C
        return ParRule(0, Exch(1, TensorRule(pb, Exch(0, pc))))
    # |- B, ~B*~C, C  then  |- ~B*~C, B, C  then  |- ~B*~C, B%C
    return ParRule(1, Exch(0, TensorRule(Exch(0, pb), pc)))


def atomize_sc(d: ScDerivation) -> ScDerivation:
    check_sc(d)
    return _map_leaves(d, lambda n: identity_proof(n.formula) if isinstance(n, Id) else n)


def _map_leaves(d, fn):
    memo = {}
    stack = [(d, False)]
    while stack:
        n, ready = stack.pop()
        if id(n) in memo:
            continue
        kids = children(n)
        if not kids:
            memo[id(n)] = fn(n)
            continue
        if not ready:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
            continue
        new_kids = [memo[id(k)] for k in kids]
        memo[id(n)] = n if all(a is b for a, b in zip(new_kids, kids)) else with_children(n, new_kids)
    return memo[id(d)]


# cut elimination

def _without(s, k):
    return s[:k] + s[k + 1:]


def _intro_here(d, k) -> bool:
    """Does the last rule of ``d`` create member ``k`` of its conclusion?"""
    if isinstance(d, LEAVES):
        return True
    if isinstance(d, ParRule):
        return k == d.index
    if isinstance(d, TensorRule):
        return k == len(check_sc(d.left)) - 1
    return False


def _cut_at(left, k, right, m) -> ScDerivation:
    """Cut-free proof of (left minus k) ++ (right minus m).

    Member k of ``left`` and member m of ``right`` must be dual; both
    premises must already be cut-free.
    """
    ls = check_sc(left)
    # commute past rules of the left premise that do not touch the cut formula
    if not _intro_here(left, k):
        if isinstance(left, Exch):
            i = left.index
            k0 = i + 1 if k == i else i if k == i + 1 else k
            sub = _cut_at(left.child, k0, right, m)
            if k in (i, i + 1):
                return sub
            return Exch(i if i < k else i - 1, sub)
        if isinstance(left, ParRule):
            i = left.index
            k0 = k if k < i else k + 1
            sub = _cut_at(left.child, k0, right, m)
            return ParRule(i if i < k0 else i - 1, sub)
        if isinstance(left, TensorRule):
            la = check_sc(left.left)
            if k < len(la) - 1:
                sub = _cut_at(left.left, k, right, m)
                # move the tensor pivot back to the end of the new left premise
                n_sub = len(check_sc(sub))
                sub = move(sub, len(la) - 2, n_sub - 1)
                joined = TensorRule(sub, left.right)
                # joined: la\k, R\m, A*B, rest-of-right ; target: la\k, A*B, rest, R\m
                a = len(la) - 2
                rm = len(check_sc(right)) - 1
                rest = len(check_sc(left.right)) - 1
                order = list(range(a)) + [a + rm] + list(range(a + rm + 1, a + rm + 1 + rest)) + list(range(a, a + rm))
                return permute(joined, order)
            j = k - (len(la) - 1)
            sub = _cut_at(left.right, j, right, m)
            return TensorRule(left.left, sub)
        raise ScCheckError(f"unexpected {type(left).__name__} in cut-free premise")
    if isinstance(left, LEAVES):
        # axiom case: the other member of the axiom is the dual formula, so
        # the result is the right premise with member m brought to the front
        return move(right, m, 0)
    if isinstance(right, LEAVES) or not _intro_here(right, m):
        sub = _cut_at(right, m, left, k)
        nr = len(check_sc(right)) - 1
        nl = len(ls) - 1
        return permute(sub, list(range(nr, nr + nl)) + list(range(nr)))
    # principal case: par against tensor on the cut formula
    if isinstance(left, TensorRule):
        sub = _cut_at(right, m, left, k)
        nr = len(check_sc(right)) - 1
        nl = len(ls) - 1
        return permute(sub, list(range(nr, nr + nl)) + list(range(nr)))
    assert isinstance(left, ParRule) and isinstance(right, TensorRule)
    i = left.index
    l0 = left.child
    ra, rb = right.left, right.right
    # cut A2 against ~A2 first, then A1 against ~A1
    first = _cut_at(l0, i + 1, rb, 0)
    second = _cut_at(first, i, ra, len(check_sc(ra)) - 1)
    # second: l0 minus {i, i+1}, rb[1:], ra[:-1] ; target: l0 minus both, ra[:-1], rb[1:]
    base = len(check_sc(l0)) - 2
    nb = len(check_sc(rb)) - 1
    na = len(check_sc(ra)) - 1
    order = list(range(base)) + list(range(base + nb, base + nb + na)) + list(range(base, base + nb))
    return permute(second, order)


def eliminate_cuts(d: ScDerivation) -> ScDerivation:
    """Cut-free derivation with the same conclusion, removing topmost cuts first."""
    check_sc(d)
    memo = {}
    stack = [(d, False)]
    while stack:
        n, ready = stack.pop()
        if id(n) in memo:
            continue
        kids = children(n)
        if not kids:
            memo[id(n)] = n
            continue
        if not ready:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
            continue
        new_kids = [memo[id(k)] for k in kids]
        if isinstance(n, Cut):
            left, right = new_kids
            memo[id(n)] = _cut_at(left, len(check_sc(left)) - 1, right, 0)
        elif all(a is b for a, b in zip(new_kids, kids)):
            memo[id(n)] = n
        else:
            memo[id(n)] = with_children(n, new_kids)
    return memo[id(d)]
