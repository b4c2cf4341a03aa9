"""Translations between the sequent calculus and deep inference.

``sc_to_di`` turns each sequent rule into a block of rewrite steps acting on
the left-bracketed par of the sequent.  ``di_to_sc_naive`` proves each step
as a lemma and cuts it in; ``di_to_sc_direct`` instead edits one growing
sequent proof, so it only needs a cut where the trace has an i-up.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .di_kernel import (
    DiDerivation, DiStep, apply_step, atomize_di, check_di, di_metrics,
    expand_sigma_switch, rewrite, shift, trace_formulas, PatternMismatch,
)
from .sc_kernel import (
    Ax, Cut, Exch, Id, ParRule, TensorRule, LEAVES, RuleMetrics, check_sc, children,
    move, permute, sc_metrics,
)
from .syntax import (
    Atom, MllError, NegAtom, Par, Tensor, Formula, negate, render_formula,
    sequent_to_formula, subformula_at,
)


class TranslationError(MllError):
    pass


class LocationError(TranslationError):
    """A formula occurrence could not be traced in the sequent proof."""


def _atomic(f) -> bool:
    return isinstance(f, (Atom, NegAtom))


# sequent calculus to deep inference

def _graft(sub: DiDerivation, q: str) -> list:
    """Steps that introduce ``sub``'s axiom at ``q`` and replay it at ``q + 'R'``."""
    if sub.kind == "open":
        raise TranslationError("cannot graft an open derivation")
    first = DiStep(sub.kind, q, sub.payload)
    return [first] + shift(sub.steps, q + "R")


def sc_to_di(d) -> DiDerivation:
    check_sc(d)
    if isinstance(d, Ax):
        return DiDerivation("ai-down", d.atom)
    if isinstance(d, Id):
        return DiDerivation("i-down", d.formula)
    if isinstance(d, (Exch, ParRule)):
        sub = sc_to_di(d.child)
        n = len(check_sc(d.child))
        i = d.index
        p = "L" * (n - i - 2)
        up = lambda q: DiStep("sigma-up", q)
        if isinstance(d, Exch):
            steps = [up(p)] if i == 0 else [up(p), DiStep("alpha-up", p), up(p + "L")]
        else:
            steps = [] if i == 0 else [up(p), up(p + "R"), DiStep("alpha-up", p), up(p), up(p + "R")]
        return sub.extend(steps)
    left, right = sc_to_di(d.left), sc_to_di(d.right)
    g = len(check_sc(d.left)) - 1
    m = len(check_sc(d.right)) - 1
    is_cut = isinstance(d, Cut)
    if is_cut:
        a = check_sc(d.left)[-1]
        up_rule = "ai-up" if _atomic(a) else "i-up"
    if g > 0:
        # S{B} -> S{B * ([G] % A)} -> S{([G] % A) * B} -> S{[G] % (A * B)}
        q = "L" * m
        tail = [DiStep("sigma-down", q), DiStep("sigma-switch", q)]
        if is_cut:
            tail += [DiStep("sigma-up", q), DiStep(up_rule, q)]
    elif m > 0:
        # no left context: graft next to (B % D) instead and use a switch
        q = "L" * (m - 1)
        tail = [DiStep("sigma-down", q), DiStep("switch", q)]
        if is_cut:
            tail.append(DiStep(up_rule, q))
    else:
        if is_cut:
            raise TranslationError("cut between two singleton sequents has an empty conclusion")
        q = ""
        tail = [DiStep("sigma-down", q)]
    return right.extend(_graft(left, q) + tail)


# lemma proofs of |- ~P, Q

def build_pq_lemma(rule: str, P: Formula, Q: Formula):
    """Sequent proof of ``|- negate(P), Q`` for one rewrite ``P => Q``."""
    if rule in ("ai-down", "i-down"):
        if not (isinstance(Q, Tensor) and isinstance(Q.right, Par) and Q.left == P
                and Q.right.left == negate(Q.right.right)):
            raise PatternMismatch(f"{rule} lemma: {render_formula(Q)} is not P * (~A % A)")
        a = Q.right.right
        leaf = Ax(a.name) if rule == "ai-down" and isinstance(a, Atom) else Id(a)
        return TensorRule(Id(P), ParRule(0, leaf))
    expect = rewrite(rule, P)
    if expect != Q:
        raise PatternMismatch(f"{rule} lemma: {render_formula(P)} rewrites to {render_formula(expect)}, "
                              f"not {render_formula(Q)}")
    if rule in ("ai-up", "i-up"):
        a, b = P.left.left, P.right
        return TensorRule(ParRule(0, Id(a)), Id(b))
    if rule == "sigma-up":
        a, b = P.left, P.right
        return ParRule(1, Exch(1, Exch(0, TensorRule(Exch(0, Id(a)), Id(b)))))
    if rule == "sigma-down":
        a, b = P.left, P.right
        return ParRule(0, Exch(0, Exch(1, TensorRule(Id(b), Exch(0, Id(a))))))
    if rule == "alpha-down":
        a, b, c = P.left.left, P.left.right, P.right
        bc = Exch(0, TensorRule(Id(b), Exch(0, Id(c))))
        return ParRule(0, ParRule(0, Exch(2, Exch(1, TensorRule(Id(a), bc)))))
    if rule == "alpha-up":
        a, b, c = P.left, P.right.left, P.right.right
        bc = Exch(0, TensorRule(Exch(0, Id(b)), Id(c)))
        return ParRule(1, ParRule(1, Exch(0, TensorRule(Exch(0, Id(a)), bc))))
    if rule == "switch":
        a, b, c = P.left, P.right.left, P.right.right
        ab = TensorRule(Id(a), Exch(0, Id(b)))
        return ParRule(1, ParRule(0, Exch(1, TensorRule(ab, Id(c)))))
    if rule == "sigma-switch":
        a, b, c = P.left.left, P.left.right, P.right
        bc = TensorRule(Id(b), Exch(0, Id(c)))
        return ParRule(0, Exch(1, ParRule(1, Exch(0, TensorRule(Exch(0, Id(a)), bc)))))
    raise TranslationError(f"no lemma for rule {rule!r}")


def wrap_in_context(lemma, hole_path: str, host: Formula):
    """Extend ``|- ~P, Q`` to ``|- ~S{P}, S{Q}`` where S is ``host`` around ``hole_path``."""
    d = lemma
    for k in range(len(hole_path) - 1, -1, -1):
        parent = subformula_at(host, hole_path[:k])
        if not isinstance(parent, (Tensor, Par)):
            raise TranslationError(f"path {hole_path} is not valid in {render_formula(host)}")
        hole_left = hole_path[k] == "L"
        b = parent.right if hole_left else parent.left
        if isinstance(parent, Tensor):
            if hole_left:
                d = ParRule(0, Exch(1, TensorRule(d, Exch(0, Id(b)))))
            else:
                d = ParRule(0, Exch(1, TensorRule(Id(b), Exch(0, d))))
        else:
            if hole_left:
                d = ParRule(1, Exch(0, TensorRule(Exch(0, d), Id(b))))
            else:
                d = ParRule(1, Exch(0, TensorRule(Exch(0, Id(b)), d)))
    return d


def _axiom_proof(d: DiDerivation):
    if d.kind == "open":
        raise TranslationError("an open derivation has no sequent proof of its premise")
    leaf = Ax(d.payload) if d.kind == "ai-down" else Id(d.payload)
    return ParRule(0, leaf)


def di_to_sc_naive(d: DiDerivation):
    forms = trace_formulas(d)
    proof = _axiom_proof(d)
    for s, before, after in zip(d.steps, forms, forms[1:]):
        p_sub = subformula_at(before, s.path)
        q_sub = subformula_at(after, s.path)
        lemma = build_pq_lemma(s.rule, p_sub, q_sub)
        proof = Cut(proof, wrap_in_context(lemma, s.path, before))
    return proof


# direct translation by editing one sequent proof

def _get(d, addr):
    for i in addr:
        d = children(d)[i]
    return d


def _put(d, addr, new):
    if not addr:
        return new
    i, rest = addr[0], addr[1:]
    if isinstance(d, (Exch, ParRule)):
        return type(d)(d.index, _put(d.child, rest, new))
    if i == 0:
        return type(d)(_put(d.left, rest, new), d.right)
    return type(d)(d.left, _put(d.right, rest, new))


def _trace(root, addr, idx) -> list:
    """Follow member ``idx`` of the node at ``addr`` upward to the rule that makes it."""
    chain = [(addr, idx)]
    node = _get(root, addr)
    while not isinstance(node, LEAVES):
        if isinstance(node, Exch):
            i = node.index
            idx = i + 1 if idx == i else i if idx == i + 1 else idx
            nxt = 0
        elif isinstance(node, ParRule):
            if idx == node.index:
                break
            idx = idx if idx < node.index else idx + 1
            nxt = 0
        else:
            nl = len(check_sc(node.left))
            if isinstance(node, TensorRule) and idx == nl - 1:
                break
            if idx < nl - 1:
                nxt = 0
            else:
                nxt = 1
                idx = idx - (nl - 1) + (1 if isinstance(node, Cut) else 0)
        addr = addr + (nxt,)
        node = children(node)[nxt]
        chain.append((addr, idx))
    return chain


def _locate(root, path: str) -> list:
    """Chain from the lowest node where the occurrence at ``path`` is a sequent member to its rule."""
    chain = _trace(root, (), 0)
    for k, step in enumerate(path):
        addr, idx = chain[-1]
        node = _get(root, addr)
        if isinstance(node, ParRule):
            chain = _trace(root, addr + (0,), idx if step == "L" else idx + 1)
        elif isinstance(node, TensorRule):
            if step == "L":
                chain = _trace(root, addr + (0,), len(check_sc(node.left)) - 1)
            else:
                chain = _trace(root, addr + (1,), 0)
        else:
            raise LocationError(f"occurrence at {path[:k] or '.'} ends in an axiom before the path does")
    return chain


def _rebuild(root, chain, new_intro, width):
    """Swap the rule at the end of ``chain`` for ``new_intro``.

    The occurrence traced by the chain becomes ``width`` consecutive members
    (0 deletes it).  Rules between are re-indexed; exchanges that moved the
    occurrence now move the whole block.  Returns the new node at chain[0].
    """
    new = new_intro
    for (addr, _), (child_addr, j) in zip(reversed(chain[:-1]), reversed(chain[1:])):
        node = _get(root, addr)
        if isinstance(node, Exch):
            i = node.index
            if j == i:
                new = move(new, i + width, i)
            elif j == i + 1:
                new = move(new, i, i + width)
            else:
                new = Exch(i if i < j else i + width - 1, new)
        elif isinstance(node, ParRule):
            i = node.index
            new = ParRule(i if i < j else i + width - 1, new)
        elif child_addr[-1] == 0:
            new = type(node)(new, node.right)
        else:
            new = type(node)(node.left, new)
    return new


def _expect(node, kind, what):
    if not isinstance(node, kind):
        raise LocationError(f"expected the {what} to come from a {kind.__name__}, found {type(node).__name__}")


def _direct_step(root, s: DiStep):
    chain = _locate(root, s.path)
    if s.rule == "ai-down":
        addr, j = chain[0]
        x = _get(root, addr)
        n = len(check_sc(x))
        block = move(TensorRule(move(x, j, n - 1), ParRule(0, Ax(s.param))), n - 1, j)
        return _put(root, addr, block)
    addr, i = chain[-1]
    node = _get(root, addr)
    if s.rule == "sigma-up":
        _expect(node, ParRule, "par")
        return _put(root, addr, ParRule(node.index, Exch(node.index, node.child)))
    if s.rule == "sigma-down":
        _expect(node, TensorRule, "tensor")
        g = len(check_sc(node.left)) - 1
        r = len(check_sc(node.right)) - 1
        swapped = TensorRule(move(node.right, 0, r), move(node.left, g, 0))
        order = list(range(r + 1, r + 1 + g)) + [r] + list(range(r))
        return _put(root, addr, permute(swapped, order))
    if s.rule == "alpha-up":
        _expect(node, ParRule, "par")
        inner = _trace(root, addr + (0,), node.index + 1)
        par = _get(root, inner[-1][0])
        _expect(par, ParRule, "inner par")
        opened = _rebuild(root, inner, par.child, 2)
        return _put(root, addr, ParRule(node.index, ParRule(node.index, opened)))
    if s.rule == "switch":
        _expect(node, TensorRule, "tensor")
        inner = _trace(root, addr + (1,), 0)
        par = _get(root, inner[-1][0])
        _expect(par, ParRule, "par under the tensor")
        opened = _rebuild(root, inner, par.child, 2)
        g = len(check_sc(node.left)) - 1
        return _put(root, addr, ParRule(g, TensorRule(node.left, opened)))
    if s.rule == "alpha-down":
        _expect(node, TensorRule, "tensor")
        gl = len(check_sc(node.left)) - 1
        inner = _trace(root, addr + (0,), gl)
        t0 = _get(root, inner[-1][0])
        _expect(t0, TensorRule, "inner tensor")
        pa, pb, pc = t0.left, t0.right, node.right
        nb = len(check_sc(pb)) - 1
        r = len(check_sc(pc)) - 1
        e1 = TensorRule(move(pb, 0, nb), pc)
        e2 = permute(e1, [nb] + list(range(nb + 1, nb + 1 + r)) + list(range(nb)))
        block = TensorRule(pa, e2)
        return _put(root, addr, _rebuild(root, inner, block, 1 + r))
    if s.rule in ("ai-up", "i-up"):
        _expect(node, ParRule, "par")
        inner = _trace(root, addr + (0,), node.index)
        t0 = _get(root, inner[-1][0])
        _expect(t0, TensorRule, "tensor of the cut pair")
        return _put(root, addr, _rebuild(root, inner, Cut(t0.left, t0.right), 0))
    raise TranslationError(f"direct translation has no case for {s.rule}")


def di_to_sc_direct(d: DiDerivation):
    prepared = expand_sigma_switch(atomize_di(d))
    proof = _axiom_proof(prepared)
    for s in prepared.steps:
        proof = _direct_step(proof, s)
    return proof


# reports

@dataclass
class TranslationReport:
    direction: str
    output: object
    input_metrics: RuleMetrics
    output_metrics: RuleMetrics
    equalities: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(h for _, h in self.equalities)

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "input_metrics": self.input_metrics.as_dict(),
            "output_metrics": self.output_metrics.as_dict(),
            "equalities": [{"name": n, "holds": bool(h)} for n, h in self.equalities],
        }


def _switch_family(m) -> int:
    return m["switch"] + m["sigma-switch"]


def _i_up_family(m) -> int:
    return m["i-up"] + m["ai-up"]


def sc_to_di_equalities(sc_m, di_m) -> list:
    return [
        ("id = i-down", sc_m["id"] == di_m["i-down"]),
        ("ax = ai-down", sc_m["ax"] == di_m["ai-down"]),
        ("cut = i-up", sc_m["cut"] == _i_up_family(di_m)),
        ("cut + tensor = switch-family", sc_m["cut"] + sc_m["tensor"] == _switch_family(di_m)),
        ("ai-down + i-down - 1 = switch-family",
         di_m["ai-down"] + di_m["i-down"] - 1 == _switch_family(di_m)),
    ]


def direct_equalities(di_m, sc_m) -> list:
    """Identities for the direct translation; ``di_m`` counts the atomized input."""
    return [
        ("ai-down = ax", di_m["ai-down"] == sc_m["ax"]),
        ("i-up = cut", _i_up_family(di_m) == sc_m["cut"]),
        ("ai-down - 1 = tensor + cut", di_m["ai-down"] - 1 == sc_m["tensor"] + sc_m["cut"]),
    ]


def sc_identity(sc_m) -> tuple:
    return ("cut + tensor = ax + id - 1", sc_m["cut"] + sc_m["tensor"] == sc_m["ax"] + sc_m["id"] - 1)


def translate_with_report(direction: str, d) -> TranslationReport:
    from .sc_kernel import atomize_sc, eliminate_cuts  # local to keep the import list short

    if direction == "sc2di":
        out = sc_to_di(d)
        mi, mo = sc_metrics(d), di_metrics(out)
        eqs = sc_to_di_equalities(mi, mo)
        eqs.append(("conclusion preserved", check_di(out) == sequent_to_formula(check_sc(d))))
    elif direction == "di2sc":
        out = di_to_sc_direct(d)
        mi, mo = di_metrics(d), sc_metrics(out)
        eqs = direct_equalities(di_metrics(atomize_di(d)), mo)
        eqs.append(("conclusion preserved", check_sc(out) == (check_di(d),)))
    elif direction == "di2sc-naive":
        out = di_to_sc_naive(d)
        mi, mo = di_metrics(d), sc_metrics(out)
        eqs = [("cut = non-axiom steps", mo["cut"] == len(d.steps)),
               ("conclusion preserved", check_sc(out) == (check_di(d),))]
    elif direction == "cutelim":
        out = eliminate_cuts(d)
        mi, mo = sc_metrics(d), sc_metrics(out)
        eqs = [("cut = 0", mo["cut"] == 0),
               ("ax + id = tensor + 1", mo["ax"] + mo["id"] == mo["tensor"] + 1),
               ("conclusion preserved", check_sc(out) == check_sc(d))]
    elif direction == "atomize":
        if isinstance(d, DiDerivation):
            out = atomize_di(d)
            mi, mo = di_metrics(d), di_metrics(out)
            eqs = [("i-down = 0", mo["i-down"] == 0),
                   ("conclusion preserved", check_di(out) == check_di(d))]
        else:
            out = atomize_sc(d)
            mi, mo = sc_metrics(d), sc_metrics(out)
            eqs = [("id = 0", mo["id"] == 0),
                   ("conclusion preserved", check_sc(out) == check_sc(d))]
    else:
        raise TranslationError(f"unknown direction {direction!r}")
    return TranslationReport(direction, out, mi, mo, eqs)
