import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from conftest import formulas
from mll.di_kernel import (
    RULES, atomize_di, check_di, di_metrics, parse_di, render_di, rewrite,
)
from mll.fixtures import cut_sc, sample_di
from mll.fuzz import FuzzConfig, fuzz_di, fuzz_sc
from mll.sc_kernel import Ax, Cut, Id, ParRule, TensorRule, check_sc, nodes, sc_metrics
from mll.syntax import (
    Atom, MllError, NegAtom, Par, Tensor, iter_paths, negate, parse_formula, render_formula, replace_at, sequent_to_formula,
    subformula_at,
)
from mll.translate import (
    TranslationError, build_pq_lemma, di_to_sc_direct, di_to_sc_naive, direct_equalities, sc_identity,
    sc_to_di, sc_to_di_equalities, translate_with_report, wrap_in_context,
)

# the printed translation of the cut example, one step per line
CUT_EXAMPLE_TRACE = """\
axiom ai-down c
ai-down L b
sigma-down L
sigma-switch L
ai-down LL b
ai-down LLRL a
sigma-down LLRL
sigma-switch LLRL
sigma-down LL
sigma-switch LL
sigma-up LL
ai-up LL
"""


def test_cut_example_to_di_matches_printed_trace():
    d = sc_to_di(cut_sc())
    assert render_di(d) == CUT_EXAMPLE_TRACE
    assert len(d.steps) + 1 == 12
    m = {k: v for k, v in di_metrics(d).items() if v}
    assert m == {"ai-down": 4, "sigma-down": 3, "sigma-switch": 3, "sigma-up": 1, "ai-up": 1}
    assert render_formula(check_di(d)) == "(((~a % (a * ~b)) % (b * ~c)) % c)"


def test_axiom_to_di():
    assert sc_to_di(Ax("a")) == parse_di("axiom ai-down a")
    assert sc_to_di(Id(parse_formula("(a * b)"))) == parse_di("axiom i-down (a * b)")


def test_singleton_cut_is_rejected_shape():
    # a cut of two singleton premises cannot be built, so sc_to_di never sees one
    with pytest.raises(MllError):
        check_sc(Cut(ParRule(0, Ax("a")), ParRule(0, Ax("a"))))


def test_naive_on_sample():
    out = di_to_sc_naive(sample_di())
    m = sc_metrics(out)
    assert m["cut"] == 3
    assert (m["ax"], m["id"]) == (2, 9)
    assert check_sc(out) == (check_di(sample_di()),)


def test_naive_on_axiom():
    assert di_to_sc_naive(parse_di("axiom ai-down a")) == ParRule(0, Ax("a"))


def test_direct_on_sample():
    out = di_to_sc_direct(sample_di())
    m = sc_metrics(out)
    assert (m["cut"], m["ax"], m["tensor"], m["id"]) == (0, 2, 1, 0)
    assert check_sc(out) == (check_di(sample_di()),)
    assert di_to_sc_direct(parse_di("axiom ai-down a")) == ParRule(0, Ax("a"))


def test_lemma_examples():
    a = parse_formula("a")
    d = build_pq_lemma("i-down", a, parse_formula("(a * (~b % b))"))
    assert check_sc(d) == (parse_formula("~a"), parse_formula("(a * (~b % b))"))
    p = parse_formula("(a * (b % c))")
    d = build_pq_lemma("switch", p, rewrite("switch", p))
    assert check_sc(d) == (negate(p), parse_formula("((a * b) % c)"))
    p = parse_formula("(a * b)")
    assert check_sc(build_pq_lemma("sigma-down", p, parse_formula("(b * a)"))) == \
        (parse_formula("(~a % ~b)"), parse_formula("(b * a)"))
    with pytest.raises(MllError):
        build_pq_lemma("switch", p, p)


INSTANCES = {
    "ai-up": lambda x, y, z: Par(Tensor(Atom("a"), NegAtom("a")), x),
    "i-up": lambda x, y, z: Par(Tensor(y, negate(y)), x),
    "sigma-up": lambda x, y, z: Par(x, y),
    "sigma-down": lambda x, y, z: Tensor(x, y),
    "alpha-up": lambda x, y, z: Par(x, Par(y, z)),
    "alpha-down": lambda x, y, z: Tensor(Tensor(x, y), z),
    "switch": lambda x, y, z: Tensor(x, Par(y, z)),
    "sigma-switch": lambda x, y, z: Tensor(Par(x, y), z),
}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(INSTANCES)), formulas, formulas, formulas)
def test_every_lemma_proves_its_sequent(rule, x, y, z):
    p = INSTANCES[rule](x, y, z)
    q = rewrite(rule, p)
    d = build_pq_lemma(rule, p, q)
    assert check_sc(d) == (negate(p), q)


@settings(max_examples=80, deadline=None)
@given(formulas, st.data())
def test_wrap_in_context(host, data):
    paths = list(iter_paths(host))
    p = data.draw(st.sampled_from(paths))
    pf = subformula_at(host, p)
    lemma = build_pq_lemma("i-down", pf, parse_formula(f"({render_formula(pf)} * (~a % a))"))
    q = subformula_at(replace_at(host, p, parse_formula(f"({render_formula(pf)} * (~a % a))")), p)
    d = wrap_in_context(lemma, p, host)
    assert check_sc(d) == (negate(host), replace_at(host, p, q))


def _bfs_intro_switch(target, atoms_, max_intro, max_switch):
    """(intro, switch-family) counts of every derivation of ``target`` found within the bounds."""
    starts = [(Par(NegAtom(x), Atom(x)), 1, 0) for x in atoms_]
    seen, q, found = set(starts), deque(starts), set()
    while q:
        f, ni, ns = q.popleft()
        if f == target:
            found.add((ni, ns))
        for p in iter_paths(f):
            g = subformula_at(f, p)
            for r in RULES:
                if r in ("i-down", "ai-up", "i-up"):
                    continue
                if r == "ai-down":
                    if ni >= max_intro:
                        continue
                    outs = [rewrite(r, g, x) for x in atoms_]
                else:
                    try:
                        outs = [rewrite(r, g)]
                    except MllError:
                        continue
                for h in outs:
                    st_ = (replace_at(f, p, h), ni + (r == "ai-down"), ns + (r in ("switch", "sigma-switch")))
                    if st_[2] <= max_switch and st_ not in seen:
                        seen.add(st_)
                        q.append(st_)
    return found


def test_singleton_tensor_has_no_one_switch_derivation():
    d = TensorRule(ParRule(0, Ax("a")), ParRule(0, Ax("b")))
    target = sequent_to_formula(check_sc(d))
    assert render_formula(target) == "((~a % a) * (~b % b))"
    found = _bfs_intro_switch(target, "ab", max_intro=2, max_switch=3)
    assert found == {(2, 0)}
    m = sc_metrics(d)
    assert m["cut"] + m["tensor"] == 1
    eqs = dict(sc_to_di_equalities(m, di_metrics(sc_to_di(d))))
    assert eqs["ax = ai-down"] and eqs["id = i-down"] and eqs["cut = i-up"]
    assert not eqs["cut + tensor = switch-family"]


def _has_singleton_tensor(d):
    return any(isinstance(n, TensorRule) and len(check_sc(n.left)) == 1 and len(check_sc(n.right)) == 1
               for n in nodes(d))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_sc_to_di_on_fuzzed_proofs(seed):
    d = fuzz_sc(random.Random(seed), FuzzConfig(seed=seed, max_steps=12))
    out = sc_to_di(d)
    assert check_di(out) == sequent_to_formula(check_sc(d))
    eqs = dict(sc_to_di_equalities(sc_metrics(d), di_metrics(out)))
    for name in ("id = i-down", "ax = ai-down", "cut = i-up"):
        assert eqs[name]
    if not _has_singleton_tensor(d):
        assert eqs["cut + tensor = switch-family"]
    assert sc_identity(sc_metrics(d))[1]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_di_to_sc_on_fuzzed_traces(seed):
    d = fuzz_di(random.Random(seed), FuzzConfig(seed=seed, max_steps=12))
    f = check_di(d)
    naive = di_to_sc_naive(d)
    assert check_sc(naive) == (f,) and sc_metrics(naive)["cut"] == len(d.steps)
    direct = di_to_sc_direct(d)
    assert check_sc(direct) == (f,)
    assert all(h for _, h in direct_equalities(di_metrics(atomize_di(d)), sc_metrics(direct)))


def test_reports():
    r = translate_with_report("di2sc-naive", sample_di())
    assert r.ok and r.output_metrics["cut"] == 3
    r = translate_with_report("cutelim", cut_sc())
    assert r.ok and r.output_metrics["cut"] == 0
    assert r.output_metrics["ax"] + r.output_metrics["id"] == r.output_metrics["tensor"] + 1
    r = translate_with_report("sc2di", cut_sc())
    assert r.ok
    assert r.to_json()["direction"] == "sc2di"
    assert translate_with_report("atomize", Id(parse_formula("(a % b)"))).ok
    assert translate_with_report("atomize", parse_di("axiom i-down (a % b)")).ok
    with pytest.raises(TranslationError):
        translate_with_report("sideways", cut_sc())
