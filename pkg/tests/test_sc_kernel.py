import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import formulas
from mll.fixtures import CUT_SC_CONCLUSION, CUT_SC_TEXT, cut_sc
from mll.fuzz import FuzzConfig, fuzz_sc
from mll.sc_kernel import (
    Ax, Cut, CutMismatch, DerivationSyntaxError, Exch, Id, ParRule, ScCheckError, TensorRule,
    atomize_sc, check_sc, eliminate_cuts, identity_proof, move, nodes, parse_sc, permute,
    render_sc, sc_metrics,
)
from mll.syntax import parse_formula, parse_sequent, render_sequent


def seq(text):
    return parse_sequent(text)


def test_cut_example_conclusion_and_metrics():
    d = cut_sc()
    assert render_sequent(check_sc(d)) == CUT_SC_CONCLUSION
    assert sc_metrics(d).as_dict() == {"ax": 4, "tensor": 2, "cut": 1}


def test_axiom_and_identity():
    assert check_sc(Ax("a")) == seq("|- ~a, a")
    assert check_sc(Id(parse_formula("(a * ~b)"))) == seq("|- (~a % b), (a * ~b)")
    m = sc_metrics(Ax("a"))
    assert m["ax"] == 1 and sum(m.values()) == 1


def test_structural_rules():
    d = Exch(0, Ax("a"))
    assert check_sc(d) == seq("|- a, ~a")
    assert check_sc(ParRule(0, d)) == seq("|- (a % ~a)")
    t = TensorRule(Ax("a"), Ax("b"))
    assert check_sc(t) == seq("|- ~a, (a * ~b), b")
    assert check_sc(ParRule(1, t)) == seq("|- ~a, ((a * ~b) % b)")


def test_cut_mismatch():
    with pytest.raises(CutMismatch) as e:
        check_sc(Cut(Ax("a"), Ax("b")))
    assert "a" in str(e.value) and "~b" in str(e.value)


@pytest.mark.parametrize("d", [Exch(1, Ax("a")), ParRule(1, Ax("a")), Exch(-1, Ax("a")),
                               ParRule(0, ParRule(0, Ax("a")))])
def test_index_out_of_range(d):
    with pytest.raises(ScCheckError):
        check_sc(d)


def test_text_round_trip():
    d = parse_sc(CUT_SC_TEXT)
    assert parse_sc(render_sc(d)) == d
    assert parse_sc("; comment\n(par 0 (id (a * ~b)))") == ParRule(0, Id(parse_formula("(a * ~b)")))


@pytest.mark.parametrize("text", ["(ax)", "(tensor (ax a))", "(frob a)", "(ax a) (ax b)", "(exch x (ax a))", "(ax a"])
def test_text_errors(text):
    with pytest.raises(DerivationSyntaxError):
        parse_sc(text)


def test_atomize_examples():
    assert atomize_sc(Id(parse_formula("a"))) == Ax("a")
    d = atomize_sc(Id(parse_formula("(a * b)")))
    assert check_sc(d) == seq("|- (~a % ~b), (a * b)")
    assert sc_metrics(d).as_dict() == {"ax": 2, "tensor": 1, "par": 1, "exch": 2}
    assert atomize_sc(cut_sc()) == cut_sc()


@given(formulas)
def test_identity_proof_is_atomic(f):
    d = identity_proof(f)
    assert check_sc(d) == check_sc(Id(f))
    assert sc_metrics(d)["id"] == 0


def test_permute_and_move():
    d = TensorRule(Ax("a"), Ax("b"))
    s = check_sc(d)
    assert check_sc(permute(d, [2, 0, 1])) == (s[2], s[0], s[1])
    assert check_sc(move(d, 0, 2)) == (s[1], s[2], s[0])
    assert move(d, 1, 1) == d


def test_cut_elimination_on_cut_example():
    out = eliminate_cuts(cut_sc())
    assert out == TensorRule(Ax("a"), TensorRule(Ax("b"), Ax("c")))
    assert check_sc(out) == check_sc(cut_sc())


def test_cut_against_identity_keeps_right_branch():
    right = TensorRule(Ax("b"), Ax("c"))
    out = eliminate_cuts(Cut(Id(parse_formula("b")), right))
    assert out == right
    assert {type(n) for n in nodes(eliminate_cuts(Cut(Exch(0, Exch(0, Id(parse_formula("b")))), right)))} \
        <= {TensorRule, Ax, Exch}


def test_cut_free_unchanged():
    d = ParRule(1, TensorRule(Ax("a"), Ax("b")))
    assert eliminate_cuts(d) == d


def test_principal_cut_on_compound_formula():
    ab = parse_formula("(a * b)")
    flipped = Exch(0, identity_proof(ab))
    d = Cut(flipped, flipped)
    out = eliminate_cuts(d)
    assert sc_metrics(out)["cut"] == 0
    assert check_sc(out) == check_sc(d)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_fuzzed_proofs(seed):
    d = fuzz_sc(random.Random(seed), FuzzConfig(seed=seed, max_steps=12))
    s = check_sc(d)
    m = sc_metrics(d)
    assert m["cut"] + m["tensor"] == m["ax"] + m["id"] - 1
    out = eliminate_cuts(d)
    mo = sc_metrics(out)
    assert check_sc(out) == s
    assert mo["cut"] == 0 and mo["ax"] + mo["id"] == mo["tensor"] + 1
    at = atomize_sc(d)
    assert check_sc(at) == s and sc_metrics(at)["id"] == 0
