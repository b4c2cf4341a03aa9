import pytest
from hypothesis import given

from conftest import formulas, general_formulas, sequents
from mll.syntax import (
    Atom, FormulaSyntaxError, MllError, Neg, NegAtom, NnfViolation, Par, PathError, PosAtom,
    Tensor, demorgan_normalize, is_nnf, iter_paths, leaves, lift, negate, parse_formula,
    parse_path, parse_sequent, render_formula, render_path, render_sequent, replace_at,
    sequent_to_formula, spine_path, subformula_at,
)

SAMPLE = "((~a % (a * ~b)) % b)"


def test_parse_sample_conclusion():
    f = parse_formula(SAMPLE)
    assert f == Par(Par(NegAtom("a"), Tensor(PosAtom("a"), NegAtom("b"))), PosAtom("b"))


def test_parse_atom():
    assert parse_formula("a") == Atom("a")


def test_strict_mode_rejects_negated_compound():
    with pytest.raises(NnfViolation) as e:
        parse_formula("~(a*b)")
    assert "(a * b)" in str(e.value)
    assert e.value.offset == 0


def test_general_mode_keeps_negation():
    assert parse_formula("~(a*b)", mode="general") == Neg(Tensor(Atom("a"), Atom("b")))
    assert parse_formula("~~a", mode="general") == Neg(Neg(Atom("a")))


def test_unicode_connectives():
    assert parse_formula("(a ⊗ (~b ⅋ c))") == parse_formula("(a * (~b % c))")


@pytest.mark.parametrize("text, offset", [("(a * b", 6), ("(a ? b)", 3), ("(a * b) c", 8), ("", 0)])
def test_syntax_error_offsets(text, offset):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula(text)
    assert e.value.offset == offset


def test_offset_counts_bytes():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("(a ⊗ b ?")
    assert e.value.offset == len("(a ⊗ b ".encode())


def test_render():
    assert render_formula(Par(NegAtom("b"), Atom("b"))) == "(~b % b)"
    assert render_formula(Tensor(Atom("a"), Atom("b"))) == "(a * b)"
    assert render_formula(parse_formula(SAMPLE)) == SAMPLE


@given(formulas)
def test_parse_render_round_trip(f):
    assert parse_formula(render_formula(f)) == f


@given(general_formulas)
def test_general_round_trip(g):
    assert parse_formula(render_formula(g), mode="general") == g


def test_negate_examples():
    assert negate(Tensor(Atom("a"), Atom("b"))) == Par(NegAtom("a"), NegAtom("b"))
    assert negate(NegAtom("a")) == Atom("a")


@given(formulas)
def test_negate_involution(f):
    assert negate(negate(f)) == f


def test_demorgan_examples():
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    assert demorgan_normalize(Neg(Tensor(a, b))) == Par(NegAtom("a"), NegAtom("b"))
    assert demorgan_normalize(Neg(Neg(a))) == a
    assert demorgan_normalize(Neg(Par(Neg(a), Tensor(b, c)))) == Tensor(a, Par(NegAtom("b"), NegAtom("c")))


@given(general_formulas)
def test_demorgan_idempotent_and_nnf(g):
    n = demorgan_normalize(g)
    assert is_nnf(n)
    assert demorgan_normalize(n) == n


@given(formulas)
def test_demorgan_of_negated_lift_is_negate(f):
    assert demorgan_normalize(Neg(lift(f))) == negate(f)
    assert demorgan_normalize(lift(f)) == f


def test_subformula_at():
    f = parse_formula(SAMPLE)
    assert subformula_at(f, "LR") == parse_formula("(a * ~b)")
    assert subformula_at(f, "") == f
    with pytest.raises(PathError):
        subformula_at(Atom("a"), "L")


def test_replace_at():
    got = replace_at(parse_formula("(~b % b)"), "L", parse_formula("(~b * (~a % a))"))
    assert got == parse_formula("((~b * (~a % a)) % b)")
    assert replace_at(Atom("a"), "", Atom("b")) == Atom("b")
    with pytest.raises(PathError):
        replace_at(Atom("a"), "R", Atom("b"))


@given(formulas)
def test_replace_with_own_subformula_is_identity(f):
    for p in iter_paths(f):
        assert replace_at(f, p, subformula_at(f, p)) == f


def test_paths():
    assert parse_path(".") == ""
    assert parse_path("LRL") == "LRL"
    assert render_path("") == "."
    with pytest.raises(PathError):
        parse_path("LX")


def test_sequent_to_formula():
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    assert sequent_to_formula((a, b, c)) == parse_formula("((a % b) % c)")
    assert sequent_to_formula((a,)) == a
    s = parse_sequent("|- ~a, (a*~b), b")
    assert render_formula(sequent_to_formula(s)) == SAMPLE
    with pytest.raises(MllError):
        sequent_to_formula(())


@given(sequents)
def test_spine_path_addresses_members(s):
    f = sequent_to_formula(s)
    for i, member in enumerate(s):
        assert subformula_at(f, spine_path(i, len(s))) == member


def test_sequent_text():
    s = parse_sequent("⊢ ~a, (a ⊗ ~b), (b*~c), c")
    assert render_sequent(s) == "|- ~a, (a * ~b), (b * ~c), c"
    with pytest.raises(FormulaSyntaxError):
        parse_sequent("~a, a")
    with pytest.raises(FormulaSyntaxError):
        parse_sequent("|- a,, b")


def test_leaves_in_order():
    f = parse_formula(SAMPLE)
    assert leaves(f) == [("LL", "a", False), ("LRL", "a", True), ("LRR", "b", False), ("R", "b", True)]
