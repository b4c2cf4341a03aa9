import random

from hypothesis import strategies as st

from mll.syntax import Atom, Neg, NegAtom, Par, Tensor

ATOM_NAMES = st.sampled_from(["a", "b", "c"])

literals = st.builds(Atom, ATOM_NAMES) | st.builds(NegAtom, ATOM_NAMES)

formulas = st.recursive(
    literals,
    lambda sub: st.builds(Tensor, sub, sub) | st.builds(Par, sub, sub),
    max_leaves=12,
)

general_formulas = st.recursive(
    st.builds(Atom, ATOM_NAMES),
    lambda sub: st.builds(Tensor, sub, sub) | st.builds(Par, sub, sub) | st.builds(Neg, sub),
    max_leaves=12,
)

sequents = st.lists(formulas, min_size=1, max_size=4).map(tuple)


def random_general_formula(rng: random.Random, depth: int):
    r = rng.random()
    if depth <= 0 or r < 0.25:
        return Atom(rng.choice("abc"))
    if r < 0.45:
        return Neg(random_general_formula(rng, depth - 1))
    node = Tensor if r < 0.72 else Par
    return node(random_general_formula(rng, depth - 1), random_general_formula(rng, depth - 1))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
