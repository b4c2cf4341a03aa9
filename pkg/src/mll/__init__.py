"""Unit-free multiplicative linear logic in two proof systems.

Sequent calculus and deep inference checkers, translations between them,
connective counting and a coherence-space semantics.
"""
import sys

from .syntax import (
    Atom, PosAtom, NegAtom, Neg, Tensor, Par, MllError,
    parse_formula, parse_sequent, render_formula, render_sequent, negate,
    demorgan_normalize, subformula_at, replace_at, sequent_to_formula,
)
from .counting import (
    ConnectiveCounts, count_general, count_sequent, derived_t, derived_p,
    di_invariant_holds, sc_invariant_holds,
)
from .sc_kernel import (
    Ax, Id, Exch, ParRule, TensorRule, Cut, RuleMetrics, check_sc, atomize_sc,
    sc_metrics, eliminate_cuts, parse_sc, render_sc,
)
from .di_kernel import (
    DiStep, DiDerivation, check_di, expand_sigma_switch, atomize_di,
    di_metrics, parse_di, render_di,
)

# derivation trees and traces are walked recursively in places
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"
