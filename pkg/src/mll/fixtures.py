"""Two small worked derivations used by the tests, demos and CLI docs."""
from __future__ import annotations

from .di_kernel import DiDerivation, parse_di
from .sc_kernel import parse_sc

# four-step deep inference sample concluding ((~a % (a * ~b)) % b)
SAMPLE_DI_TEXT = """\
axiom ai-down b
ai-down L a
sigma-down L
sigma-switch L
"""

# two tensors joined by a cut on b, concluding |- ~a, (a * ~b), (b * ~c), c
CUT_SC_TEXT = """\
(cut
  (tensor (ax a) (ax b))
  (tensor (ax b) (ax c)))
"""

SAMPLE_DI_CONCLUSION = "((~a % (a * ~b)) % b)"
CUT_SC_CONCLUSION = "|- ~a, (a * ~b), (b * ~c), c"


def sample_di() -> DiDerivation:
    return parse_di(SAMPLE_DI_TEXT)


def cut_sc():
    return parse_sc(CUT_SC_TEXT)
