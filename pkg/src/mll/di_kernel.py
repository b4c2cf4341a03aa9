"""Deep inference derivations as linear rewrite traces.

A derivation is an axiom ``(~A % A)`` followed by steps.  Each step names a
rule and the path of its redex in the formula *before* the step fires.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .sc_kernel import RuleMetrics
from .syntax import (
    Atom, MllError, NegAtom, Par, PathError, Tensor, Formula, check_atom_name,
    negate, parse_formula, parse_path, render_formula, render_path, replace_at,
    subformula_at,
)

RULES = (
    "ai-down", "i-down", "ai-up", "i-up", "sigma-up", "sigma-down",
    "alpha-up", "alpha-down", "switch", "sigma-switch",
)
AXIOM_KINDS = ("ai-down", "i-down", "open")


class DiCheckError(MllError):
    def __init__(self, message: str, step: Optional[int] = None):
        where = "axiom" if step == 0 else f"step {step}" if step is not None else None
        super().__init__(f"{where}: {message}" if where else message)
        self.step = step


class PatternMismatch(DiCheckError):
    pass


class TraceSyntaxError(MllError):
    pass


@dataclass(frozen=True)
class DiStep:
    rule: str
    path: str = ""
    param: Union[str, Formula, None] = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise MllError(f"unknown rule {self.rule!r}")
        needs = self.rule in ("ai-down", "i-down")
        if needs != (self.param is not None):
            raise MllError(f"{self.rule} {'needs' if needs else 'takes no'} parameter")
        if self.rule == "ai-down" and not isinstance(self.param, str):
            raise MllError("ai-down takes an atom name")
        if set(self.path) - {"L", "R"}:
            raise PathError(f"bad path {self.path!r}")

    def payload(self) -> Formula:
        return Atom(self.param) if self.rule == "ai-down" else self.param


@dataclass(frozen=True)
class DiDerivation:
    kind: str
    payload: Union[str, Formula]
    steps: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in AXIOM_KINDS:
            raise MllError(f"unknown axiom kind {self.kind!r}")
        if self.kind == "ai-down":
            if not isinstance(self.payload, str):
                raise MllError("ai-down axiom takes an atom name")
            check_atom_name(self.payload)
        object.__setattr__(self, "steps", tuple(self.steps))

    @classmethod
    def open(cls, premise: Formula, steps=()) -> "DiDerivation":
        return cls("open", premise, steps)

    def start(self) -> Formula:
        """The formula the steps are folded from."""
        if self.kind == "open":
            return self.payload
        a = Atom(self.payload) if self.kind == "ai-down" else self.payload
        return Par(negate(a), a)

    def extend(self, steps) -> "DiDerivation":
        return DiDerivation(self.kind, self.payload, self.steps + tuple(steps))


def ai_down(atom: str, path: str = "") -> DiStep:
    return DiStep("ai-down", path, atom)


def i_down(f: Formula, path: str = "") -> DiStep:
    return DiStep("i-down", path, f)


def shift(steps, prefix: str) -> list:
    """Re-address steps so they act below ``prefix``."""
    return [DiStep(s.rule, prefix + s.path, s.param) for s in steps]


def _mismatch(rule, pattern, found, i):
    raise PatternMismatch(f"{rule} expects {pattern}, found {render_formula(found)}", i)


def rewrite(rule: str, g: Formula, param=None, i: Optional[int] = None) -> Formula:
    """Apply one rule at the root of ``g``."""
    if rule in ("ai-down", "i-down"):
        a = Atom(param) if rule == "ai-down" else param
        return Tensor(g, Par(negate(a), a))
    if rule in ("ai-up", "i-up"):
        if not (isinstance(g, Par) and isinstance(g.left, Tensor)):
            _mismatch(rule, "((A * ~A) % B)", g, i)
        a, a2 = g.left.left, g.left.right
        if a2 != negate(a):
            raise PatternMismatch(
                f"{rule} duality mismatch: {render_formula(a2)} is not the negation of {render_formula(a)}", i)
        if rule == "ai-up" and not isinstance(a, (Atom, NegAtom)):
            raise PatternMismatch(f"ai-up needs an atomic cut formula, found {render_formula(a)}", i)
        return g.right
    if rule == "sigma-up":
        if not isinstance(g, Par):
            _mismatch(rule, "(A % B)", g, i)
        return Par(g.right, g.left)
    if rule == "sigma-down":
        if not isinstance(g, Tensor):
            _mismatch(rule, "(A * B)", g, i)
        return Tensor(g.right, g.left)
    if rule == "alpha-up":
        if not (isinstance(g, Par) and isinstance(g.right, Par)):
            _mismatch(rule, "(A % (B % C))", g, i)
        return Par(Par(g.left, g.right.left), g.right.right)
    if rule == "alpha-down":
        if not (isinstance(g, Tensor) and isinstance(g.left, Tensor)):
            _mismatch(rule, "((A * B) * C)", g, i)
        return Tensor(g.left.left, Tensor(g.left.right, g.right))
    if rule == "switch":
        if not (isinstance(g, Tensor) and isinstance(g.right, Par)):
            _mismatch(rule, "(A * (B % C))", g, i)
        return Par(Tensor(g.left, g.right.left), g.right.right)
    if rule == "sigma-switch":
        if not (isinstance(g, Tensor) and isinstance(g.left, Par)):
            _mismatch(rule, "((A % B) * C)", g, i)
        return Par(g.left.left, Tensor(g.left.right, g.right))
    raise MllError(f"unknown rule {rule!r}")


def apply_step(f: Formula, s: DiStep, i: Optional[int] = None) -> Formula:
    try:
        g = subformula_at(f, s.path)
    except PathError as e:
        raise DiCheckError(f"invalid path {render_path(s.path)}: {e}", i) from None
    return replace_at(f, s.path, rewrite(s.rule, g, s.param, i))


def trace_formulas(d: DiDerivation) -> list:
    """Every intermediate formula, starting with the axiom."""
    f = d.start()
    out = [f]
    for i, s in enumerate(d.steps, 1):
        f = apply_step(f, s, i)
        out.append(f)
    return out


def check_di(d: DiDerivation) -> Formula:
    f = d.start()
    for i, s in enumerate(d.steps, 1):
        f = apply_step(f, s, i)
    return f


def is_valid(d) -> bool:
    try:
        check_di(d)
        return True
    except MllError:
        return False


def di_metrics(d: DiDerivation) -> RuleMetrics:
    m = RuleMetrics({r: 0 for r in RULES})
    if d.kind != "open":
        m[d.kind] += 1
    for s in d.steps:
        m[s.rule] += 1
    return m


# sigma-switch expansion

def sigma_switch_steps(p: str) -> list:
    """Replacement for sigma-switch at ``p`` using sigma-up, sigma-down and switch.

    ((A % B) * C) -> ((B % A) * C) -> (C * (B % A)) -> ((C * B) % A)
    -> (A % (C * B)) -> (A % (B * C))
    """
    return [
        DiStep("sigma-up", p + "L"),
        DiStep("sigma-down", p),
        DiStep("switch", p),
        DiStep("sigma-up", p),
        DiStep("sigma-down", p + "R"),
    ]


def expand_sigma_switch(d: DiDerivation) -> DiDerivation:
    check_di(d)
    out = []
    for s in d.steps:
        out.extend(sigma_switch_steps(s.path) if s.rule == "sigma-switch" else [s])
    return DiDerivation(d.kind, d.payload, out)


# atomization

def identity_derivation(a: Formula) -> tuple:
    """``(atom, steps)`` deriving ``(negate(a) % a)`` from ``axiom ai-down atom``."""
    if isinstance(a, Atom):
        return a.name, []
    if isinstance(a, NegAtom):
        return a.name, [DiStep("sigma-up", "")]
    b0, sb = identity_derivation(a.left)
    c0, sc = identity_derivation(a.right)
    if isinstance(a, Tensor):
        # ~B % B  ->  ~B % (B * (~C % C))  ->  (~B % ~C) % (B * C)
        return b0, sb + [ai_down(c0, "R")] + shift(sc, "RR") + [
            DiStep("sigma-up", "RR"), DiStep("switch", "R"),
            DiStep("sigma-up", "R"), DiStep("alpha-up", ""),
        ]
    # ~B % B  ->  (~B * (~C % C)) % B  ->  (~B * ~C) % (B % C)
    return b0, sb + [ai_down(c0, "L")] + shift(sc, "LR") + [
        DiStep("switch", "L"), DiStep("sigma-up", ""), DiStep("sigma-up", "R"),
        DiStep("alpha-up", ""), DiStep("sigma-up", ""),
    ]


def atomize_di(d: DiDerivation) -> DiDerivation:
    check_di(d)
    kind, payload, out = d.kind, d.payload, []
    if kind == "i-down":
        atom, head = identity_derivation(payload)
        kind, payload, out = "ai-down", atom, list(head)
    for s in d.steps:
        if s.rule == "i-down":
            a0, inner = identity_derivation(s.param)
            out.append(ai_down(a0, s.path))
            out.extend(shift(inner, s.path + "R"))
        else:
            out.append(s)
    return DiDerivation(kind, payload, out)


# text format

def _split_param(rest: str):
    rest = rest.strip()
    if not rest:
        return "", None
    parts = rest.split(None, 1)
    return parts[0], (parts[1] if len(parts) > 1 else None)


def parse_di(text: str, allow_open: bool = False) -> DiDerivation:
    head = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if head is None:
                words = line.split(None, 2)
                if words[0] == "open" and allow_open:
                    head = ("open", parse_formula(line.split(None, 1)[1]))
                    continue
                if words[0] != "axiom" or len(words) < 3:
                    raise TraceSyntaxError("first line must be 'axiom ai-down <atom>' or 'axiom i-down <formula>'")
                if words[1] == "ai-down":
                    head = ("ai-down", check_atom_name(words[2].strip()))
                elif words[1] == "i-down":
                    head = ("i-down", parse_formula(words[2]))
                else:
                    raise TraceSyntaxError(f"unknown axiom kind {words[1]!r}")
                continue
            words = line.split(None, 1)
            rule = words[0]
            if rule not in RULES:
                raise TraceSyntaxError(f"unknown rule {rule!r}")
            path_txt, param_txt = _split_param(words[1] if len(words) > 1 else "")
            if not path_txt:
                raise TraceSyntaxError(f"{rule} needs a path")
            path = parse_path(path_txt)
            if rule == "ai-down":
                if param_txt is None:
                    raise TraceSyntaxError("ai-down needs an atom")
                steps.append(DiStep(rule, path, check_atom_name(param_txt.strip())))
            elif rule == "i-down":
                if param_txt is None:
                    raise TraceSyntaxError("i-down needs a formula")
                steps.append(DiStep(rule, path, parse_formula(param_txt)))
            else:
                if param_txt is not None:
                    raise TraceSyntaxError(f"{rule} takes no parameter")
                steps.append(DiStep(rule, path))
        except MllError as e:
            raise TraceSyntaxError(f"line {lineno}: {e}") from None
    if head is None:
        raise TraceSyntaxError("empty trace")
    return DiDerivation(head[0], head[1], steps)


def render_di(d: DiDerivation) -> str:
    if d.kind == "open":
        lines = [f"open {render_formula(d.payload)}"]
    elif d.kind == "ai-down":
        lines = [f"axiom ai-down {d.payload}"]
    else:
        lines = [f"axiom i-down {render_formula(d.payload)}"]
    for s in d.steps:
        line = f"{s.rule} {render_path(s.path)}"
        if s.param is not None:
            line += " " + (s.param if isinstance(s.param, str) else render_formula(s.param))
        lines.append(line)
    return "\n".join(lines) + "\n"
