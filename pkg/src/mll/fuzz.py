"""Seeded random derivations for both calculi.

DI traces grow by picking an applicable rule (by weight) and a random path
where it applies.  SC trees grow top-down from a node budget; cuts look for a
partner with the dual formula among earlier subtrees and fall back to an
identity proof when none exists.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .di_kernel import RULES, DiDerivation, DiStep, apply_step, rewrite
from .sc_kernel import (
    Ax, Cut, Exch, Id, ParRule, TensorRule, check_sc, identity_proof, move,
)
from .syntax import Atom, MllError, NegAtom, Par, Tensor, iter_paths, negate, subformula_at

DEFAULT_WEIGHTS = {
    "ai-down": 3.0, "i-down": 0.5, "ai-up": 6.0, "i-up": 6.0,
    "sigma-up": 2.0, "sigma-down": 2.0, "alpha-up": 1.5, "alpha-down": 1.5,
    "switch": 2.0, "sigma-switch": 2.0,
}


class GenerationStuck(MllError):
    pass


@dataclass
class FuzzConfig:
    seed: int = 0
    max_steps: int = 10
    atoms: tuple = ("a", "b", "c")
    weights: dict = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    max_payload_depth: int = 1

    def __post_init__(self):
        self.atoms = tuple(self.atoms)
        if not self.atoms:
            raise MllError("atom pool is empty")
        bad = set(self.weights) - set(RULES)
        if bad:
            raise MllError(f"unknown rules in weights: {sorted(bad)}")
        if any(w < 0 for w in self.weights.values()):
            raise MllError("rule weights must be nonnegative")
        if self.weights.get("ai-down", 0) <= 0 and self.weights.get("i-down", 0) <= 0:
            raise MllError("at least one introduction rule needs positive weight")


def random_formula(rng: random.Random, atoms, depth: int):
    if depth <= 0 or rng.random() < 0.4:
        a = rng.choice(atoms)
        return Atom(a) if rng.random() < 0.5 else NegAtom(a)
    node = Tensor if rng.random() < 0.5 else Par
    return node(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1))


def _applicable(f) -> dict:
    """rule -> paths where its premise pattern matches (introductions excluded)."""
    out = {}
    for p in iter_paths(f):
        g = subformula_at(f, p)
        for rule in RULES:
            if rule in ("ai-down", "i-down"):
                continue
            try:
                rewrite(rule, g)
            except MllError:
                continue
            out.setdefault(rule, []).append(p)
    return out


def fuzz_di(rng: random.Random, cfg: FuzzConfig) -> DiDerivation:
    w = cfg.weights
    if w.get("i-down", 0) > 0 and rng.random() < w["i-down"] / (w["i-down"] + w.get("ai-down", 0)):
        d = DiDerivation("i-down", random_formula(rng, cfg.atoms, cfg.max_payload_depth))
    else:
        d = DiDerivation("ai-down", rng.choice(cfg.atoms))
    f = d.start()
    steps = []
    for _ in range(rng.randint(0, cfg.max_steps)):
        options = _applicable(f)
        paths = list(iter_paths(f))
        choices = [r for r in RULES if w.get(r, 0) > 0 and (r in options or r in ("ai-down", "i-down"))]
        rule = rng.choices(choices, [w[r] for r in choices])[0]
        if rule == "ai-down":
            s = DiStep(rule, rng.choice(paths), rng.choice(cfg.atoms))
        elif rule == "i-down":
            s = DiStep(rule, rng.choice(paths), random_formula(rng, cfg.atoms, cfg.max_payload_depth))
        else:
            s = DiStep(rule, rng.choice(options[rule]))
        f = apply_step(f, s)
        steps.append(s)
    return DiDerivation(d.kind, d.payload, steps)


class _ScBuilder:
    def __init__(self, rng: random.Random, cfg: FuzzConfig):
        self.rng = rng
        self.cfg = cfg
        self.pool = []

    def leaf(self):
        rng = self.rng
        if self.cfg.weights.get("i-down", 0) > 0 and rng.random() < 0.15:
            return Id(random_formula(rng, self.cfg.atoms, self.cfg.max_payload_depth))
        return Ax(rng.choice(self.cfg.atoms))

    def gen(self, budget: int):
        rng = self.rng
        if budget <= 1:
            d = self.leaf()
        else:
            kind = rng.choices(["exch", "par", "tensor", "cut"], [2, 3, 4, 2])[0]
            if kind in ("exch", "par"):
                child = self.gen(budget - 1)
                n = len(check_sc(child))
                if n < 2:
                    d = child
                else:
                    i = rng.randrange(n - 1)
                    d = Exch(i, child) if kind == "exch" else ParRule(i, child)
            elif kind == "tensor":
                split = rng.randint(1, budget - 2) if budget > 2 else 1
                left, right = self.gen(split), self.gen(max(1, budget - 1 - split))
                d = self.tensor(left, right)
            else:
                d = self.cut(self.gen(max(1, budget // 2)), budget - budget // 2 - 1)
        self.pool.append(d)
        return d

    def tensor(self, left, right):
        nl, nr = len(check_sc(left)), len(check_sc(right))
        left = move(left, self.rng.randrange(nl), nl - 1)
        right = move(right, self.rng.randrange(nr), 0)
        return TensorRule(left, right)

    def cut(self, left, budget):
        rng = self.rng
        nl = len(check_sc(left))
        k = rng.randrange(nl)
        left = move(left, k, nl - 1)
        a = check_sc(left)[-1]
        want = negate(a)
        partners = [(d, j) for d in self.pool for j, g in enumerate(check_sc(d)) if g == want]
        if partners and rng.random() < 0.7:
            d, j = rng.choice(partners)
            right = move(d, j, 0)
        else:
            ident = identity_proof(a) if rng.random() < 0.5 else Id(a)
            right = ident
            if budget > 1 and rng.random() < 0.5:
                # put the identity in a tensor so the cut sits on a larger proof
                other = self.gen(budget - 1)
                no = len(check_sc(other))
                right = TensorRule(ident, move(other, rng.randrange(no), 0))
        if len(check_sc(left)) == 1 and len(check_sc(right)) == 1:
            return left
        return Cut(left, right)


def fuzz_sc(rng: random.Random, cfg: FuzzConfig):
    b = _ScBuilder(rng, cfg)
    budget = rng.randint(1, max(1, cfg.max_steps))
    return b.gen(budget)


def corpus(cfg: FuzzConfig, count: int, system: str = "both") -> list:
    """``count`` derivations as ``(system, derivation)``; "both" alternates DI and SC."""
    rng = random.Random(cfg.seed)
    out = []
    for i in range(count):
        kind = system if system != "both" else ("di" if i % 2 == 0 else "sc")
        d = fuzz_di(rng, cfg) if kind == "di" else fuzz_sc(rng, cfg)
        out.append((kind, d))
    return out
