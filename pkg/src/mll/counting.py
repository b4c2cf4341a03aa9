"""Signed connective counts and the derivability pre-check.

A connective is positive when an even number of negations sits above it.
For NNF input every count is positive, since negation only touches atoms.
"""
from __future__ import annotations

from dataclasses import dataclass, astuple

from .syntax import Atom, NegAtom, Neg, Tensor, Par


@dataclass(frozen=True)
class ConnectiveCounts:
    pos_tensor: int = 0
    neg_tensor: int = 0
    pos_par: int = 0
    neg_par: int = 0
    commas: int = 0

    def __add__(self, other: "ConnectiveCounts") -> "ConnectiveCounts":
        return ConnectiveCounts(*(a + b for a, b in zip(astuple(self), astuple(other))))

    def swapped(self) -> "ConnectiveCounts":
        return ConnectiveCounts(self.neg_tensor, self.pos_tensor, self.neg_par, self.pos_par, self.commas)

    def as_dict(self) -> dict:
        return {
            "pos_tensor": self.pos_tensor, "neg_tensor": self.neg_tensor,
            "pos_par": self.pos_par, "neg_par": self.neg_par, "commas": self.commas,
        }


def count_general(g) -> ConnectiveCounts:
    tallies = [0, 0, 0, 0]
    stack = [(g, False)]
    while stack:
        f, neg = stack.pop()
        if isinstance(f, Neg):
            stack.append((f.body, not neg))
        elif isinstance(f, (Tensor, Par)):
            slot = (0 if isinstance(f, Tensor) else 2) + (1 if neg else 0)
            tallies[slot] += 1
            stack.append((f.left, neg))
            stack.append((f.right, neg))
        elif not isinstance(f, (Atom, NegAtom)):
            raise TypeError(f"not a formula: {f!r}")
    return ConnectiveCounts(*tallies)


def count_sequent(s) -> ConnectiveCounts:
    total = ConnectiveCounts()
    for f in s:
        total = total + count_general(f)
    return ConnectiveCounts(total.pos_tensor, total.neg_tensor, total.pos_par,
                            total.neg_par, max(0, len(s) - 1))


def derived_t(c: ConnectiveCounts) -> int:
    return c.pos_tensor + c.neg_par


def derived_p(c: ConnectiveCounts) -> int:
    return c.neg_tensor + c.pos_par + c.commas


def di_invariant_holds(f) -> bool:
    c = count_general(f)
    return (c.neg_tensor + c.pos_par) - (c.pos_tensor + c.neg_par) == 1


def sc_invariant_holds(s) -> bool:
    c = count_sequent(s)
    return derived_p(c) - derived_t(c) == 1
