"""Formulae, sequents and paths of unit-free MLL.

Two formula trees live here.  NNF formulae are built from ``Atom``,
``NegAtom``, ``Tensor`` and ``Par``; general formulae may also use ``Neg``
anywhere.  Paths are strings over ``L``/``R``; the empty string is the root
and is written ``.`` in text.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

ATOM_RE = re.compile(r"[a-z][a-z0-9_]*")

TENSOR_CHARS = ("*", "⊗")
PAR_CHARS = ("%", "⅋")


class MllError(Exception):
    """Base class for every error raised by the package."""


class FormulaSyntaxError(MllError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class NnfViolation(MllError):
    def __init__(self, subterm: str, offset: int):
        super().__init__(f"negation on non-atom {subterm} at byte {offset}")
        self.subterm = subterm
        self.offset = offset


class PathError(MllError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


PosAtom = Atom


@dataclass(frozen=True)
class NegAtom:
    name: str

    def __str__(self) -> str:
        return "~" + self.name


@dataclass(frozen=True)
class Tensor:
    left: "AnyFormula"
    right: "AnyFormula"

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Par:
    left: "AnyFormula"
    right: "AnyFormula"

    def __str__(self) -> str:
        return f"({self.left} % {self.right})"


@dataclass(frozen=True)
class Neg:
    body: "AnyFormula"

    def __str__(self) -> str:
        return "~" + str(self.body)


Formula = Union[Atom, NegAtom, Tensor, Par]
GeneralFormula = Union[Atom, Neg, Tensor, Par]
AnyFormula = Union[Atom, NegAtom, Neg, Tensor, Par]
Sequent = tuple
Path = str


def check_atom_name(name: str) -> str:
    if not ATOM_RE.fullmatch(name):
        raise MllError(f"bad atom name {name!r}")
    return name


# parsing

class _Reader:
    def __init__(self, text: str, strict: bool):
        self.text = text
        self.raw = text.encode("utf-8")
        self.pos = 0
        self.strict = strict

    def offset(self, pos: int | None = None) -> int:
        p = self.pos if pos is None else pos
        return len(self.text[:p].encode("utf-8"))

    def fail(self, message: str, pos: int | None = None):
        raise FormulaSyntaxError(message, self.offset(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def formula(self) -> AnyFormula:
        c = self.peek()
        start = self.pos
        if c == "~":
            self.pos += 1
            body = self.formula()
            if isinstance(body, Atom):
                return NegAtom(body.name) if self.strict else Neg(body)
            if self.strict:
                raise NnfViolation("~" + str(body), self.offset(start))
            return Neg(body)
        if c == "(":
            self.pos += 1
            left = self.formula()
            op = self.peek()
            if op in TENSOR_CHARS:
                node = Tensor
            elif op in PAR_CHARS:
                node = Par
            else:
                self.fail(f"expected connective, found {op or 'end of input'!r}")
            self.pos += 1
            right = self.formula()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.pos += 1
            return node(left, right)
        m = ATOM_RE.match(self.text, self.pos)
        if not m:
            self.fail(f"unexpected {c or 'end of input'!r}")
        self.pos = m.end()
        return Atom(m.group())


def parse_formula(text: str, mode: str = "strict") -> AnyFormula:
    """Parse formula text; ``mode`` is ``"strict"`` (NNF) or ``"general"``."""
    if mode not in ("strict", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    r = _Reader(text, mode == "strict")
    f = r.formula()
    r.skip()
    if r.pos != len(text):
        r.fail("trailing input")
    return f


def parse_sequent(text: str) -> tuple:
    """Parse ``|- F1, F2, ...`` into a tuple of NNF formulae."""
    body = text.strip()
    if body.startswith("⊢"):
        body = body[1:]
    elif body.startswith("|-"):
        body = body[2:]
    else:
        raise FormulaSyntaxError("sequent must start with '|-'", 0)
    shift = len(text.encode("utf-8")) - len(body.encode("utf-8"))
    parts, depth, cur, start = [], 0, [], 0
    for i, ch in enumerate(body + ","):
        if ch == "," and depth == 0:
            chunk = "".join(cur)
            if chunk.strip():
                try:
                    parts.append(parse_formula(chunk))
                except FormulaSyntaxError as e:
                    off = len(body[:start].encode("utf-8")) + shift
                    raise FormulaSyntaxError(str(e).rsplit(" at byte", 1)[0], off + e.offset) from None
            elif i < len(body):
                raise FormulaSyntaxError("empty sequent member", len(body[:i].encode("utf-8")) + shift)
            cur, start = [], i + 1
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    return tuple(parts)


def looks_like_sequent(text: str) -> bool:
    t = text.strip()
    return t.startswith("|-") or t.startswith("⊢")


# printing

def render_formula(f: AnyFormula) -> str:
    return str(f)


def render_sequent(s: Sequent) -> str:
    return "|- " + ", ".join(str(f) for f in s)


def render_path(p: Path) -> str:
    return p or "."


def parse_path(text: str) -> Path:
    t = text.strip()
    if t in (".", "", "ε"):
        return ""
    if not re.fullmatch(r"[LR]+", t):
        raise PathError(f"bad path {text!r}")
    return t


# negation

def negate(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, Tensor):
        return Par(negate(f.left), negate(f.right))
    if isinstance(f, Par):
        return Tensor(negate(f.left), negate(f.right))
    raise TypeError(f"not an NNF formula: {f!r}")


def demorgan_normalize(g: AnyFormula) -> Formula:
    def go(g, neg):
        if isinstance(g, Neg):
            return go(g.body, not neg)
        if isinstance(g, Atom):
            return NegAtom(g.name) if neg else g
        if isinstance(g, NegAtom):
            return g if not neg else Atom(g.name)
        if isinstance(g, Tensor):
            node = Par if neg else Tensor
        else:
            node = Tensor if neg else Par
        return node(go(g.left, neg), go(g.right, neg))
    return go(g, False)


def lift(f: Formula) -> GeneralFormula:
    """Embed an NNF formula into the general grammar."""
    if isinstance(f, NegAtom):
        return Neg(Atom(f.name))
    if isinstance(f, (Tensor, Par)):
        return type(f)(lift(f.left), lift(f.right))
    return f


def is_nnf(f: AnyFormula) -> bool:
    if isinstance(f, Neg):
        return False
    if isinstance(f, (Tensor, Par)):
        return is_nnf(f.left) and is_nnf(f.right)
    return True


# paths and contexts

def subformula_at(f: Formula, p: Path) -> Formula:
    cur = f
    for i, step in enumerate(p):
        if not isinstance(cur, (Tensor, Par)):
            raise PathError(f"path {render_path(p)} leaves the formula after {i} steps")
        cur = cur.left if step == "L" else cur.right
    return cur


def replace_at(f: Formula, p: Path, g: Formula) -> Formula:
    if not p:
        return g
    if not isinstance(f, (Tensor, Par)):
        raise PathError(f"path {render_path(p)} is not valid here")
    if p[0] == "L":
        return type(f)(replace_at(f.left, p[1:], g), f.right)
    return type(f)(f.left, replace_at(f.right, p[1:], g))


def sequent_to_formula(s: Sequent) -> Formula:
    if not s:
        raise MllError("empty sequent has no formula")
    acc = s[0]
    for f in s[1:]:
        acc = Par(acc, f)
    return acc


def spine_path(index: int, length: int) -> Path:
    """Path of member ``index`` inside ``sequent_to_formula`` of a sequent."""
    if not 0 <= index < length:
        raise PathError(f"member {index} out of range for length {length}")
    if index == 0:
        return "L" * (length - 1)
    return "L" * (length - 1 - index) + "R"


def atoms(f: AnyFormula) -> list:
    """Leaf atom names, left to right."""
    out = []

    def go(g):
        if isinstance(g, (Atom, NegAtom)):
            out.append(g.name)
        elif isinstance(g, Neg):
            go(g.body)
        else:
            go(g.left)
            go(g.right)
    go(f)
    return out


def leaves(f: Formula) -> list:
    """Leaves as ``(path, atom_name, positive)`` triples, left to right."""
    out = []

    def go(g, p):
        if isinstance(g, Atom):
            out.append((p, g.name, True))
        elif isinstance(g, NegAtom):
            out.append((p, g.name, False))
        else:
            go(g.left, p + "L")
            go(g.right, p + "R")
    go(f, "")
    return out


def size(f: AnyFormula) -> int:
    if isinstance(f, (Tensor, Par)):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, Neg):
        return 1 + size(f.body)
    return 1


def as_formula(x: Union[str, AnyFormula]) -> Formula:
    return parse_formula(x) if isinstance(x, str) else x


def iter_paths(f: Formula) -> Iterable[Path]:
    stack = [(f, "")]
    while stack:
        g, p = stack.pop()
        yield p
        if isinstance(g, (Tensor, Par)):
            stack.append((g.right, p + "R"))
            stack.append((g.left, p + "L"))


def join(members: Sequence[Formula]) -> tuple:
    return tuple(members)
