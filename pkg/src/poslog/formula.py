"""Modal formulas: syntax trees, parsing, printing and syntactic transformations.

Concrete syntax::

    phi ::= atom | T | F | ~phi | phi & phi | phi | phi | [] phi | <> phi
          | lift NAME ( phi , ... )

``|`` binds weakest, then ``&``; both associate to the left.  Prefix operators
bind tightest.
"""
from __future__ import annotations

import itertools
import re
from collections.abc import Iterator
from dataclasses import dataclass

from .errors import InputError


class Formula:
    prec = 4

    def __str__(self) -> str:
        return self.text()

    def text(self, ctx: int = 0) -> str:
        s = self._text()
        return f"({s})" if self.prec < ctx else s

    def _text(self) -> str:
        raise NotImplementedError

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def _text(self):
        return self.name


@dataclass(frozen=True)
class Top(Formula):
    def _text(self):
        return "T"


@dataclass(frozen=True)
class Bot(Formula):
    def _text(self):
        return "F"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula
    prec = 3

    def _text(self):
        return "~" + self.arg.text(3)

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Box(Formula):
    arg: Formula
    prec = 3

    def _text(self):
        return "[]" + self.arg.text(3)

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Dia(Formula):
    arg: Formula
    prec = 3

    def _text(self):
        return "<>" + self.arg.text(3)

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    prec = 2

    def _text(self):
        return f"{self.left.text(2)} & {self.right.text(3)}"

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    prec = 1

    def _text(self):
        return f"{self.left.text(1)} | {self.right.text(2)}"

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Lift(Formula):
    name: str
    args: tuple

    def _text(self):
        return f"lift {self.name}(" + ", ".join(a.text() for a in self.args) + ")"

    def children(self):
        return self.args


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    for c in phi.children():
        yield from subformulas(c)


def atoms_of(phi: Formula) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Atom)}


def depth(phi: Formula) -> int:
    cs = phi.children()
    return 1 + max(depth(c) for c in cs) if cs else 0


def is_positive(phi: Formula, negated_atoms: bool = False) -> bool:
    for f in subformulas(phi):
        if isinstance(f, Lift):
            return False
        if isinstance(f, Not) and not (negated_atoms and isinstance(f.arg, Atom)):
            return False
    return True


# ------------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(\[\]|<>|[~&|(),]|[A-Za-z_][A-Za-z0-9_']*)")
KEYWORDS = {"T", "F", "lift"}


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"unexpected character {text[pos:].strip()[:1]!r} at offset {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, positive: bool, negated_atoms: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.positive = positive
        self.negated_atoms = negated_atoms

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise InputError("unexpected end of formula")
        self.i += 1
        return tok

    def expect(self, s):
        tok = self.take()
        if tok != s:
            raise InputError(f"expected {s!r}, found {tok!r}")

    def disj(self):
        phi = self.conj()
        while self.peek() == "|":
            self.take()
            phi = Or(phi, self.conj())
        return phi

    def conj(self):
        phi = self.unary()
        while self.peek() == "&":
            self.take()
            phi = And(phi, self.unary())
        return phi

    def unary(self):
        tok = self.take()
        if tok == "~":
            arg = self.unary()
            if self.positive and not (self.negated_atoms and isinstance(arg, Atom)):
                raise InputError("negation is not allowed in positive formulas")
            return Not(arg)
        if tok == "[]":
            return Box(self.unary())
        if tok == "<>":
            return Dia(self.unary())
        if tok == "(":
            phi = self.disj()
            self.expect(")")
            return phi
        if tok == "T":
            return Top()
        if tok == "F":
            return Bot()
        if tok == "lift":
            if self.positive:
                raise InputError("lifted modalities are not allowed in positive formulas")
            name = self.take()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name) or name in KEYWORDS:
                raise InputError(f"bad lifting name {name!r}")
            self.expect("(")
            args = []
            if self.peek() != ")":
                args.append(self.disj())
                while self.peek() == ",":
                    self.take()
                    args.append(self.disj())
            self.expect(")")
            return Lift(name, tuple(args))
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            return Atom(tok)
        raise InputError(f"unexpected token {tok!r}")


def parse_formula(text: str, positive: bool = False, negated_atoms: bool = False) -> Formula:
    p = _Parser(text, positive, negated_atoms)
    phi = p.disj()
    if p.peek() is not None:
        raise InputError(f"trailing input at {p.peek()!r}")
    return phi


# ---------------------------------------------------------- transformations


def beta_translate(phi: Formula) -> Formula:
    """Positive to Boolean syntax: ``<>`` becomes ``~[]~``, everything else is kept."""
    if isinstance(phi, (Atom, Top, Bot)):
        return phi
    if isinstance(phi, And):
        return And(beta_translate(phi.left), beta_translate(phi.right))
    if isinstance(phi, Or):
        return Or(beta_translate(phi.left), beta_translate(phi.right))
    if isinstance(phi, Box):
        return Box(beta_translate(phi.arg))
    if isinstance(phi, Dia):
        return Not(Box(Not(beta_translate(phi.arg))))
    raise InputError(f"not a positive formula: {phi}")


def positive_normal_form(phi: Formula) -> Formula:
    """Push negations down to atoms, turning ``~[]`` into ``<>~``."""
    return _nnf(phi, False)


def _nnf(phi: Formula, neg: bool) -> Formula:
    if isinstance(phi, Lift):
        raise InputError("lifted modalities have no positive normal form")
    if isinstance(phi, Atom):
        return Not(phi) if neg else phi
    if isinstance(phi, Top):
        return Bot() if neg else phi
    if isinstance(phi, Bot):
        return Top() if neg else phi
    if isinstance(phi, Not):
        return _nnf(phi.arg, not neg)
    if isinstance(phi, And):
        cls = Or if neg else And
        return cls(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Or):
        cls = And if neg else Or
        return cls(_nnf(phi.left, neg), _nnf(phi.right, neg))
    if isinstance(phi, Box):
        return (Dia if neg else Box)(_nnf(phi.arg, neg))
    if isinstance(phi, Dia):
        return (Box if neg else Dia)(_nnf(phi.arg, neg))
    raise InputError(f"unknown formula node {phi!r}")


def positive_formulas(atom_names: tuple, max_depth: int) -> Iterator[Formula]:
    """Every positive formula up to ``max_depth`` (grows doubly exponentially)."""
    levels = [[Top(), Bot(), *(Atom(a) for a in atom_names)]]
    seen = list(levels[0])
    for _ in range(max_depth):
        new = [Box(f) for f in seen] + [Dia(f) for f in seen]
        new += [c(f, g) for f, g in itertools.product(seen, seen) for c in (And, Or)]
        new = [f for f in new if depth(f) == len(levels)]
        levels.append(new)
        seen = seen + new
    for lev in levels:
        yield from lev
