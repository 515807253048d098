"""Text formats for posets and finite lattices.

Poset files::

    elements: a b c
    le: a b
    le: b c

Lattice files::

    elements: 0 a 1
    meet: a 1 a        # meet of a and 1 is a; symmetric and a∧a entries are implied
    join: a 1 1
    bot: 0
    top: 1
    neg: a b           # optional; makes the result a Boolean algebra

``#`` starts a comment.
"""
from __future__ import annotations

from pathlib import Path

from .duality import FinDL, TableBA, TableDL
from .errors import InputError
from .finposet import Poset, show


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            key, sep, rest = line.partition(":")
            if not sep:
                raise InputError(f"line {lineno}: expected 'key: ...'")
            yield lineno, key.strip(), rest.split()


def parse_poset(text: str) -> Poset:
    elements = None
    pairs = []
    for lineno, key, args in _lines(text):
        if key == "elements":
            if elements is not None:
                raise InputError(f"line {lineno}: second 'elements:' line")
            elements = args
        elif key == "le":
            if len(args) != 2:
                raise InputError(f"line {lineno}: 'le:' takes two elements")
            pairs.append(tuple(args))
        else:
            raise InputError(f"line {lineno}: unknown key {key!r}")
    if elements is None:
        raise InputError("poset file needs an 'elements:' line")
    return Poset.from_relation(elements, pairs)


def dump_poset(p: Poset) -> str:
    out = ["elements: " + " ".join(show(a) for a in p.elements)]
    out += [f"le: {show(a)} {show(b)}" for a, b in p.hasse()]
    return "\n".join(out) + "\n"


def load_poset(path: str | Path) -> Poset:
    return parse_poset(_read(path))


def parse_lattice(text: str) -> FinDL:
    elements = None
    meet, join, neg = {}, {}, {}
    bot = top = None
    for lineno, key, args in _lines(text):
        if key == "elements":
            elements = args
        elif key in ("meet", "join"):
            if len(args) != 3:
                raise InputError(f"line {lineno}: '{key}:' takes 'a b c'")
            (meet if key == "meet" else join)[args[0], args[1]] = args[2]
        elif key in ("bot", "top"):
            if len(args) != 1:
                raise InputError(f"line {lineno}: '{key}:' takes one element")
            if key == "bot":
                bot = args[0]
            else:
                top = args[0]
        elif key == "neg":
            if len(args) != 2:
                raise InputError(f"line {lineno}: 'neg:' takes 'a b'")
            neg[args[0]] = args[1]
        else:
            raise InputError(f"line {lineno}: unknown key {key!r}")
    if elements is None or bot is None or top is None:
        raise InputError("lattice file needs 'elements:', 'bot:' and 'top:' lines")
    for x in [*(k for kv in meet for k in kv), *(k for kv in join for k in kv), *meet.values(),
              *join.values(), *neg, *neg.values(), bot, top]:
        if x not in elements:
            raise InputError(f"unknown element {x!r}")
    if neg:
        return TableBA(elements, meet, join, bot, top, neg)
    return TableDL(elements, meet, join, bot, top)


def dump_lattice(a: FinDL) -> str:
    lab = {x: a.show(x) for x in a.elements}
    if any(not v or any(c.isspace() or c in "#:" for c in v) for v in lab.values()) \
            or len(set(lab.values())) != len(lab):
        lab = {x: f"e{i}" for i, x in enumerate(a.elements)}
    out = ["elements: " + " ".join(lab[x] for x in a.elements)]
    els = a.elements
    for i, x in enumerate(els):
        for y in els[i:]:
            out.append(f"meet: {lab[x]} {lab[y]} {lab[a.meet(x, y)]}")
    for i, x in enumerate(els):
        for y in els[i:]:
            out.append(f"join: {lab[x]} {lab[y]} {lab[a.join(x, y)]}")
    out.append(f"bot: {lab[a.bot]}")
    out.append(f"top: {lab[a.top]}")
    if a.boolean:
        out += [f"neg: {lab[x]} {lab[a.neg(x)]}" for x in els]
    return "\n".join(out) + "\n"


def load_lattice(path: str | Path) -> FinDL:
    return parse_lattice(_read(path))


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
