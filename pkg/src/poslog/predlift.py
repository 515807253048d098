"""Predicate liftings of Set-functors and their monotone counterparts over posets.

An n-ary lifting of ``T`` is stored as the subset of ``T(2^n)`` on which it is
true.  ``2^n`` is realized as bitstrings of length n (``"e"`` when n = 0).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .duality import valuations
from .errors import InputError, InternalError, ResourceError
from .finposet import FiniteSet, Poset, show, sorted_elems
from .posetification import posetify_obj
from .report import Report
from .setfunctor import FunctorExpr, _Tokens, apply_obj, parse_functor

LIFTING_CAP = 20
ARITY_CAP = 2


@dataclass(frozen=True)
class Lifting:
    functor: FunctorExpr
    arity: int
    value: frozenset

    def __post_init__(self):
        if self.arity < 0:
            raise InputError("arity must be non-negative")
        bad = self.value - set(cube_values(self.functor, self.arity))
        if bad:
            raise InputError(f"{show(next(iter(bad)))} is not an element of {self.functor}(2^{self.arity})")

    @property
    def monotone(self) -> bool:
        return is_monotone(self)

    def holds(self, t) -> bool:
        return t in self.value

    def show(self) -> str:
        return "{" + ", ".join(self.functor.show_value(v) for v in sorted_elems(self.value)) + "}"


def cube(n: int) -> tuple:
    return valuations(n)


def cube_poset(n: int) -> Poset:
    """``2^n`` with the pointwise order."""
    pts = cube(n)
    return Poset._trusted(pts, frozenset(
        (a, b) for a in pts for b in pts if all(x <= y for x, y in zip(a, b)) and len(a) == len(b)))


def cube_values(t: FunctorExpr, n: int) -> tuple:
    return apply_obj(t, FiniteSet(cube(n))).elements


def _check_caps(t: FunctorExpr, n: int, cap: int) -> tuple:
    if n > ARITY_CAP:
        raise ResourceError(f"arity is capped at {ARITY_CAP}")
    size = t.size(len(cube(n)))
    if size > cap:
        raise ResourceError(f"{t}(2^{n}) has {size} elements, above the lifting cap {cap}")
    return cube_values(t, n)


def enumerate_liftings(t: FunctorExpr, n: int, cap: int = LIFTING_CAP) -> list[Lifting]:
    """All ``2^|T(2^n)|`` liftings, ordered by their bitmask over ``T(2^n)``."""
    vals = _check_caps(t, n, cap)
    return [Lifting(t, n, frozenset(v for i, v in enumerate(vals) if m >> i & 1))
            for m in range(1 << len(vals))]


@lru_cache(maxsize=None)
def _lifted_order(t: FunctorExpr, n: int) -> tuple:
    c = cube_poset(n)
    vals = cube_values(t, n)
    related = t.lift(c.le, c.elements, c.elements)
    return tuple((u, v) for u in vals for v in vals if u != v and related(u, v))


def is_monotone(l: Lifting) -> bool:
    """Is the lifting up-closed under ``Rel_T`` of the pointwise order on ``2^n``?

    Up-closure under a relation is the same as up-closure under its
    reflexive-transitive closure, so the generating pairs suffice.
    """
    return all(v in l.value for u, v in _lifted_order(l.functor, l.arity) if u in l.value)


def component(l: Lifting, x: FiniteSet, preds: tuple) -> frozenset:
    """``♥_X(a_1..a_n)``: the elements of ``T X`` whose image under ``T⟨a_i⟩`` satisfies ♥."""
    chi = {a: "".join("1" if a in p else "0" for p in preds) or "e" for a in x}
    tchi = l.functor.fmap(chi, x.elements, cube(l.arity))
    return frozenset(u for u in apply_obj(l.functor, x) if tchi(u) in l.value)


def is_monotone_componentwise(l: Lifting, max_size: int = 3) -> bool:
    """Oracle: every component ``♥_X`` is monotone, for all sets X of size ≤ ``max_size``.

    Monotonicity is checked on covering steps, adding one element to one argument.
    """
    for k in range(max_size + 1):
        x = FiniteSet(tuple(str(i) for i in range(k)))
        subsets = [frozenset(c) for r in range(k + 1) for c in itertools.combinations(x.elements, r)]
        for preds in itertools.product(subsets, repeat=l.arity):
            base = component(l, x, preds)
            for i, p in enumerate(preds):
                for a in x:
                    if a in p:
                        continue
                    bigger = preds[:i] + (p | {a},) + preds[i + 1:]
                    if not base <= component(l, x, bigger):
                        return False
    return True


def monotone_liftings(t: FunctorExpr, n: int, cap: int = LIFTING_CAP) -> list[Lifting]:
    return [l for l in enumerate_liftings(t, n, cap) if is_monotone(l)]


def liftings_of_posetification(t: FunctorExpr, n: int, cap: int = LIFTING_CAP) -> list[frozenset]:
    """Upsets of ``T'(2^n)``, i.e. monotone maps ``T'(2^n) → 2``."""
    _check_caps(t, n, cap)
    q, _ = posetify_obj(t, cube_poset(n))
    return q.upsets()


def bijection_check(t: FunctorExpr, n: int, cap: int = LIFTING_CAP) -> Report:
    """``♥' ↦ ♥'∘τ`` from upsets of ``T'(2^n)`` onto the monotone liftings of ``T``."""
    name = f"lifting bijection {t} arity {n}"
    q, tau = posetify_obj(t, cube_poset(n))
    ups = liftings_of_posetification(t, n, cap)
    mono = monotone_liftings(t, n, cap)
    pairing = []
    images = set()
    for u in ups:
        l = Lifting(t, n, frozenset(v for v in tau.dom if tau(v) in u))
        if not is_monotone(l):
            return Report(name, False, {"upset": _show_upset(t, u), "reason": "image not monotone"})
        images.add(l.value)
        pairing.append((_show_upset(t, u), l.show()))
    details = {"upsets of T'(2^n)": len(ups), "monotone liftings": len(mono)}
    if len(images) != len(ups):
        return Report(name, False, {"reason": "not injective"}, details)
    missing = [l for l in mono if l.value not in images]
    if missing:
        return Report(name, False, {"reason": "not surjective", "lifting": missing[0].show()}, details)
    details["pairing"] = "; ".join(f"{a} -> {b}" for a, b in pairing)
    return Report(name, True, details=details)


def _show_upset(t: FunctorExpr, u: frozenset) -> str:
    return "{" + ", ".join(t.show_value(v) for v in sorted_elems(u)) + "}"


def oracle_agreement(t: FunctorExpr, n: int, max_size: int = 3, cap: int = LIFTING_CAP) -> Report:
    """Cross-check the relation-lifting criterion against the componentwise oracle."""
    name = f"monotonicity oracle {t} arity {n}"
    count = 0
    for l in enumerate_liftings(t, n, cap):
        a, b = is_monotone(l), is_monotone_componentwise(l, max_size)
        if a != b:
            raise InternalError(f"monotonicity criteria disagree on {l.show()}: criterion {a}, oracle {b}")
        count += a
    return Report(name, True, details={"monotone": count, "oracle set sizes": f"<= {max_size}"})


# ------------------------------------------------------------- lifting tables


def parse_lifting_line(line: str) -> tuple[str, Lifting]:
    """``name = { v, ... } : functor @ arity``."""
    if "=" not in line:
        raise InputError(f"lifting line needs '=': {line!r}")
    name, rest = (s.strip() for s in line.split("=", 1))
    if not name.isidentifier():
        raise InputError(f"bad lifting name {name!r}")
    if not rest.startswith("{"):
        raise InputError("lifting value must be a braced set of functor values")
    depth = 0
    for end, ch in enumerate(rest):
        depth += ch in "{[(<"
        depth -= ch in "}])>"
        if depth == 0:
            break
    else:
        raise InputError("unbalanced braces in lifting value")
    body, tail = rest[:end + 1], rest[end + 1:].strip()
    if not tail.startswith(":") or "@" not in tail:
        raise InputError("expected ': <functor> @ <arity>' after the value set")
    fun_text, arity_text = tail[1:].rsplit("@", 1)
    t = parse_functor(fun_text.strip())
    try:
        n = int(arity_text)
    except ValueError:
        raise InputError(f"bad arity {arity_text.strip()!r}") from None
    tok = _Tokens(body)
    vals = tok.braced("{", "}", lambda k: t.parse_value(k, lambda kk: kk.label()))
    return name, Lifting(t, n, frozenset(vals))


def load_lifting_table(text: str) -> dict[str, Lifting]:
    table = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, l = parse_lifting_line(line)
        if name in table:
            raise InputError(f"lifting {name!r} defined twice")
        table[name] = l
    return table
