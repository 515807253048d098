"""A closed language of finitary Set-endofunctors, evaluable on finite sets.

Values of ``T X`` are canonical hashable encodings:

* ``Pow``: sorted tuple of elements;
* ``Dist@d``: sorted tuple of ``(element, numerator)`` pairs with positive
  numerators summing to ``d``;
* ``MSet@k``: sorted tuple of length ``k`` with repetition;
* ``Nbhd``: sorted tuple of subsets (each a sorted tuple);
* ``F+G``: ``(0, u)`` or ``(1, v)``; ``F*G``: ``(u, v)``; ``F^n``: an ``n``-tuple;
* ``F.G``: an ``F``-value over ``G``-values.

Equality of values is therefore structural equality.
"""
from __future__ import annotations

import itertools
import os
import re
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import InputError, ResourceError
from .finposet import FiniteSet, FnMap, show, sort_key, sorted_elems
from .report import Report

DEFAULT_GUARD = 100_000

Rel = Callable[[object, object], bool]


def guard_limit(guard: int | None = None) -> int:
    if guard is not None:
        return guard
    env = os.environ.get("POSLOG_GUARD")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"POSLOG_GUARD must be an integer, got {env!r}") from None
    return DEFAULT_GUARD


def check_size(size: int, what: str, guard: int | None = None) -> None:
    limit = guard_limit(guard)
    if size > limit:
        raise ResourceError(f"{what} has {size} elements, above the guard {limit}")


def subsets(xs: tuple) -> list[tuple]:
    out = [c for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)]
    return sorted(out, key=sort_key)


def _show_set(items: Iterable[str], open_="{", close="}") -> str:
    return open_ + ",".join(items) + close


# ------------------------------------------------------------------- syntax


class FunctorExpr:
    """Base class; subclasses are frozen dataclasses, hence hashable."""

    needs_carriers = False
    prec = 5

    def size(self, n: int) -> int:
        raise NotImplementedError

    def values(self, xs: tuple) -> list:
        raise NotImplementedError

    def fmap(self, f: Mapping, xs: tuple, ys: tuple) -> Callable:
        raise NotImplementedError

    def lift(self, rel: Rel, xs: tuple | None, ys: tuple | None) -> Rel:
        """Membership test for the relation lifting of ``rel``.

        ``xs``/``ys`` are the carriers; only functors with ``needs_carriers``
        consult them.
        """
        raise NotImplementedError

    def is_value(self, v, members: frozenset) -> bool:
        raise NotImplementedError

    def show_value(self, v, elem: Callable = show) -> str:
        raise NotImplementedError

    def parse_value(self, tok: _Tokens, elem: Callable) -> object:
        raise NotImplementedError

    def span_image(self, ps: tuple, p1: Mapping, p2: Mapping, xs: tuple, ys: tuple,
                   guard: int | None = None) -> set:
        """``{(T p1 (w), T p2 (w)) | w ∈ T ps}``."""
        check_size(self.size(len(ps)), f"{self}({len(ps)})", guard)
        f1, f2 = self.fmap(p1, ps, xs), self.fmap(p2, ps, ys)
        return {(f1(w), f2(w)) for w in self.values(ps)}

    def text(self, ctx: int = 0) -> str:
        s = self._text()
        return f"({s})" if self.prec < ctx else s

    def __str__(self) -> str:
        return self.text()


@dataclass(frozen=True)
class Id(FunctorExpr):
    def size(self, n):
        return n

    def values(self, xs):
        return list(xs)

    def fmap(self, f, xs, ys):
        return f.__getitem__

    def lift(self, rel, xs, ys):
        return rel

    def is_value(self, v, members):
        return v in members

    def show_value(self, v, elem=show):
        return elem(v)

    def parse_value(self, tok, elem):
        return elem(tok)

    def _text(self):
        return "Id"


@dataclass(frozen=True)
class Const(FunctorExpr):
    labels: tuple

    def __post_init__(self):
        labels = sorted_elems(self.labels)
        if len(set(labels)) != len(labels):
            raise InputError("duplicate constant labels")
        object.__setattr__(self, "labels", labels)

    def size(self, n):
        return len(self.labels)

    def values(self, xs):
        return list(self.labels)

    def fmap(self, f, xs, ys):
        return lambda v: v

    def lift(self, rel, xs, ys):
        return lambda u, v: u == v

    def is_value(self, v, members):
        return v in self.labels

    def show_value(self, v, elem=show):
        return show(v)

    def parse_value(self, tok, elem):
        lab = tok.label()
        if lab not in self.labels:
            raise InputError(f"{lab!r} is not a constant of {self}")
        return lab

    def _text(self):
        return "Const({" + ",".join(self.labels) + "})"


@dataclass(frozen=True)
class Pow(FunctorExpr):
    def size(self, n):
        return 2 ** n

    def values(self, xs):
        return subsets(tuple(xs))

    def fmap(self, f, xs, ys):
        return lambda u: sorted_elems({f[x] for x in u})

    def lift(self, rel, xs, ys):
        def related(u, v):
            return (all(any(rel(a, b) for b in v) for a in u)
                    and all(any(rel(a, b) for a in u) for b in v))
        return related

    def is_value(self, v, members):
        return isinstance(v, tuple) and v == sorted_elems(set(v)) and all(x in members for x in v)

    def show_value(self, v, elem=show):
        return _show_set(elem(x) for x in v)

    def parse_value(self, tok, elem):
        items = tok.braced("{", "}", elem)
        return sorted_elems(set(items))

    def _text(self):
        return "Pow"


def _compositions(total: int, parts: int) -> Iterable[tuple]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _hall(p: tuple, q: tuple, rel: Rel) -> bool:
    """Supply/demand feasibility of a coupling of ``p`` and ``q`` supported on ``rel``."""
    if sum(k for _, k in p) != sum(k for _, k in q):
        return False
    for r in range(1, len(p) + 1):
        for part in itertools.combinations(p, r):
            need = sum(k for _, k in part)
            reach = sum(k for b, k in q if any(rel(a, b) for a, _ in part))
            if need > reach:
                return False
    return True


@dataclass(frozen=True)
class Dist(FunctorExpr):
    """Finitely supported distributions with probabilities in ``{0, 1/d, ..., 1}``."""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise InputError("Dist denominator must be a positive integer")

    def size(self, n):
        return comb(n + self.d - 1, self.d) if n else 0

    def values(self, xs):
        xs = tuple(xs)
        out = [tuple((x, k) for x, k in zip(xs, ks) if k) for ks in _compositions(self.d, len(xs))]
        return sorted(out, key=sort_key)

    def fmap(self, f, xs, ys):
        def image(p):
            acc: dict = {}
            for x, k in p:
                acc[f[x]] = acc.get(f[x], 0) + k
            return tuple(sorted(acc.items(), key=lambda t: sort_key(t[0])))
        return image

    def lift(self, rel, xs, ys):
        return lambda u, v: _hall(u, v, rel)

    def is_value(self, v, members):
        return (isinstance(v, tuple) and all(x in members and k > 0 for x, k in v)
                and sum(k for _, k in v) == self.d
                and v == tuple(sorted(v, key=lambda t: sort_key(t[0])))
                and len({x for x, _ in v}) == len(v))

    def show_value(self, v, elem=show):
        return _show_set(f"{elem(x)}:{Fraction(k, self.d)}" for x, k in v)

    def parse_value(self, tok, elem):
        def weighted(t):
            x = elem(t)
            t.expect(":")
            w = t.fraction()
            k = w * self.d
            if k.denominator != 1 or k <= 0:
                raise InputError(f"weight {w} is not a positive multiple of 1/{self.d}")
            return x, int(k)
        items = tok.braced("{", "}", weighted)
        acc: dict = {}
        for x, k in items:
            acc[x] = acc.get(x, 0) + k
        if sum(acc.values()) != self.d:
            raise InputError("distribution weights must sum to 1")
        return tuple(sorted(acc.items(), key=lambda t: sort_key(t[0])))

    def _text(self):
        return f"Dist@{self.d}"


@dataclass(frozen=True)
class MSet(FunctorExpr):
    """Multisets of total size exactly ``k``."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise InputError("MSet size must be a nonnegative integer")

    def size(self, n):
        if n == 0:
            return 1 if self.k == 0 else 0
        return comb(n + self.k - 1, self.k)

    def values(self, xs):
        return sorted((tuple(c) for c in itertools.combinations_with_replacement(tuple(xs), self.k)),
                      key=sort_key)

    def fmap(self, f, xs, ys):
        return lambda m: sorted_elems(f[x] for x in m)

    def lift(self, rel, xs, ys):
        def related(u, v):
            return _hall(_counts(u), _counts(v), rel)
        return related

    def is_value(self, v, members):
        return (isinstance(v, tuple) and len(v) == self.k and all(x in members for x in v)
                and v == sorted_elems(v))

    def show_value(self, v, elem=show):
        return _show_set((elem(x) for x in v), "[", "]")

    def parse_value(self, tok, elem):
        items = tok.braced("[", "]", elem)
        if len(items) != self.k:
            raise InputError(f"multiset must have exactly {self.k} elements")
        return sorted_elems(items)

    def _text(self):
        return f"MSet@{self.k}"


def _counts(m: tuple) -> tuple:
    acc: dict = {}
    for x in m:
        acc[x] = acc.get(x, 0) + 1
    return tuple(acc.items())


@dataclass(frozen=True)
class Nbhd(FunctorExpr):
    """The neighbourhood functor ``2^(2^X)``, acting by double preimage."""

    needs_carriers = True

    def size(self, n):
        return 2 ** (2 ** n)

    def values(self, xs):
        return subsets(tuple(subsets(tuple(xs))))

    def fmap(self, f, xs, ys):
        xs = tuple(xs)
        pre = [(b, tuple(x for x in xs if f[x] in set(b))) for b in subsets(tuple(ys))]

        def image(n):
            members = set(n)
            return tuple(b for b, p in pre if p in members)
        return image

    def lift(self, rel, xs, ys):
        if xs is None or ys is None:
            raise InputError("Nbhd relation lifting needs explicit carriers")
        pairs = [(a, b) for a in xs for b in ys if rel(a, b)]
        pre1 = {s: frozenset(i for i, (a, _) in enumerate(pairs) if a in s) for s in subsets(tuple(xs))}
        pre2 = {s: frozenset(i for i, (_, b) in enumerate(pairs) if b in s) for s in subsets(tuple(ys))}
        memo1: dict = {}
        memo2: dict = {}

        def forced(n, pre, memo):
            # membership each subset of the relation must have for n to be an image
            if n not in memo:
                members = set(n)
                out: dict | None = {}
                for s, p in pre.items():
                    want = s in members
                    if out.setdefault(p, want) != want:
                        out = None
                        break
                memo[n] = out
            return memo[n]

        def related(u, v):
            fu, fv = forced(u, pre1, memo1), forced(v, pre2, memo2)
            if fu is None or fv is None:
                return False
            return all(fv[p] == m for p, m in fu.items() if p in fv)
        return related

    def span_image(self, ps, p1, p2, xs, ys, guard=None):
        # the image only depends on which preimages of subsets lie in w
        ps = tuple(ps)
        pre1 = [(a, tuple(w for w in ps if p1[w] in set(a))) for a in subsets(tuple(xs))]
        pre2 = [(b, tuple(w for w in ps if p2[w] in set(b))) for b in subsets(tuple(ys))]
        relevant = sorted({p for _, p in pre1} | {p for _, p in pre2}, key=sort_key)
        check_size(2 ** len(relevant), "Nbhd span image", guard)
        out = set()
        for bits in range(2 ** len(relevant)):
            chosen = {relevant[i] for i in range(len(relevant)) if bits >> i & 1}
            out.add((tuple(a for a, p in pre1 if p in chosen), tuple(b for b, p in pre2 if p in chosen)))
        return out

    def is_value(self, v, members):
        return (isinstance(v, tuple) and v == sorted_elems(set(v))
                and all(Pow().is_value(s, members) for s in v))

    def show_value(self, v, elem=show):
        return _show_set(_show_set(elem(x) for x in s) for s in v)

    def parse_value(self, tok, elem):
        items = tok.braced("{", "}", lambda t: sorted_elems(set(t.braced("{", "}", elem))))
        return sorted_elems(set(items))

    def _text(self):
        return "Nbhd"


@dataclass(frozen=True)
class Sum(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr
    prec = 1

    @property
    def needs_carriers(self):
        return self.left.needs_carriers or self.right.needs_carriers

    def size(self, n):
        return self.left.size(n) + self.right.size(n)

    def values(self, xs):
        return [(0, u) for u in self.left.values(xs)] + [(1, v) for v in self.right.values(xs)]

    def fmap(self, f, xs, ys):
        fl, fr = self.left.fmap(f, xs, ys), self.right.fmap(f, xs, ys)
        return lambda t: (0, fl(t[1])) if t[0] == 0 else (1, fr(t[1]))

    def lift(self, rel, xs, ys):
        rl, rr = self.left.lift(rel, xs, ys), self.right.lift(rel, xs, ys)
        return lambda u, v: u[0] == v[0] and (rl if u[0] == 0 else rr)(u[1], v[1])

    def is_value(self, v, members):
        return (isinstance(v, tuple) and len(v) == 2 and v[0] in (0, 1)
                and (self.left if v[0] == 0 else self.right).is_value(v[1], members))

    def show_value(self, v, elem=show):
        side = self.left if v[0] == 0 else self.right
        return ("inl(" if v[0] == 0 else "inr(") + side.show_value(v[1], elem) + ")"

    def parse_value(self, tok, elem):
        tag = tok.word()
        if tag not in ("inl", "inr"):
            raise InputError(f"expected inl(...) or inr(...), got {tag!r}")
        tok.expect("(")
        side = 0 if tag == "inl" else 1
        v = (self.left if side == 0 else self.right).parse_value(tok, elem)
        tok.expect(")")
        return (side, v)

    def _text(self):
        return f"{self.left.text(1)}+{self.right.text(2)}"


@dataclass(frozen=True)
class Prod(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr
    prec = 2

    @property
    def needs_carriers(self):
        return self.left.needs_carriers or self.right.needs_carriers

    def size(self, n):
        return self.left.size(n) * self.right.size(n)

    def values(self, xs):
        return [(u, v) for u in self.left.values(xs) for v in self.right.values(xs)]

    def fmap(self, f, xs, ys):
        fl, fr = self.left.fmap(f, xs, ys), self.right.fmap(f, xs, ys)
        return lambda t: (fl(t[0]), fr(t[1]))

    def lift(self, rel, xs, ys):
        rl, rr = self.left.lift(rel, xs, ys), self.right.lift(rel, xs, ys)
        return lambda u, v: rl(u[0], v[0]) and rr(u[1], v[1])

    def is_value(self, v, members):
        return (isinstance(v, tuple) and len(v) == 2
                and self.left.is_value(v[0], members) and self.right.is_value(v[1], members))

    def show_value(self, v, elem=show):
        return f"({self.left.show_value(v[0], elem)},{self.right.show_value(v[1], elem)})"

    def parse_value(self, tok, elem):
        tok.expect("(")
        u = self.left.parse_value(tok, elem)
        tok.expect(",")
        v = self.right.parse_value(tok, elem)
        tok.expect(")")
        return (u, v)

    def _text(self):
        return f"{self.left.text(2)}*{self.right.text(3)}"


@dataclass(frozen=True)
class Exp(FunctorExpr):
    base: FunctorExpr
    n: int
    prec = 4

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InputError("exponent must be a positive integer")

    @property
    def needs_carriers(self):
        return self.base.needs_carriers

    def size(self, n):
        return self.base.size(n) ** self.n

    def values(self, xs):
        return [tuple(t) for t in itertools.product(self.base.values(xs), repeat=self.n)]

    def fmap(self, f, xs, ys):
        fb = self.base.fmap(f, xs, ys)
        return lambda t: tuple(fb(c) for c in t)

    def lift(self, rel, xs, ys):
        rb = self.base.lift(rel, xs, ys)
        return lambda u, v: all(rb(a, b) for a, b in zip(u, v))

    def is_value(self, v, members):
        return (isinstance(v, tuple) and len(v) == self.n
                and all(self.base.is_value(c, members) for c in v))

    def show_value(self, v, elem=show):
        return _show_set((self.base.show_value(c, elem) for c in v), "<", ">")

    def parse_value(self, tok, elem):
        items = tok.braced("<", ">", lambda t: self.base.parse_value(t, elem))
        if len(items) != self.n:
            raise InputError(f"expected a {self.n}-tuple")
        return tuple(items)

    def _text(self):
        return f"{self.base.text(5)}^{self.n}"


@dataclass(frozen=True)
class Comp(FunctorExpr):
    """``outer ∘ inner``, written ``outer.inner``."""

    outer: FunctorExpr
    inner: FunctorExpr
    prec = 3

    @property
    def needs_carriers(self):
        return self.outer.needs_carriers or self.inner.needs_carriers

    def size(self, n):
        return self.outer.size(self.inner.size(n))

    def values(self, xs):
        return self.outer.values(tuple(self.inner.values(xs)))

    def fmap(self, f, xs, ys):
        gx = tuple(self.inner.values(xs))
        gy = tuple(self.inner.values(ys)) if self.outer.needs_carriers else ()
        g = self.inner.fmap(f, xs, ys)
        return self.outer.fmap({s: g(s) for s in gx}, gx, gy)

    def lift(self, rel, xs, ys):
        inner = self.inner.lift(rel, xs, ys)
        if self.outer.needs_carriers:
            gx, gy = tuple(self.inner.values(xs)), tuple(self.inner.values(ys))
        else:
            gx = gy = None
        return self.outer.lift(inner, gx, gy)

    def is_value(self, v, members):
        # inner values are checked lazily through the outer structure
        return self.outer.is_value(v, _InnerValues(self.inner, members))

    def show_value(self, v, elem=show):
        return self.outer.show_value(v, lambda s: self.inner.show_value(s, elem))

    def parse_value(self, tok, elem):
        return self.outer.parse_value(tok, lambda t: self.inner.parse_value(t, elem))

    def _text(self):
        return f"{self.outer.text(4)}.{self.inner.text(3)}"


class _InnerValues:
    def __init__(self, inner: FunctorExpr, members):
        self.inner, self.members = inner, members

    def __contains__(self, v) -> bool:
        return self.inner.is_value(v, self.members)


# ----------------------------------------------------------------- operations


@dataclass(frozen=True)
class Relation:
    left: FiniteSet
    right: FiniteSet
    pairs: frozenset

    def __post_init__(self):
        pairs = frozenset(self.pairs)
        for a, b in pairs:
            if a not in self.left or b not in self.right:
                raise InputError(f"relation pair ({show(a)},{show(b)}) outside its carriers")
        object.__setattr__(self, "pairs", pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def compose(self, other: Relation) -> Relation:
        """``other ∘ self``: first self, then other."""
        pairs = {(a, c) for a, b in self.pairs for b2, c in other.pairs if b == b2}
        return Relation(self.left, other.right, frozenset(pairs))

    def converse(self) -> Relation:
        return Relation(self.right, self.left, frozenset((b, a) for a, b in self.pairs))


def apply_obj(t: FunctorExpr, x: FiniteSet | Iterable, guard: int | None = None) -> FiniteSet:
    xs = x.elements if isinstance(x, FiniteSet) else sorted_elems(x)
    check_size(t.size(len(xs)), f"{t}({len(xs)})", guard)
    return FiniteSet(tuple(t.values(xs)))


def apply_map(t: FunctorExpr, f: FnMap, guard: int | None = None) -> FnMap:
    tx, ty = apply_obj(t, f.dom, guard), apply_obj(t, f.cod, guard)
    tf = t.fmap(f.mapping, f.dom.elements, f.cod.elements)
    return FnMap(tx, ty, {u: tf(u) for u in tx})


def rel_lift(t: FunctorExpr, r: Relation, guard: int | None = None) -> Relation:
    """Relation lifting via per-constructor closed forms (Egli-Milner, Hall, ...)."""
    tx, ty = apply_obj(t, r.left, guard), apply_obj(t, r.right, guard)
    related = t.lift(lambda a, b: (a, b) in r.pairs, r.left.elements, r.right.elements)
    return Relation(tx, ty, frozenset((u, v) for u in tx for v in ty if related(u, v)))


def rel_lift_span(t: FunctorExpr, r: Relation, guard: int | None = None) -> Relation:
    """Relation lifting by definition: the image of ``T r`` under both projections."""
    tx, ty = apply_obj(t, r.left, guard), apply_obj(t, r.right, guard)
    ps = sorted_elems(r.pairs)
    pairs = t.span_image(ps, {p: p[0] for p in ps}, {p: p[1] for p in ps},
                         r.left.elements, r.right.elements, guard)
    return Relation(tx, ty, frozenset(pairs))


def weak_pullback(f: FnMap, g: FnMap) -> tuple[FiniteSet, FnMap, FnMap]:
    if f.cod != g.cod:
        raise InputError("pullback needs a common codomain")
    p = FiniteSet(tuple((a, b) for a in f.dom for b in g.dom if f(a) == g(b)))
    return (p, FnMap(p, f.dom, {w: w[0] for w in p}), FnMap(p, g.dom, {w: w[1] for w in p}))


def _labels(n: int, prefix: str = "") -> tuple:
    return tuple(f"{prefix}{i}" for i in range(n))


def cospans_by_fibres(bound: int) -> list[tuple[FnMap, FnMap]]:
    """Set cospans ``X → Z ← Y`` with all sizes ≤ bound, one per isomorphism class.

    A cospan is determined up to iso by the multiset of fibre-size pairs over Z.
    """
    out = []
    for k in range(bound + 1):
        cells = [(a, b) for a in range(bound + 1) for b in range(bound + 1)]
        for combo in itertools.combinations_with_replacement(cells, k):
            if sum(a for a, _ in combo) > bound or sum(b for _, b in combo) > bound:
                continue
            z = FiniteSet(_labels(k))
            fm, gm = {}, {}
            for zi, (a, b) in enumerate(combo):
                for _ in range(a):
                    fm[str(len(fm))] = str(zi)
                for _ in range(b):
                    gm[str(len(gm))] = str(zi)
            x, y = FiniteSet(tuple(fm)), FiniteSet(tuple(gm))
            out.append((FnMap(x, z, fm), FnMap(y, z, gm)))
    out.sort(key=lambda fg: (max(len(fg[0].dom), len(fg[1].dom), len(fg[0].cod)),
                             len(fg[0].dom) + len(fg[1].dom) + len(fg[0].cod)))
    return out


def describe_map(f: FnMap | Mapping) -> str:
    m = f.mapping if hasattr(f, "mapping") else f
    return "{" + ", ".join(f"{show(a)}->{show(m[a])}" for a in sorted_elems(m)) + "}"


def preserves_weak_pullbacks(t: FunctorExpr, bound: int, guard: int | None = None) -> Report:
    name = f"{t} preserves weak pullbacks (bound {bound})"
    checked = 0
    for f, g in cospans_by_fibres(bound):
        p, p1, p2 = weak_pullback(f, g)
        tf, tg = apply_map(t, f, guard), apply_map(t, g, guard)
        image = t.span_image(p.elements, p1.mapping, p2.mapping, f.dom.elements, g.dom.elements, guard)
        by_z: dict = {}
        for v in tg.dom:
            by_z.setdefault(tg(v), []).append(v)
        checked += 1
        for u in tf.dom:
            for v in by_z.get(tf(u), ()):
                if (u, v) not in image:
                    return Report(name, False, {
                        "f": describe_map(f), "g": describe_map(g),
                        "u": t.show_value(u), "v": t.show_value(v),
                    }, {"cospans checked": checked})
    return Report(name, True, details={"cospans checked": checked})


def check_functor_laws(t: FunctorExpr, samples: Iterable[tuple[FnMap, FnMap]],
                       guard: int | None = None) -> Report:
    name = f"{t} functor laws"
    n = 0
    for f, g in samples:
        for s in (f.dom, f.cod, g.cod):
            tid = apply_map(t, FnMap.identity(s), guard)
            if any(tid(u) != u for u in tid.dom):
                return Report(name, False, {"identity on": str(len(s))})
        if apply_map(t, f.then(g), guard) != apply_map(t, f, guard).then(apply_map(t, g, guard)):
            return Report(name, False, {"f": describe_map(f), "g": describe_map(g)})
        n += 1
    return Report(name, True, details={"composable pairs": n})


# ------------------------------------------------------------------- parsing


_TOKEN = re.compile(r"\s*(?:(\d+/\d+)|([A-Za-z0-9_'][A-Za-z0-9_']*)|(\[\]|<>|->|.))")


class _Tokens:
    """Tiny tokenizer shared by functor expressions and value literals."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str | None:
        m = _TOKEN.match(self.text, self.pos)
        if not m or not m.group(0).strip():
            return None
        return m.group(1) or m.group(2) or m.group(3)

    def next(self) -> str:
        m = _TOKEN.match(self.text, self.pos)
        if not m or not m.group(0).strip():
            raise InputError(f"unexpected end of input in {self.text!r}")
        self.pos = m.end()
        return m.group(1) or m.group(2) or m.group(3)

    def expect(self, s: str) -> None:
        got = self.next()
        if got != s:
            raise InputError(f"expected {s!r} but found {got!r} in {self.text!r}")

    def word(self) -> str:
        w = self.next()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", w):
            raise InputError(f"expected a name, found {w!r}")
        return w

    def label(self) -> str:
        w = self.next()
        if not re.fullmatch(r"[A-Za-z0-9_']+", w):
            raise InputError(f"expected an element label, found {w!r}")
        return w

    def integer(self) -> int:
        w = self.next()
        if not w.isdigit():
            raise InputError(f"expected an integer, found {w!r}")
        return int(w)

    def fraction(self) -> Fraction:
        w = self.next()
        if not re.fullmatch(r"\d+(/\d+)?", w):
            raise InputError(f"expected a fraction, found {w!r}")
        return Fraction(w)

    def braced(self, open_: str, close: str, item: Callable) -> list:
        self.expect(open_)
        items = []
        if self.peek() == close:
            self.next()
            return items
        while True:
            items.append(item(self))
            sep = self.next()
            if sep == close:
                return items
            if sep != ",":
                raise InputError(f"expected ',' or {close!r}, found {sep!r}")

    def done(self) -> bool:
        return self.text[self.pos:].strip() == ""


def parse_functor(text: str, loader: Callable[[str], Iterable[str]] | None = None) -> FunctorExpr:
    """Parse the functor grammar; ``.`` binds tighter than ``*`` and looser than ``^``.

    ``loader`` resolves ``Const(<path>)`` to a set of labels.
    """
    tok = _Tokens(text)
    expr = _parse_sum(tok, loader)
    if not tok.done():
        raise InputError(f"trailing input in functor expression {text!r}")
    return expr


def _parse_sum(tok, loader):
    e = _parse_prod(tok, loader)
    while tok.peek() == "+":
        tok.next()
        e = Sum(e, _parse_prod(tok, loader))
    return e


def _parse_prod(tok, loader):
    e = _parse_comp(tok, loader)
    while tok.peek() == "*":
        tok.next()
        e = Prod(e, _parse_comp(tok, loader))
    return e


def _parse_comp(tok, loader):
    e = _parse_power(tok, loader)
    if tok.peek() == ".":
        tok.next()
        return Comp(e, _parse_comp(tok, loader))
    return e


def _parse_power(tok, loader):
    e = _parse_atom(tok, loader)
    while tok.peek() == "^":
        tok.next()
        e = Exp(e, tok.integer())
    return e


def _parse_atom(tok, loader):
    t = tok.next()
    if t == "(":
        e = _parse_sum(tok, loader)
        tok.expect(")")
        return e
    if t == "Id":
        return Id()
    if t == "Pow":
        return Pow()
    if t == "Nbhd":
        return Nbhd()
    if t in ("Dist", "MSet"):
        tok.expect("@")
        n = tok.integer()
        return Dist(n) if t == "Dist" else MSet(n)
    if t == "Const":
        return Const(tuple(_const_labels(tok, loader)))
    raise InputError(f"unknown functor {t!r}")


def _const_labels(tok: _Tokens, loader) -> list[str]:
    tok.expect("(")
    if tok.peek() == "{":
        labels = tok.braced("{", "}", lambda t: t.label())
        tok.expect(")")
        return labels
    end = tok.text.find(")", tok.pos)
    if end < 0:
        raise InputError("unterminated Const(...)")
    path = tok.text[tok.pos:end].strip()
    tok.pos = end + 1
    if loader is None:
        raise InputError("Const(<file>) needs a poset loader")
    return list(loader(path))


def parse_value(t: FunctorExpr, text: str) -> object:
    tok = _Tokens(text)
    v = t.parse_value(tok, lambda k: k.label())
    if not tok.done():
        raise InputError(f"trailing input in value {text!r}")
    return v
