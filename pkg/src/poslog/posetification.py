"""Posetification of Set-functors: the locally monotone extension to finite posets.

``T'X`` is computed twice.  The first route takes the coinserter of the pair
``(T d0, T d1)`` obtained by applying ``T`` to the truncated nerve of ``X``.  The
second closes the lifted order ``Rel_T(≤_X)`` on ``T X0`` into a preorder and
quotients it.  The two must agree exactly.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass, field

from .errors import InputError, InternalError
from .finposet import (
    FiniteSet, FnMap, MonotoneMap, Poset, Square, coinserter, comma_object,
    connected_components, discrete, is_exact_square, monotone_maps, normalize_preorder,
    posets_up_to, show, sorted_elems, truncated_nerve,
)
from .report import Report
from .setfunctor import (
    Comp, FunctorExpr, Pow, check_size, preserves_weak_pullbacks, subsets,
)


@dataclass
class Posetification:
    base: FunctorExpr
    guard: int | None = None
    cache: dict = field(default_factory=dict, repr=False)

    def coinserter_route(self, x: Poset) -> tuple[Poset, FnMap]:
        t = self.base
        nerve = truncated_nerve(x)
        x0 = x.elements
        check_size(t.size(len(x0)), f"{t}({len(x0)})", self.guard)
        tx0 = discrete(t.values(x0))
        ps = nerve.x1.elements
        image = t.span_image(ps, nerve.d0.mapping, nerve.d1.mapping, x0, x0, self.guard)
        # the coinserter only sees the image of T X1 in T X0 × T X0
        dom = discrete(image)
        d0 = MonotoneMap.unchecked(dom, tx0, {p: p[0] for p in dom})
        d1 = MonotoneMap.unchecked(dom, tx0, {p: p[1] for p in dom})
        q, c = coinserter(d0, d1)
        return q, FnMap(tx0.carrier, q.carrier, c.mapping)

    def relation_route(self, x: Poset) -> tuple[Poset, FnMap]:
        t = self.base
        x0 = x.elements
        check_size(t.size(len(x0)), f"{t}({len(x0)})", self.guard)
        tx0 = FiniteSet(tuple(t.values(x0)))
        related = t.lift(x.le, x0, x0)
        rel = [(u, v) for u in tx0 for v in tx0 if related(u, v)]
        return normalize_preorder(tx0, rel)

    def obj(self, x: Poset) -> tuple[Poset, FnMap]:
        if x not in self.cache:
            qa, ea = self.coinserter_route(x)
            qb, eb = self.relation_route(x)
            if qa != qb or ea != eb:
                raise InternalError(f"posetification routes disagree for {self.base} on {x.elements}")
            self.cache[x] = (qa, ea)
        return self.cache[x]

    def map(self, f: MonotoneMap) -> MonotoneMap:
        (px, ex), (py, ey) = self.obj(f.dom), self.obj(f.cod)
        tf = self.base.fmap(f.mapping, f.dom.elements, f.cod.elements)
        out: dict = {}
        for w in ex.dom:
            img = ey(tf(w))
            prev = out.setdefault(ex(w), img)
            if prev != img:
                raise InternalError("T'f is not well defined on quotient classes")
        return MonotoneMap(px, py, out)

    def __str__(self) -> str:
        return f"{self.base}'"


_instances: dict = {}


def posetification(t: FunctorExpr) -> Posetification:
    if t not in _instances:
        _instances[t] = Posetification(t)
    return _instances[t]


def posetify_obj(t: FunctorExpr, x: Poset) -> tuple[Poset, FnMap]:
    return posetification(t).obj(x)


def posetify_map(t: FunctorExpr, f: MonotoneMap) -> MonotoneMap:
    return posetification(t).map(f)


# -------------------------------------------------------------- closed forms


def is_convex(x: Poset, s: Iterable) -> bool:
    s = set(s)
    return all(b in s for a in s for c in s for b in x.up[a] & x.down[c])


def egli_milner(x: Poset, u: Iterable, v: Iterable) -> bool:
    u, v = tuple(u), tuple(v)
    return (all(any(x.le(a, b) for b in v) for a in u)
            and all(any(x.le(a, b) for a in u) for b in v))


def convex_powerset(x: Poset) -> Poset:
    convex = [s for s in subsets(x.elements) if is_convex(x, s)]
    leq = frozenset((u, v) for u in convex for v in convex if egli_milner(x, u, v))
    return Poset(tuple(convex), leq)


def convex_hull(x: Poset, s: Iterable) -> tuple:
    s = set(s)
    return sorted_elems({b for a in s for c in s for b in x.up[a] & x.down[c]})


def upset_downset_functors(x: Poset, variant: str) -> Poset:
    """Downsets under inclusion, or upsets under reverse inclusion."""
    if variant == "down":
        sets = [sorted_elems(d) for d in x.downsets()]
        return Poset(tuple(sets), frozenset((a, b) for a in sets for b in sets if set(a) <= set(b)))
    if variant == "up":
        sets = [sorted_elems(u) for u in x.upsets()]
        return Poset(tuple(sets), frozenset((a, b) for a in sets for b in sets if set(b) <= set(a)))
    raise InputError("variant must be 'up' or 'down'")


def ordered_powerset_extension(x: Poset, variant: str) -> tuple[Poset, FnMap]:
    """Extension of ``X ↦ (P X, ⊆ or ⊇)`` from sets to posets.

    This is the coinserter of the pair obtained by applying the ordered powerset
    to the truncated nerve; unlike the discrete case the fibre order enters the
    closure.
    """
    if variant not in ("up", "down"):
        raise InputError("variant must be 'up' or 'down'")
    nerve = truncated_nerve(x)

    def ordered(elems: tuple) -> Poset:
        subs = subsets(elems)
        if variant == "down":
            return Poset._trusted(tuple(subs), frozenset((a, b) for a in subs for b in subs if set(a) <= set(b)))
        return Poset._trusted(tuple(subs), frozenset((a, b) for a in subs for b in subs if set(b) <= set(a)))

    p1, p0 = ordered(nerve.x1.elements), ordered(x.elements)
    d0 = MonotoneMap(p1, p0, {w: sorted_elems({p[0] for p in w}) for w in p1})
    d1 = MonotoneMap(p1, p0, {w: sorted_elems({p[1] for p in w}) for w in p1})
    q, c = coinserter(d0, d1)
    return q, FnMap(p0.carrier, q.carrier, c.mapping)


# -------------------------------------------------------- preservation checks


def exact_squares(bound: int, apex_bound: int | None = None) -> Iterable[Square]:
    """Lax exact squares over posets of size ≤ bound.

    Every cospan contributes its comma square; squares whose apex has at most
    ``apex_bound`` elements are added exhaustively.
    """
    if apex_bound is None:
        apex_bound = min(bound, 2)
    shapes = posets_up_to(bound)
    apexes = posets_up_to(apex_bound)
    for z in shapes:
        for x in shapes:
            fs = list(monotone_maps(x, z))
            for y in shapes:
                gs = list(monotone_maps(y, z))
                for f in fs:
                    for g in gs:
                        c, p0, p1 = comma_object(f, g)
                        yield Square(p0, p1, f, g)
                        for e in apexes:
                            for a in monotone_maps(e, x):
                                for b in monotone_maps(e, y):
                                    if not all(z.le(f(a(w)), g(b(w))) for w in e):
                                        continue
                                    sq = Square(a, b, f, g)
                                    if is_exact_square(sq):
                                        yield sq


def _describe_square(sq: Square) -> dict:
    def m(h: MonotoneMap) -> str:
        return "{" + ", ".join(f"{show(k)}->{show(h(k))}" for k in h.dom) + "}"

    def p(x: Poset) -> str:
        rel = [f"{show(a)}<{show(b)}" for a, b in x.hasse()]
        return "[" + " ".join(show(a) for a in x) + (" | " + " ".join(rel) if rel else "") + "]"

    return {"apex": p(sq.apex), "X": p(sq.f.dom), "Y": p(sq.g.dom), "Z": p(sq.f.cod),
            "alpha": m(sq.alpha), "beta": m(sq.beta), "f": m(sq.f), "g": m(sq.g)}


def image_square_exact(pt: Posetification, sq: Square) -> tuple | None:
    """Exactness of ``T'`` applied to ``sq``; returns a failing ``(u, v)`` or ``None``.

    Elements of ``T'E`` are classes of ``T E0``, so the legs of the image square
    are read off the span image of ``T E0`` followed by the quotient maps.
    """
    t = pt.base
    (tx, ex), (ty, ey) = pt.obj(sq.f.dom), pt.obj(sq.g.dom)
    tz, _ = pt.obj(sq.f.cod)
    tf, tg = pt.map(sq.f), pt.map(sq.g)
    e = sq.apex
    span = t.span_image(e.elements, sq.alpha.mapping, sq.beta.mapping,
                        sq.f.dom.elements, sq.g.dom.elements, pt.guard)
    legs = {(ex(a), ey(b)) for a, b in span}
    for u in tx:
        above = [b for a, b in legs if tx.le(u, a)]
        for v in ty:
            if tz.le(tf(u), tg(v)) and not any(ty.le(b, v) for b in above):
                return u, v
    return None


def preserves_exact_squares(t: FunctorExpr, bound: int, apex_bound: int | None = None,
                            cross_check: bool = True) -> Report:
    pt = posetification(t)
    name = f"{t}' preserves exact squares (bound {bound})"
    n = 0
    verdict = Report(name, True)
    for sq in exact_squares(bound, apex_bound):
        n += 1
        bad = image_square_exact(pt, sq)
        if bad is not None:
            u, v = bad
            verdict = Report(name, False, {**_describe_square(sq),
                                           "u": t.show_value(u), "v": t.show_value(v)})
            break
    verdict.details["squares checked"] = n
    if cross_check:
        wpb = preserves_weak_pullbacks(t, bound)
        verdict.details["weak pullback verdict"] = "preserved" if wpb.ok else "not preserved"
        if wpb.ok != verdict.ok:
            raise InternalError(f"exact-square and weak-pullback verdicts disagree for {t} at bound {bound}")
    return verdict


# ------------------------------------------------------ Pos-functors as foils


class PosFunctor:
    """A functor on finite posets given by its object and arrow actions."""

    name = "F"

    def obj(self, x: Poset) -> Poset:
        raise NotImplementedError

    def map(self, f: MonotoneMap) -> MonotoneMap:
        raise NotImplementedError


class PosetifiedFunctor(PosFunctor):
    def __init__(self, t: FunctorExpr):
        self.pt = posetification(t)
        self.name = str(self.pt)

    def obj(self, x):
        return self.pt.obj(x)[0]

    def map(self, f):
        return self.pt.map(f)


class DiscreteComponents(PosFunctor):
    """``D∘C``: the discrete poset of connected components."""

    name = "DC"

    def obj(self, x):
        comps, _ = connected_components(x)
        return discrete(comps)

    def map(self, f):
        _, pd = connected_components(f.dom)
        _, pc = connected_components(f.cod)
        out = {pd(a): pc(f(a)) for a in f.dom}
        return MonotoneMap(self.obj(f.dom), self.obj(f.cod), out)


class ArrowsFromTwo(PosFunctor):
    """``[2, -]``: monotone maps out of the two-chain, ordered pointwise."""

    name = "[2,-]"

    def obj(self, x):
        pairs = list(x.leq)
        return Poset._trusted(sorted_elems(pairs), frozenset(
            (p, q) for p in pairs for q in pairs if x.le(p[0], q[0]) and x.le(p[1], q[1])))

    def map(self, f):
        return MonotoneMap(self.obj(f.dom), self.obj(f.cod),
                           {p: (f(p[0]), f(p[1])) for p in f.dom.leq})


NAMED_POS_FUNCTORS = {"DC": DiscreteComponents, "[2,-]": ArrowsFromTwo}


def preserves_nerve_coinserters(fun: PosFunctor | FunctorExpr, x: Poset) -> Report:
    """Does ``F`` send the nerve cocone ``D X1 ⇉ D X0 → X`` to a coinserter?"""
    if isinstance(fun, FunctorExpr):
        fun = PosetifiedFunctor(fun)
    nerve = truncated_nerve(x)
    d0, d1 = nerve.discrete_pair()
    fd0, fd1, fc = fun.map(d0), fun.map(d1), fun.map(nerve.c)
    q, qc = coinserter(fd0, fd1)
    fx = fc.cod
    name = f"{fun.name} preserves the nerve coinserter of a {len(x)}-element poset"
    h: dict = {}
    for a in fc.dom:
        if h.setdefault(qc(a), fc(a)) != fc(a):
            return Report(name, False, {"class": show(qc(a))})
    if len(set(h.values())) != len(q) or set(h.values()) != set(fx.elements):
        return Report(name, False, {"coinserter size": len(q), "image size": len(fx)})
    for a in q:
        for b in q:
            if q.le(a, b) != fx.le(h[a], h[b]):
                return Report(name, False, {"pair": f"{show(a)}, {show(b)}"})
    return Report(name, True)


def preserves_surjection(fun: PosFunctor | FunctorExpr, f: MonotoneMap) -> bool:
    if isinstance(fun, FunctorExpr):
        fun = PosetifiedFunctor(fun)
    ff = fun.map(f)
    return set(ff.mapping.values()) == set(ff.cod.elements)


def composition_iso_check(t: FunctorExpr, s: FunctorExpr, x: Poset) -> Report:
    """``(T∘S)'X`` against ``T'(S'X)`` via ``[w] ↦ e_T(T(e_S)(w))``."""
    name = f"({t}.{s})' = {t}'.{s}' on a {len(x)}-element poset"
    ts, ets = posetify_obj(Comp(t, s), x)
    sx, es = posetify_obj(s, x)
    tsx, et = posetify_obj(t, sx)
    t_es = t.fmap(es.mapping, es.dom.elements, es.cod.elements)
    phi: dict = {}
    for w in ets.dom:
        img = et(t_es(w))
        if phi.setdefault(ets(w), img) != img:
            return Report(name, False, {"class": show(ets(w))})
    if len(set(phi.values())) != len(ts) or len(ts) != len(tsx):
        return Report(name, False, {"sizes": f"{len(ts)} vs {len(tsx)}"})
    for a in ts:
        for b in ts:
            if ts.le(a, b) != tsx.le(phi[a], phi[b]):
                return Report(name, False, {"pair": f"{t.show_value(a)}, {t.show_value(b)}"})
    return Report(name, True, details={"size": len(ts)})


def surjections(x: Poset, y: Poset) -> Iterable[MonotoneMap]:
    for f in monotone_maps(x, y):
        if set(f.mapping.values()) == set(y.elements):
            yield f


def convex_iso_check(x: Poset) -> Report:
    """``Pow'X`` against the convex powerset, via the convex hull of representatives."""
    px, ex = posetify_obj(Pow(), x)
    cx = convex_powerset(x)
    name = f"Pow' = convex powerset on a {len(x)}-element poset"
    hull = {u: convex_hull(x, u) for u in px}
    if len(set(hull.values())) != len(px) or set(hull.values()) != set(cx.elements):
        return Report(name, False, {"sizes": f"{len(px)} vs {len(cx)}"})
    for a, b in itertools.product(px, px):
        if px.le(a, b) != cx.le(hull[a], hull[b]):
            return Report(name, False, {"pair": f"{show(a)}, {show(b)}"})
    for w in ex.dom:
        if convex_hull(x, w) != hull[ex(w)]:
            return Report(name, False, {"class of": show(w)})
    return Report(name, True, details={"size": len(px)})

