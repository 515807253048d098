"""Finite posets, monotone maps, and the order-enriched (co)limits built from them.

Elements are hashable values; user-facing labels are strings, while derived
posets (functor images, comma objects) carry nested tuples.  Every enumeration
follows :func:`sort_key`, which orders strings lexicographically, so results are
reproducible byte-for-byte.
"""
from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InputError, InternalError
from .report import Report


def sort_key(x):
    if isinstance(x, str):
        return (0, x)
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(sort_key(y) for y in x)))
    raise TypeError(f"unsortable element {x!r}")


def sorted_elems(xs: Iterable) -> tuple:
    return tuple(sorted(xs, key=sort_key))


def show(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(show(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(show(y) for y in sorted_elems(x)) + "}"
    return str(x)


# ---------------------------------------------------------------- sets and maps


@dataclass(frozen=True)
class FiniteSet:
    elements: tuple

    def __post_init__(self):
        elems = sorted_elems(self.elements)
        if len(set(elems)) != len(elems):
            raise InputError("duplicate element labels")
        object.__setattr__(self, "elements", elems)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members


@dataclass(frozen=True, eq=False)
class FnMap:
    dom: FiniteSet
    cod: FiniteSet
    mapping: Mapping

    def __post_init__(self):
        m = dict(self.mapping)
        if set(m) != set(self.dom.elements):
            raise InputError("map is not total on its domain")
        for x, y in m.items():
            if y not in self.cod:
                raise InputError(f"image {show(y)} of {show(x)} outside codomain")
        object.__setattr__(self, "mapping", m)

    def __call__(self, x):
        return self.mapping[x]

    def _key(self):
        return (self.dom, self.cod, tuple(self.mapping[x] for x in self.dom))

    def __eq__(self, other):
        return isinstance(other, FnMap) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def then(self, g: FnMap) -> FnMap:
        """Composite ``g ∘ self``."""
        if g.dom != self.cod:
            raise InputError("maps are not composable")
        return FnMap(self.dom, g.cod, {x: g(self(x)) for x in self.dom})

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.cod.elements)

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.dom)

    @staticmethod
    def identity(s: FiniteSet) -> FnMap:
        return FnMap(s, s, {x: x for x in s})


# ---------------------------------------------------------------------- posets


@dataclass(frozen=True)
class Poset:
    elements: tuple
    leq: frozenset

    def __post_init__(self):
        elems = sorted_elems(self.elements)
        if len(set(elems)) != len(elems):
            raise InputError("duplicate element labels")
        object.__setattr__(self, "elements", elems)
        leq = frozenset(self.leq)
        object.__setattr__(self, "leq", leq)
        members = set(elems)
        for a, b in leq:
            if a not in members or b not in members:
                raise InputError(f"order pair ({show(a)},{show(b)}) mentions an unknown element")
        for a in elems:
            if (a, a) not in leq:
                raise InputError(f"order is not reflexive at {show(a)}")
        up = self.up
        for a, b in leq:
            if a != b and (b, a) in leq:
                raise InputError(f"order is not antisymmetric: {show(a)}, {show(b)}")
            if not up[b] <= up[a]:
                raise InputError(f"order is not transitive above ({show(a)},{show(b)})")

    @classmethod
    def _trusted(cls, elements: tuple, leq: frozenset) -> Poset:
        # for orders produced by our own closure code; skips the O(n^3) validation
        self = object.__new__(cls)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "leq", leq)
        return self

    @classmethod
    def from_relation(cls, elements: Iterable, pairs: Iterable) -> Poset:
        """Reflexive-transitive closure of ``pairs``; must already be antisymmetric."""
        carrier = FiniteSet(tuple(elements))
        pairs = list(pairs)
        for a, b in pairs:
            if a not in carrier or b not in carrier:
                raise InputError(f"order pair ({show(a)},{show(b)}) mentions an unknown element")
        reach = _warshall(carrier.elements, pairs)
        n = len(carrier)
        for i in range(n):
            for j in range(i + 1, n):
                if reach[i, j] and reach[j, i]:
                    a, b = carrier.elements[i], carrier.elements[j]
                    raise InputError(f"order is not antisymmetric: {show(a)}, {show(b)}")
        leq = frozenset(
            (carrier.elements[i], carrier.elements[j]) for i, j in zip(*np.nonzero(reach))
        )
        return cls._trusted(carrier.elements, leq)

    @classmethod
    def discrete_on(cls, elements: Iterable) -> Poset:
        elems = sorted_elems(elements)
        if len(set(elems)) != len(elems):
            raise InputError("duplicate element labels")
        return cls._trusted(elems, frozenset((x, x) for x in elems))

    @classmethod
    def chain(cls, n: int) -> Poset:
        labels = [str(i) for i in range(n)]
        return cls.from_relation(labels, zip(labels, labels[1:]))

    @cached_property
    def carrier(self) -> FiniteSet:
        return FiniteSet(self.elements)

    @cached_property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def up(self) -> dict:
        u = {x: set() for x in self.elements}
        for a, b in self.leq:
            u[a].add(b)
        return {x: frozenset(s) for x, s in u.items()}

    @cached_property
    def down(self) -> dict:
        d = {x: set() for x in self.elements}
        for a, b in self.leq:
            d[b].add(a)
        return {x: frozenset(s) for x, s in d.items()}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def le(self, a, b) -> bool:
        return (a, b) in self.leq

    def is_discrete(self) -> bool:
        return len(self.leq) == len(self.elements)

    def hasse(self) -> list[tuple]:
        covers = []
        for a in self.elements:
            strict = self.up[a] - {a}
            for b in strict:
                if not any(c != b and b in self.up[c] for c in strict):
                    covers.append((a, b))
        return sorted(covers, key=sort_key)

    def op(self) -> Poset:
        return Poset._trusted(self.elements, frozenset((b, a) for a, b in self.leq))

    def sub(self, elements: Iterable) -> Poset:
        keep = set(elements)
        return Poset._trusted(
            sorted_elems(keep), frozenset((a, b) for a, b in self.leq if a in keep and b in keep)
        )

    def product(self, other: Poset) -> Poset:
        elems = sorted_elems(itertools.product(self.elements, other.elements))
        leq = frozenset(
            ((a, x), (b, y)) for a, b in self.leq for x, y in other.leq
        )
        return Poset._trusted(elems, leq)

    def is_upset(self, s: Iterable) -> bool:
        s = set(s)
        return all(self.up[x] <= s for x in s)

    def is_downset(self, s: Iterable) -> bool:
        s = set(s)
        return all(self.down[x] <= s for x in s)

    def upset_closure(self, s: Iterable) -> frozenset:
        return frozenset().union(*(self.up[x] for x in s))

    def downset_closure(self, s: Iterable) -> frozenset:
        return frozenset().union(*(self.down[x] for x in s))

    def upset_masks(self) -> list[int]:
        """All upsets as bitmasks over :attr:`elements`, in increasing numeric order."""
        n = len(self.elements)
        up_mask = [0] * n
        down_mask = [0] * n
        for a, b in self.leq:
            i, j = self.index[a], self.index[b]
            up_mask[i] |= 1 << j
            down_mask[j] |= 1 << i
        out = []

        def go(i: int, inside: int, outside: int):
            if i == n:
                out.append(inside)
                return
            bit = 1 << i
            if inside & bit:
                go(i + 1, inside, outside)
            elif outside & bit:
                go(i + 1, inside, outside)
            else:
                go(i + 1, inside, outside | down_mask[i])
                go(i + 1, inside | up_mask[i], outside)

        go(0, 0, 0)
        return sorted(out)

    @cached_property
    def _upsets(self) -> tuple:
        return tuple(self.decode(m) for m in self.upset_masks())

    def upsets(self) -> list[frozenset]:
        return list(self._upsets)

    def downsets(self) -> list[frozenset]:
        return [frozenset(self.elements) - u for u in reversed(self.upsets())]

    def encode(self, s: Iterable) -> int:
        m = 0
        for x in s:
            m |= 1 << self.index[x]
        return m

    def decode(self, m: int) -> frozenset:
        return frozenset(x for i, x in enumerate(self.elements) if m >> i & 1)


def discrete(s: FiniteSet | Iterable) -> Poset:
    return Poset.discrete_on(s.elements if isinstance(s, FiniteSet) else s)


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    dom: Poset
    cod: Poset
    mapping: Mapping

    def __post_init__(self):
        m = dict(self.mapping)
        if set(m) != set(self.dom.elements):
            raise InputError("map is not total on its domain")
        for x, y in m.items():
            if y not in self.cod:
                raise InputError(f"image {show(y)} of {show(x)} outside codomain")
        object.__setattr__(self, "mapping", m)
        for a, b in self.dom.leq:
            if not self.cod.le(m[a], m[b]):
                raise InputError(f"map is not monotone on {show(a)} <= {show(b)}")

    @classmethod
    def unchecked(cls, dom: Poset, cod: Poset, mapping: Mapping) -> MonotoneMap:
        self = object.__new__(cls)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "mapping", dict(mapping))
        return self

    def __call__(self, x):
        return self.mapping[x]

    def _key(self):
        return (self.dom, self.cod, tuple(self.mapping[x] for x in self.dom.elements))

    def __eq__(self, other):
        return isinstance(other, MonotoneMap) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def then(self, g: MonotoneMap) -> MonotoneMap:
        """Composite ``g ∘ self``."""
        if g.dom != self.cod:
            raise InputError("maps are not composable")
        return MonotoneMap.unchecked(self.dom, g.cod, {x: g(self(x)) for x in self.dom})

    def le(self, other: MonotoneMap) -> bool:
        """Pointwise order, the 2-cells of Pos."""
        return all(self.cod.le(self(x), other(x)) for x in self.dom)

    def underlying(self) -> FnMap:
        return FnMap(self.dom.carrier, self.cod.carrier, self.mapping)

    @staticmethod
    def identity(p: Poset) -> MonotoneMap:
        return MonotoneMap.unchecked(p, p, {x: x for x in p})


def monotone_maps(dom: Poset, cod: Poset) -> Iterator[MonotoneMap]:
    """Every monotone map, in lexicographic order of the image tuple."""
    elems = dom.elements
    below = [[j for j in range(i) if dom.le(elems[j], elems[i]) or dom.le(elems[i], elems[j])]
             for i in range(len(elems))]
    targets = cod.elements
    img: list = [None] * len(elems)

    def go(i: int):
        if i == len(elems):
            yield MonotoneMap.unchecked(dom, cod, dict(zip(elems, img)))
            return
        for t in targets:
            ok = True
            for j in below[i]:
                if dom.le(elems[j], elems[i]) and not cod.le(img[j], t):
                    ok = False
                    break
                if dom.le(elems[i], elems[j]) and not cod.le(t, img[j]):
                    ok = False
                    break
            if ok:
                img[i] = t
                yield from go(i + 1)

    yield from go(0)


def functions(dom: FiniteSet, cod: FiniteSet) -> Iterator[FnMap]:
    for img in itertools.product(cod.elements, repeat=len(dom)):
        yield FnMap(dom, cod, dict(zip(dom.elements, img)))


# ------------------------------------------------------ closures and quotients


def _warshall(elements: tuple, pairs: Iterable) -> np.ndarray:
    idx = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    m = np.eye(n, dtype=bool)
    for a, b in pairs:
        m[idx[a], idx[b]] = True
    for k in range(n):
        m |= np.outer(m[:, k], m[k, :])
    return m


def _quotient_from_reach(elements: tuple, reach) -> tuple[Poset, dict]:
    """Collapse mutually reachable elements; representative is the least element."""
    n = len(elements)
    rep_of: dict = {}
    reps = []
    for i in range(n):
        if elements[i] in rep_of:
            continue
        reps.append(i)
        for j in range(i, n):
            if reach(i, j) and reach(j, i):
                rep_of[elements[j]] = elements[i]
    rep_elems = tuple(elements[i] for i in reps)
    leq = frozenset(
        (elements[i], elements[j]) for i in reps for j in reps if reach(i, j)
    )
    return Poset._trusted(rep_elems, leq), rep_of


def normalize_preorder(carrier: FiniteSet, rel: Iterable) -> tuple[Poset, FnMap]:
    rel = list(rel)
    for a, b in rel:
        if a not in carrier or b not in carrier:
            raise InputError(f"relation pair ({show(a)},{show(b)}) mentions an unknown element")
    m = _warshall(carrier.elements, rel)
    q, rep_of = _quotient_from_reach(carrier.elements, lambda i, j: m[i, j])
    return q, FnMap(carrier, q.carrier, rep_of)


def _reachability(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Reachability bitmasks via SCC condensation (Kosaraju) and a DAG sweep."""
    succ: list[set] = [set() for _ in range(n)]
    pred: list[set] = [set() for _ in range(n)]
    for a, b in edges:
        if a != b:
            succ[a].add(b)
            pred[b].add(a)
    order: list[int] = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [(s, iter(succ[s]))]
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                order.append(v)
            elif not seen[nxt]:
                seen[nxt] = True
                stack.append((nxt, iter(succ[nxt])))
    comp = [-1] * n
    comps: list[list[int]] = []
    for s in reversed(order):
        if comp[s] != -1:
            continue
        cid = len(comps)
        members = []
        comp[s] = cid
        stack = [s]
        while stack:
            v = stack.pop()
            members.append(v)
            for w in pred[v]:
                if comp[w] == -1:
                    comp[w] = cid
                    stack.append(w)
        comps.append(members)
    # Kosaraju numbers components in topological order; sweep it backwards
    creach = [0] * len(comps)
    for cid in range(len(comps) - 1, -1, -1):
        mask = 0
        for v in comps[cid]:
            mask |= 1 << v
        for v in comps[cid]:
            for w in succ[v]:
                if comp[w] != cid:
                    mask |= creach[comp[w]]
        creach[cid] = mask
    return [creach[comp[v]] for v in range(n)]


def coinserter(d0: MonotoneMap, d1: MonotoneMap) -> tuple[Poset, MonotoneMap]:
    """Quotient of the codomain by the zigzags ``y ≤ d0(x0), d1(x0) ≤ d0(x1), …``."""
    if d0.dom != d1.dom or d0.cod != d1.cod:
        raise InputError("coinserter needs a parallel pair")
    y = d0.cod
    idx = y.index
    edges = [(idx[a], idx[b]) for a, b in y.leq]
    edges += [(idx[d0(x)], idx[d1(x)]) for x in d0.dom]
    reach = _reachability(len(y), edges)
    q, rep_of = _quotient_from_reach(y.elements, lambda i, j: reach[i] >> j & 1)
    return q, MonotoneMap.unchecked(y, q, rep_of)


def connected_components(x: Poset) -> tuple[FiniteSet, FnMap]:
    """Components of the comparability graph, each named by its least element."""
    idx = x.index
    edges = [(idx[a], idx[b]) for a, b in x.leq] + [(idx[b], idx[a]) for a, b in x.leq]
    reach = _reachability(len(x), edges)
    rep = {}
    for i, a in enumerate(x.elements):
        r = reach[i] | 1 << i
        rep[a] = x.elements[(r & -r).bit_length() - 1]
    comps = FiniteSet(tuple(set(rep.values())))
    return comps, FnMap(x.carrier, comps, rep)


@dataclass(frozen=True)
class Nerve:
    base: Poset
    x0: FiniteSet
    x1: FiniteSet
    d0: FnMap
    d1: FnMap
    i: FnMap
    c: MonotoneMap

    def discrete_pair(self) -> tuple[MonotoneMap, MonotoneMap]:
        dx1, dx0 = discrete(self.x1), discrete(self.x0)
        return (MonotoneMap.unchecked(dx1, dx0, self.d0.mapping),
                MonotoneMap.unchecked(dx1, dx0, self.d1.mapping))


def truncated_nerve(x: Poset) -> Nerve:
    x0 = x.carrier
    x1 = FiniteSet(tuple(x.leq))
    d0 = FnMap(x1, x0, {p: p[0] for p in x1})
    d1 = FnMap(x1, x0, {p: p[1] for p in x1})
    i = FnMap(x0, x1, {a: (a, a) for a in x0})
    c = MonotoneMap(discrete(x0), x, {a: a for a in x0})
    nerve = Nerve(x, x0, x1, d0, d1, i, c)
    q, qc = coinserter(*nerve.discrete_pair())
    if q != x or any(qc(a) != a for a in x0):
        raise InternalError("nerve coinserter does not reproduce the poset")
    return nerve


def inserter(f: MonotoneMap, g: MonotoneMap) -> tuple[Poset, MonotoneMap]:
    if f.dom != g.dom or f.cod != g.cod:
        raise InputError("inserter needs a parallel pair")
    x = f.dom
    ins = x.sub(a for a in x if f.cod.le(f(a), g(a)))
    return ins, MonotoneMap.unchecked(ins, x, {a: a for a in ins})


def comma_object(f: MonotoneMap, g: MonotoneMap) -> tuple[Poset, MonotoneMap, MonotoneMap]:
    if f.cod != g.cod:
        raise InputError("comma object needs a common codomain")
    z = f.cod
    pairs = [(a, b) for a in f.dom for b in g.dom if z.le(f(a), g(b))]
    c = f.dom.product(g.dom).sub(pairs)
    return (c, MonotoneMap.unchecked(c, f.dom, {p: p[0] for p in c}),
            MonotoneMap.unchecked(c, g.dom, {p: p[1] for p in c}))


# --------------------------------------------------------------------- squares


@dataclass(frozen=True)
class Square:
    """A lax square ``f∘alpha ≤ g∘beta`` with apex E, legs into X and Y, and cospan into Z."""

    alpha: MonotoneMap
    beta: MonotoneMap
    f: MonotoneMap
    g: MonotoneMap

    def __post_init__(self):
        if self.alpha.dom != self.beta.dom:
            raise InputError("square legs must share the apex")
        if self.alpha.cod != self.f.dom or self.beta.cod != self.g.dom:
            raise InputError("square legs do not compose with the cospan")
        if self.f.cod != self.g.cod:
            raise InputError("cospan legs need a common codomain")
        z = self.f.cod
        for w in self.apex:
            if not z.le(self.f(self.alpha(w)), self.g(self.beta(w))):
                raise InputError(f"square is not lax at apex element {show(w)}")

    @property
    def apex(self) -> Poset:
        return self.alpha.dom


def is_exact_square(sq: Square) -> Report:
    x, y, z = sq.f.dom, sq.g.dom, sq.f.cod
    legs = [(sq.alpha(w), sq.beta(w)) for w in sq.apex]
    for a in x:
        for b in y:
            if z.le(sq.f(a), sq.g(b)) and not any(x.le(a, p) and y.le(q, b) for p, q in legs):
                return Report("exact square", False, {"x": show(a), "y": show(b)})
    return Report("exact square", True)


@dataclass(frozen=True)
class MapFlags:
    monotone_valid: bool
    embedding: bool
    surjective: bool


def classify_map(f: MonotoneMap) -> MapFlags:
    valid = all(f.cod.le(f(a), f(b)) for a, b in f.dom.leq)
    embedding = valid and all(
        f.dom.le(a, b) == f.cod.le(f(a), f(b)) for a in f.dom for b in f.dom
    )
    return MapFlags(valid, embedding, set(f.mapping.values()) == set(f.cod.elements))


# ------------------------------------------------ maps into the two-chain


def restrict_along(e: MonotoneMap, u: frozenset) -> frozenset:
    """Precomposition ``[e,2]``: the upset ``e⁻¹(u)``."""
    return frozenset(a for a in e.dom if e(a) in u)


def exists_along(e: MonotoneMap, f: frozenset) -> frozenset:
    """Left Kan extension ``∃_e`` of an upset of ``e.dom`` to an upset of ``e.cod``."""
    f = frozenset(f)
    if not e.dom.is_upset(f):
        raise InputError("exists_along expects an upset of the domain")
    return e.cod.upset_closure(e(a) for a in f)


def beck_chevalley_check(sq: Square) -> bool:
    """``[g,2]∘∃_f = ∃_beta∘[alpha,2]`` as maps from upsets of X to upsets of Y."""
    return all(restrict_along(sq.g, exists_along(sq.f, u)) == exists_along(sq.beta, restrict_along(sq.alpha, u))
               for u in sq.f.dom._upsets)


def upset_lattice(x: Poset) -> Poset:
    ups = x.upsets()
    return Poset._trusted(
        sorted_elems(ups), frozenset((a, b) for a in ups for b in ups if a <= b)
    )


SPLIT_LAWS = ("c∘d0 <= c∘d1", "c∘s = id", "d0∘t = id", "d1∘t = s∘c", "d1∘t <= id")
COINSERTER_LAW = "c is the coinserter of (d0, d1)"


def split_coinserter_check(f: MonotoneMap, g: MonotoneMap, i: MonotoneMap) -> Report:
    """The split-coinserter laws for ``[Y,2] ⇉ [X,2] → [ins(f,g),2]``.

    With ``d0=[f,2]``, ``d1=[g,2]``, ``c=[e,2]``, ``t=∃_f`` and ``s=∃_e`` the laws
    are ``c∘d0 ≤ c∘d1``, ``c∘s = id``, ``d0∘t = id`` and ``d1∘t = s∘c ≤ id``.
    Independently, the coinserter of ``(d0, d1)`` is computed directly and
    compared with ``c``.  Every law is evaluated; the witness names the first
    failure and ``details["failed"]`` lists all of them.
    """
    if f.dom != g.dom or f.cod != g.cod or i.dom != f.cod or i.cod != f.dom:
        raise InputError("split coinserter needs f,g: X→Y and i: Y→X")
    for a in f.dom:
        if i(f(a)) != a or i(g(a)) != a:
            raise InputError(f"i is not a common left inverse at {show(a)}")
    ins, e = inserter(f, g)
    x_ups, y_ups, ins_ups = f.dom.upsets(), f.cod.upsets(), ins.upsets()
    failed: dict = {}

    def law(name: str, ok: bool, at) -> None:
        if not ok and name not in failed:
            failed[name] = show(at)

    for u in y_ups:
        law(SPLIT_LAWS[0], restrict_along(e, restrict_along(f, u)) <= restrict_along(e, restrict_along(g, u)), u)
    for v in ins_ups:
        law(SPLIT_LAWS[1], restrict_along(e, exists_along(e, v)) == v, v)
    for u in x_ups:
        t = exists_along(f, u)
        lhs = restrict_along(g, t)
        law(SPLIT_LAWS[2], restrict_along(f, t) == u, u)
        law(SPLIT_LAWS[3], lhs == exists_along(e, restrict_along(e, u)), u)
        law(SPLIT_LAWS[4], lhs <= u, u)
    law(COINSERTER_LAW, _is_coinserter_of_upsets(f, g, e, x_ups, y_ups, ins), "[X,2]")

    details = {"inserter": ", ".join(show(a) for a in ins), "failed": ", ".join(failed) or "none"}
    if failed:
        first = next(iter(failed))
        return Report("split coinserter", False, {"law": first, "at": failed[first]}, details)
    return Report("split coinserter", True, details=details)


def _is_coinserter_of_upsets(f, g, e, x_ups, y_ups, ins) -> bool:
    lx, ly, lins = upset_lattice(f.dom), upset_lattice(f.cod), upset_lattice(ins)
    d0 = MonotoneMap.unchecked(ly, lx, {u: restrict_along(f, u) for u in y_ups})
    d1 = MonotoneMap.unchecked(ly, lx, {u: restrict_along(g, u) for u in y_ups})
    q, qc = coinserter(d0, d1)
    induced: dict = {}
    for u in x_ups:
        induced.setdefault(qc(u), set()).add(restrict_along(e, u))
    if any(len(v) != 1 for v in induced.values()):
        return False
    h = {k: next(iter(v)) for k, v in induced.items()}
    return len(set(h.values())) == len(lins) and all(
        q.le(a, b) == lins.le(h[a], h[b]) for a in q for b in q)


# ------------------------------------------------- isomorphisms and generation


def find_isomorphism(p: Poset, q: Poset) -> dict | None:
    """An order isomorphism ``p → q`` or ``None`` (backtracking on up/down degrees)."""
    if len(p) != len(q) or len(p.leq) != len(q.leq):
        return None

    def sig(x: Poset, a):
        return (len(x.up[a]), len(x.down[a]))

    if sorted(sig(p, a) for a in p) != sorted(sig(q, b) for b in q):
        return None
    src = sorted(p.elements, key=lambda a: (-len(p.up[a]) - len(p.down[a]), sort_key(a)))
    assign: dict = {}
    used: set = set()

    def go(k: int) -> bool:
        if k == len(src):
            return True
        a = src[k]
        for b in q.elements:
            if b in used or sig(p, a) != sig(q, b):
                continue
            if all(p.le(a, c) == q.le(b, assign[c]) and p.le(c, a) == q.le(assign[c], b)
                   for c in assign):
                assign[a] = b
                used.add(b)
                if go(k + 1):
                    return True
                del assign[a]
                used.discard(b)
        return False

    return dict(assign) if go(0) else None


def _canonical_form(n: int, rel: frozenset) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        form = tuple(sorted((perm[a], perm[b]) for a, b in rel))
        if best is None or form < best:
            best = form
    return best


def posets_of_size(n: int) -> list[Poset]:
    """One representative per isomorphism class, labelled ``"0".."n-1"``."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen: set = set()
    out = []
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
            continue
        form = _canonical_form(n, frozenset(rel))
        if form in seen:
            continue
        seen.add(form)
        labels = [str(i) for i in range(n)]
        out.append(Poset.from_relation(labels, [(labels[a], labels[b]) for a, b in form]))
    return out


def posets_up_to(n: int) -> list[Poset]:
    return [p for k in range(n + 1) for p in posets_of_size(k)]


# ------------------------------------- adjunction, exactness and split batteries


def exists_along_laws(bound: int = 3) -> Report:
    """``∃_e ⊣ [e,2]``: unit, counit and the hom-set bijection, for all ``e`` between posets ≤ bound."""
    name = "exists_along adjunction"
    maps = 0
    shapes = posets_up_to(bound)
    for x in shapes:
        ux = x.upsets()
        for y in shapes:
            uy = y.upsets()
            for e in monotone_maps(x, y):
                for u in ux:
                    ex = exists_along(e, u)
                    if not u <= restrict_along(e, ex):
                        return Report(name, False, {"law": "unit", "e": show(e.mapping), "u": show(u)})
                    for v in uy:
                        if (ex <= v) != (u <= restrict_along(e, v)):
                            return Report(name, False, {"law": "adjunction", "e": show(e.mapping),
                                                        "u": show(u), "v": show(v)})
                for v in uy:
                    if not exists_along(e, restrict_along(e, v)) <= v:
                        return Report(name, False, {"law": "counit", "e": show(e.mapping), "v": show(v)})
                maps += 1
    return Report(name, True, details={"maps": maps})


def lax_squares(bound: int, apex_bound: int | None = None) -> Iterator[Square]:
    """Every lax square with cospan corners of size ≤ bound and apex of size ≤ apex_bound."""
    apex_bound = bound if apex_bound is None else apex_bound
    shapes = posets_up_to(bound)
    apexes = posets_up_to(apex_bound)
    maps = {(a, b): list(monotone_maps(a, b)) for a in set(shapes) | set(apexes) for b in shapes}
    for z in shapes:
        for x in shapes:
            for y in shapes:
                for f in maps[x, z]:
                    for g in maps[y, z]:
                        for e in apexes:
                            for a in maps[e, x]:
                                fa = {w: f(a(w)) for w in e}
                                for b in maps[e, y]:
                                    if all(z.le(fa[w], g(b(w))) for w in e):
                                        yield Square(a, b, f, g)


def squares_by_leg_image(bound: int, apex_bound: int | None = None) -> Iterator[Square]:
    """One lax square per cospan and per set of leg pairs of size ≤ apex_bound.

    Exactness and the Beck-Chevalley condition only see the image of
    ``⟨alpha, beta⟩`` in the comma poset, and every subset of it is the image of
    a discrete apex, so these squares cover every verdict of ``lax_squares``.
    """
    apex_bound = bound if apex_bound is None else apex_bound
    shapes = posets_up_to(bound)
    maps = {(a, b): list(monotone_maps(a, b)) for a in shapes for b in shapes}
    for z in shapes:
        for x in shapes:
            for y in shapes:
                for f in maps[x, z]:
                    for g in maps[y, z]:
                        comma = [(a, b) for a in x for b in y if z.le(f(a), g(b))]
                        for k in range(min(apex_bound, len(comma)) + 1):
                            for legs in itertools.combinations(comma, k):
                                e = discrete(tuple(str(i) for i in range(k)))
                                yield Square(
                                    MonotoneMap.unchecked(e, x, {str(i): p[0] for i, p in enumerate(legs)}),
                                    MonotoneMap.unchecked(e, y, {str(i): p[1] for i, p in enumerate(legs)}),
                                    f, g)


def beck_chevalley_battery(bound: int = 3, apex_bound: int | None = None, exhaustive: bool = False) -> Report:
    """Beck-Chevalley holds exactly on the exact squares.

    ``exhaustive`` walks every lax square instead of one per leg image.
    """
    name = "Beck-Chevalley iff exact"
    exact = inexact = 0
    squares = lax_squares if exhaustive else squares_by_leg_image
    for sq in squares(bound, apex_bound):
        ex = bool(is_exact_square(sq))
        if beck_chevalley_check(sq) != ex:
            return Report(name, False, {"alpha": show(sq.alpha.mapping), "beta": show(sq.beta.mapping),
                                        "f": show(sq.f.mapping), "g": show(sq.g.mapping),
                                        "exact": ex})
        exact += ex
        inexact += not ex
    return Report(name, True, details={"exact squares": exact, "non-exact squares": inexact,
                                       "enumeration": "all lax squares" if exhaustive else "by leg image"})


def sections(i: MonotoneMap) -> Iterator[MonotoneMap]:
    """Monotone ``s`` with ``i∘s = id``."""
    x = i.cod
    fibres = [[b for b in i.dom if i(b) == a] for a in x]
    for choice in itertools.product(*fibres):
        m = dict(zip(x.elements, choice))
        if all(i.dom.le(m[a], m[b]) for a, b in x.leq):
            yield MonotoneMap.unchecked(x, i.dom, m)


def coreflexive_pairs(bound: int) -> Iterator[tuple[MonotoneMap, MonotoneMap, MonotoneMap]]:
    """``f, g: X → Y`` with a common monotone retraction ``i``, posets up to iso of size ≤ bound.

    Each unordered pair of sections is taken once per retraction.
    """
    shapes = posets_up_to(bound)
    for y in shapes:
        for x in shapes:
            if len(x) > len(y):
                continue
            for i in monotone_maps(y, x):
                secs = list(sections(i))
                for k, f in enumerate(secs):
                    for g in secs[k:]:
                        yield f, g, i


def split_coinserter_battery(bound: int = 5) -> Report:
    """Run ``split_coinserter_check`` on every coreflexive pair; count failures per law."""
    name = "split coinserter laws"
    n = 0
    counts = {k: 0 for k in (*SPLIT_LAWS, COINSERTER_LAW)}
    witness = None
    for f, g, i in coreflexive_pairs(bound):
        r = split_coinserter_check(f, g, i)
        n += 1
        if r:
            continue
        for k in r.details["failed"].split(", "):
            counts[k] += 1
        if witness is None:
            witness = {**r.witness, "X": show(f.dom.hasse()), "Y": show(f.cod.hasse()),
                       "f": show(f.mapping), "g": show(g.mapping), "i": show(i.mapping)}
    details = {"coreflexive pairs": n, **{f"failures of {k}": v for k, v in counts.items()}}
    return Report(name, witness is None, witness, details)
