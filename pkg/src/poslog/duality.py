"""Finite Boolean algebras and distributive lattices, and the dualities between them.

Two concrete representations are used.  ``TableDL``/``TableBA`` hold explicit
operation tables and are validated law by law; they are what lattice files load
into.  ``SetLattice``/``SetBA`` are families of subsets of a point set, encoded as
integer bitmasks and closed under union and intersection.  Powersets and upset
lattices are of the second kind, which keeps lattices with tens of thousands of
elements cheap.
"""
from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping

from .errors import InputError, ResourceError
from .finposet import (
    FiniteSet, FnMap, MonotoneMap, Poset, connected_components, discrete, functions,
    monotone_maps, posets_up_to, show, sort_key, sorted_elems,
)
from .report import Report

FREE_BA_CAP = 3
FREE_DL_CAP = 4
GENERATOR_NAMES = ("x", "y", "z", "w")


class FinDL:
    """A finite bounded distributive lattice."""

    elements: tuple
    bot: object
    top: object
    boolean = False

    def meet(self, a, b):
        raise NotImplementedError

    def join(self, a, b):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        return self.meet(a, b) == a

    def show(self, a) -> str:
        return show(a)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def meet_all(self, xs: Iterable):
        acc = self.top
        for x in xs:
            acc = self.meet(acc, x)
        return acc

    def join_all(self, xs: Iterable):
        acc = self.bot
        for x in xs:
            acc = self.join(acc, x)
        return acc

    def join_irreducibles(self) -> list:
        out = []
        for j in self.elements:
            below = [a for a in self.elements if a != j and self.leq(a, j)]
            if self.join_all(below) != j:
                out.append(j)
        return out

    def complement(self, a):
        for b in self.elements:
            if self.meet(a, b) == self.bot and self.join(a, b) == self.top:
                return b
        return None

    def order(self) -> Poset:
        return Poset._trusted(self.elements, frozenset(
            (a, b) for a in self.elements for b in self.elements if self.leq(a, b)))

    def violated_law(self) -> str | None:
        """First failing bounded-distributive-lattice law, or ``None``."""
        els = self.elements
        m, j = self.meet, self.join
        if self.bot not in els or self.top not in els:
            return "bounds must be elements"
        for a in els:
            if m(a, self.bot) != self.bot or j(a, self.bot) != a:
                return f"bottom law at {self.show(a)}"
            if j(a, self.top) != self.top or m(a, self.top) != a:
                return f"top law at {self.show(a)}"
        for a, b in itertools.product(els, els):
            if m(a, b) != m(b, a):
                return f"meet commutativity at {self.show(a)}, {self.show(b)}"
            if j(a, b) != j(b, a):
                return f"join commutativity at {self.show(a)}, {self.show(b)}"
            if m(a, j(a, b)) != a or j(a, m(a, b)) != a:
                return f"absorption at {self.show(a)}, {self.show(b)}"
        for a, b, c in itertools.product(els, els, els):
            if m(a, m(b, c)) != m(m(a, b), c):
                return f"meet associativity at {self.show(a)}, {self.show(b)}, {self.show(c)}"
            if j(a, j(b, c)) != j(j(a, b), c):
                return f"join associativity at {self.show(a)}, {self.show(b)}, {self.show(c)}"
            if m(a, j(b, c)) != j(m(a, b), m(a, c)):
                return f"distributivity at {self.show(a)}, {self.show(b)}, {self.show(c)}"
        if self.boolean:
            for a in els:
                n = self.neg(a)
                if n not in els or m(a, n) != self.bot or j(a, n) != self.top:
                    return f"complement law at {self.show(a)}"
        return None


class FinBA(FinDL):
    boolean = True

    def neg(self, a):
        raise NotImplementedError


class TableDL(FinDL):
    def __init__(self, elements: Iterable, meet: Mapping, join: Mapping, bot, top, check: bool = True):
        self.elements = sorted_elems(elements)
        if len(set(self.elements)) != len(self.elements):
            raise InputError("duplicate lattice elements")
        self.meet_table = _complete_table(self.elements, meet, "meet")
        self.join_table = _complete_table(self.elements, join, "join")
        self.bot, self.top = bot, top
        if check:
            law = self.violated_law()
            if law:
                raise InputError(f"not a distributive lattice: {law}")

    def meet(self, a, b):
        return self.meet_table[a, b]

    def join(self, a, b):
        return self.join_table[a, b]

    def _key(self):
        return (type(self), self.elements, tuple(sorted(self.meet_table.items(), key=sort_key)),
                tuple(sorted(self.join_table.items(), key=sort_key)), self.bot, self.top)

    def __eq__(self, other):
        return isinstance(other, TableDL) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


class TableBA(TableDL, FinBA):
    def __init__(self, elements, meet, join, bot, top, neg: Mapping, check: bool = True):
        self.neg_table = dict(neg)
        super().__init__(elements, meet, join, bot, top, check=False)
        if set(self.neg_table) != set(self.elements):
            raise InputError("negation table must cover every element")
        if check:
            law = self.violated_law()
            if law:
                raise InputError(f"not a Boolean algebra: {law}")

    def neg(self, a):
        return self.neg_table[a]

    def _key(self):
        return super()._key() + (tuple(sorted(self.neg_table.items(), key=sort_key)),)


def _complete_table(elements: tuple, table: Mapping, what: str) -> dict:
    out = dict(table)
    for (a, b), c in list(out.items()):
        out.setdefault((b, a), c)
    for a in elements:
        out.setdefault((a, a), a)
    for a, b in itertools.product(elements, elements):
        if (a, b) not in out:
            raise InputError(f"{what} table has no entry for {show(a)}, {show(b)}")
        if out[a, b] not in elements:
            raise InputError(f"{what} of {show(a)}, {show(b)} is not an element")
    return out


class SetLattice(FinDL):
    """A ∪/∩-closed family of subsets of ``points``, as bitmasks."""

    def __init__(self, points: Iterable, masks: Iterable[int], check: bool = False,
                 namer: Callable[[int], str] | None = None):
        self.points = tuple(points)
        self.elements = tuple(sorted(set(masks)))
        if not self.elements:
            raise InputError("a lattice needs at least one element")
        self.bot = self.elements[0]
        acc_top = 0
        acc_bot = self.elements[-1]
        for m in self.elements:
            acc_top |= m
            acc_bot &= m
        self.top, self.bot = acc_top, acc_bot
        self._members = frozenset(self.elements)
        self._namer = namer
        if check:
            if self.top not in self._members or self.bot not in self._members:
                raise InputError("family lacks its union or intersection")
            for a, b in itertools.combinations(self.elements, 2):
                if a & b not in self._members or a | b not in self._members:
                    raise InputError("family is not closed under union and intersection")

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def leq(self, a, b):
        return a & b == a

    def __contains__(self, a) -> bool:
        return a in self._members

    def decode(self, m: int) -> frozenset:
        return frozenset(p for i, p in enumerate(self.points) if m >> i & 1)

    def encode(self, s: Iterable) -> int:
        idx = {p: i for i, p in enumerate(self.points)}
        out = 0
        for p in s:
            out |= 1 << idx[p]
        return out

    def show(self, a) -> str:
        if self._namer:
            return self._namer(a)
        return "{" + ",".join(show(p) for p in sorted_elems(self.decode(a))) + "}"

    def join_irreducibles(self) -> list:
        # the least member containing each point; irreducible unless a union of smaller ones
        cands = set()
        for i in range(len(self.points)):
            bit = 1 << i
            if not self.top & bit:
                continue
            acc = self.top
            for m in self.elements:
                if m & bit:
                    acc &= m
            cands.add(acc)
        out = []
        for j in cands:
            below = 0
            for k in cands:
                if k != j and k & j == k:
                    below |= k
            if below != j:
                out.append(j)
        return sorted(out)

    def complement(self, a):
        b = (self.top & ~a) | self.bot
        if b in self._members and a & b == self.bot and a | b == self.top:
            return b
        return None

    def _key(self):
        return (self.points, self.elements)

    def __eq__(self, other):
        return (isinstance(other, SetLattice) and self.boolean == other.boolean
                and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())


class SetBA(SetLattice, FinBA):
    def __init__(self, points, masks, check: bool = False, namer=None):
        super().__init__(points, masks, check=check, namer=namer)
        if check:
            for a in self.elements:
                if self.neg(a) not in self._members:
                    raise InputError("family is not closed under complement")

    def neg(self, a):
        return (self.top & ~a) | self.bot


class UpsetLattice(SetLattice):
    """Upsets of a finite poset ordered by inclusion."""

    def __init__(self, poset: Poset):
        self.poset = poset
        super().__init__(poset.elements, poset.upset_masks())

    def join_irreducibles(self) -> list:
        return sorted(self.poset.encode(self.poset.up[x]) for x in self.poset)


class PowersetBA(SetBA):
    def __init__(self, points: Iterable, namer=None):
        pts = tuple(points)
        super().__init__(pts, range(1 << len(pts)), namer=namer)

    def join_irreducibles(self) -> list:
        return [1 << i for i in range(len(self.points))]


# ---------------------------------------------------------------------- homs


class LatticeHom:
    def __init__(self, dom: FinDL, cod: FinDL, mapping: Mapping, check: bool = True):
        self.dom, self.cod = dom, cod
        self.mapping = dict(mapping)
        if check:
            problem = hom_violation(self)
            if problem:
                raise InputError(f"not a lattice homomorphism: {problem}")

    def __call__(self, a):
        return self.mapping[a]

    def is_injective(self) -> bool:
        return len(set(self.mapping.values())) == len(self.mapping)

    def is_surjective(self) -> bool:
        return set(self.mapping.values()) == set(self.cod.elements)

    def then(self, g: LatticeHom) -> LatticeHom:
        return LatticeHom(self.dom, g.cod, {a: g(self(a)) for a in self.dom}, check=False)

    def __eq__(self, other):
        return (isinstance(other, LatticeHom) and self.dom == other.dom and self.cod == other.cod
                and self.mapping == other.mapping)

    def __hash__(self):
        return hash((len(self.mapping), self.dom))


EXHAUSTIVE_PAIR_CAP = 1 << 18


def hom_violation(h: LatticeHom) -> str | None:
    dom, cod = h.dom, h.cod
    if set(h.mapping) != set(dom.elements):
        return "not total"
    if any(b not in set(cod.elements) for b in h.mapping.values()):
        return "image outside codomain"
    if h(dom.bot) != cod.bot:
        return "bottom not preserved"
    if h(dom.top) != cod.top:
        return "top not preserved"
    if len(dom) ** 2 > EXHAUSTIVE_PAIR_CAP:
        raise ResourceError(f"exhaustive hom check on {len(dom)} elements exceeds the cap")
    for a, b in itertools.product(dom.elements, dom.elements):
        if h(dom.meet(a, b)) != cod.meet(h(a), h(b)):
            return f"meet of {dom.show(a)}, {dom.show(b)}"
        if h(dom.join(a, b)) != cod.join(h(a), h(b)):
            return f"join of {dom.show(a)}, {dom.show(b)}"
    if dom.boolean and cod.boolean:
        for a in dom.elements:
            if h(dom.neg(a)) != cod.neg(h(a)):
                return f"negation of {dom.show(a)}"
    return None


def verify_iso(h: LatticeHom) -> Report:
    """Bijectivity plus hom laws; large lattices are checked through their covers.

    A bijection between finite lattices is a lattice isomorphism exactly when it
    and its inverse are monotone, and monotonicity of a map between finite
    posets only needs checking on covering pairs.  For set lattices the covers
    of ``a`` are the members ``a | bit``.
    """
    name = "lattice isomorphism"
    if not h.is_injective():
        return Report(name, False, {"reason": "not injective"})
    if not h.is_surjective():
        return Report(name, False, {"reason": "not surjective",
                                    "image size": len(set(h.mapping.values())),
                                    "codomain size": len(h.cod)})
    if len(h.dom) ** 2 <= EXHAUSTIVE_PAIR_CAP:
        problem = hom_violation(h)
        if problem:
            return Report(name, False, {"reason": problem})
        return Report(name, True, details={"size": len(h.dom), "method": "exhaustive"})
    if not (isinstance(h.dom, SetLattice) and isinstance(h.cod, SetLattice)):
        raise ResourceError("cover-based isomorphism check needs set lattices")
    inv = {b: a for a, b in h.mapping.items()}
    for src, f, fam in ((h.dom, h.mapping, h.cod), (h.cod, inv, h.dom)):
        for a in src.elements:
            for i in range(len(src.points)):
                b = a | 1 << i
                if b != a and b in src and not fam.leq(f[a], f[b]):
                    return Report(name, False, {"reason": f"order not preserved at {src.show(a)}"})
    return Report(name, True, details={"size": len(h.dom), "method": "covers"})


# ------------------------------------------------------- the concrete functors


def powerset_BA(x: FiniteSet | Iterable) -> PowersetBA:
    return PowersetBA(x.elements if isinstance(x, FiniteSet) else sorted_elems(x))


def upset_DL(x: Poset) -> UpsetLattice:
    return UpsetLattice(x)


def _preimage_masks(dom_points: tuple, cod_points: tuple, f: Mapping) -> list[int]:
    idx = {p: i for i, p in enumerate(dom_points)}
    fib = [0] * len(cod_points)
    pos = {p: j for j, p in enumerate(cod_points)}
    for x in dom_points:
        fib[pos[f[x]]] |= 1 << idx[x]
    return fib


def preimage_map(f: FnMap | MonotoneMap, dom_lattice: SetLattice, cod_lattice: SetLattice) -> LatticeHom:
    """``m ↦ f⁻¹(m)`` from subsets of ``f.cod`` (``dom_lattice``) to subsets of ``f.dom``."""
    fib = _preimage_masks(cod_lattice.points, dom_lattice.points, f.mapping)
    out = {}
    for m in dom_lattice.elements:
        r = 0
        i = 0
        mm = m
        while mm:
            if mm & 1:
                r |= fib[i]
            mm >>= 1
            i += 1
        out[m] = r
    return LatticeHom(dom_lattice, cod_lattice, out, check=False)


def powerset_map(f: FnMap) -> LatticeHom:
    """``P f : P Y → P X``."""
    return preimage_map(f, powerset_BA(f.cod), powerset_BA(f.dom))


def upset_map(f: MonotoneMap) -> LatticeHom:
    """``P' f : P'Y → P'X``."""
    return preimage_map(f, upset_DL(f.cod), upset_DL(f.dom))


def ultrafilters(a: FinBA) -> FiniteSet:
    """Ultrafilters of a finite Boolean algebra, each named by its atom."""
    if len(a) == 1:
        return FiniteSet(())
    return FiniteSet(tuple(a.join_irreducibles()))


def prime_filters(a: FinDL) -> Poset:
    """Prime filters ``↑j`` named by their generators ``j``, ordered by inclusion.

    ``↑j ⊆ ↑k`` iff ``k ≤ j``, so the generators appear in reverse lattice order.
    """
    if len(a) == 1:
        return Poset._trusted((), frozenset())
    js = sorted_elems(a.join_irreducibles())
    return Poset._trusted(js, frozenset((j, k) for j in js for k in js if a.leq(k, j)))


def filter_generator(h: LatticeHom, j) -> object:
    """Generator of the prime filter ``h⁻¹(↑j)``."""
    return h.dom.meet_all(a for a in h.dom.elements if h.cod.leq(j, h(a)))


def prime_filter_map(h: LatticeHom) -> MonotoneMap:
    """``S' h : S' cod → S' dom`` by preimage of filters."""
    src, dst = prime_filters(h.cod), prime_filters(h.dom)
    return MonotoneMap(src, dst, {j: filter_generator(h, j) for j in src})


def ultrafilter_map(h: LatticeHom) -> FnMap:
    src, dst = ultrafilters(h.cod), ultrafilters(h.dom)
    return FnMap(src, dst, {j: filter_generator(h, j) for j in src})


def forget_W(a: FinBA) -> FinDL:
    if isinstance(a, SetBA):
        return SetLattice(a.points, a.elements, namer=a._namer)
    if isinstance(a, TableBA):
        return TableDL(a.elements, a.meet_table, a.join_table, a.bot, a.top, check=False)
    raise InputError("unsupported Boolean algebra representation")


def forget_W_map(h: LatticeHom) -> LatticeHom:
    return LatticeHom(forget_W(h.dom), forget_W(h.cod), h.mapping, check=False)


def centre_K(a: FinDL) -> FinBA:
    comp = {x: a.complement(x) for x in a.elements}
    keep = [x for x, c in comp.items() if c is not None]
    if isinstance(a, SetLattice):
        return SetBA(a.points, keep, namer=a._namer)
    return TableBA(keep, {(x, y): a.meet(x, y) for x in keep for y in keep},
                   {(x, y): a.join(x, y) for x in keep for y in keep},
                   a.bot, a.top, {x: comp[x] for x in keep})


def to_table(a: FinDL) -> TableDL:
    """Forget the representation: relabel elements by their printed form."""
    lab = {x: a.show(x) for x in a.elements}
    meet = {(lab[x], lab[y]): lab[a.meet(x, y)] for x in a.elements for y in a.elements}
    join = {(lab[x], lab[y]): lab[a.join(x, y)] for x in a.elements for y in a.elements}
    if a.boolean:
        return TableBA(lab.values(), meet, join, lab[a.bot], lab[a.top],
                       {lab[x]: lab[a.neg(x)] for x in a.elements})
    return TableDL(lab.values(), meet, join, lab[a.bot], lab[a.top])


# -------------------------------------------------------------- free algebras


def valuations(n: int) -> tuple:
    return tuple("".join(bits) for bits in itertools.product("01", repeat=n)) if n else ("e",)


def generator_masks(n: int) -> dict:
    vals = valuations(n)
    return {GENERATOR_NAMES[i]: sum(1 << k for k, v in enumerate(vals) if v[i] == "1")
            for i in range(n)}


class FreeBA(PowersetBA):
    def __init__(self, n: int):
        if n > FREE_BA_CAP:
            raise ResourceError(f"free Boolean algebras are capped at {FREE_BA_CAP} generators")
        self.n = n
        self.generators = generator_masks(n)
        super().__init__(valuations(n))


class FreeDL(SetLattice):
    """Closure of the generators under meet and join, with fresh bounds."""

    def __init__(self, n: int):
        if n > FREE_DL_CAP:
            raise ResourceError(f"free distributive lattices are capped at {FREE_DL_CAP} generators")
        self.n = n
        vals = valuations(n)
        self.generators = generator_masks(n)
        full = (1 << len(vals)) - 1
        fam = {0, full, *self.generators.values()}
        frontier = set(fam)
        while frontier:
            new = set()
            for a in frontier:
                for b in fam:
                    for c in (a & b, a | b):
                        if c not in fam:
                            new.add(c)
            fam |= new
            frontier = new
        super().__init__(vals, fam, namer=self.normal_form)

    def normal_form(self, m: int) -> str:
        """Join of meets of generators, one meet per minimal satisfying valuation."""
        if m == 0:
            return "F"
        vals = self.points
        true = [v for k, v in enumerate(vals) if m >> k & 1]
        minimal = [v for v in true
                   if not any(w != v and all(b <= a for a, b in zip(v, w)) for w in true)]
        terms = []
        for v in minimal:
            gens = [GENERATOR_NAMES[i] for i, b in enumerate(v) if b == "1"]
            terms.append("&".join(gens) if gens else "T")
        return " | ".join(sorted(terms, key=lambda t: (len(t), t)))


def free_BA(n: int) -> FreeBA:
    return FreeBA(n)


def free_DL(n: int) -> FreeDL:
    return FreeDL(n)


def two_BA() -> PowersetBA:
    return powerset_BA(["*"])


# ----------------------------------------------------------------- dualities


def birkhoff_counit(a: FinDL) -> LatticeHom:
    """``A → P'(S'A)``, ``a ↦ {j | j ≤ a}`` (the prime filters containing a)."""
    sp = prime_filters(a)
    target = upset_DL(sp)
    return LatticeHom(a, target, {x: sp.encode(j for j in sp if a.leq(j, x)) for x in a.elements},
                      check=False)


def stone_counit(b: FinBA) -> LatticeHom:
    s = ultrafilters(b)
    target = powerset_BA(s)
    return LatticeHom(b, target, {x: target.encode(j for j in s if b.leq(j, x)) for x in b.elements},
                      check=False)


def lattices_up_to(size: int) -> list[FinDL]:
    """Every distributive lattice with at most ``size`` elements, up to iso, as tables."""
    out = []
    for p in posets_up_to(size - 1):
        if len(p.upset_masks()) <= size:
            out.append(to_table(upset_DL(p)))
    return out


def verify_dualities(bound: int = 3, dl_size: int = 6) -> Report:
    """Finite Birkhoff and Stone round trips plus the squares linking them.

    Distributive lattices of size ≤ ``dl_size``; Boolean algebras on sets of
    size 1..``bound``; posets and maps of size ≤ ``bound``.
    """
    name = "finite dualities"
    counts = {}

    def fail(step: str, **witness) -> Report:
        return Report(name, False, {"step": step, **{k: str(v) for k, v in witness.items()}}, counts)

    dls = lattices_up_to(dl_size)
    for a in dls:
        if not verify_iso(birkhoff_counit(a)):
            return fail("A = P'S'A", lattice=", ".join(a.elements))
    counts["distributive lattices"] = len(dls)

    bas = [to_table(powerset_BA(FiniteSet(tuple(str(i) for i in range(k))))) for k in range(1, bound + 1)]
    for b in bas:
        if not verify_iso(stone_counit(b)):
            return fail("B = PSB", size=len(b))
    counts["Boolean algebra sizes"] = ",".join(str(len(b)) for b in bas)

    sets = [FiniteSet(tuple(str(i) for i in range(k))) for k in range(bound + 1)]
    for x in sets:
        if forget_W(powerset_BA(x)) != upset_DL(discrete(x)):
            return fail("WP = P'D on objects", size=len(x))
        if prime_filters(forget_W(powerset_BA(x))) != discrete(ultrafilters(powerset_BA(x))):
            return fail("S'W = DS on objects", size=len(x))
    maps = 0
    for x in sets:
        for y in sets:
            for f in functions(x, y):
                pf = powerset_map(f)
                df = MonotoneMap(discrete(x), discrete(y), f.mapping)
                if forget_W_map(pf).mapping != upset_map(df).mapping:
                    return fail("WP = P'D on maps", f=f.mapping)
                if prime_filter_map(forget_W_map(pf)).mapping != ultrafilter_map(pf).mapping:
                    return fail("S'W = DS on maps", f=f.mapping)
                maps += 1
    counts["set maps"] = maps

    posets = posets_up_to(bound)
    for x in posets:
        comps, proj = connected_components(x)
        pc, kp = powerset_BA(comps), centre_K(upset_DL(x))
        iso = LatticeHom(pc, kp, {m: x.encode(a for a in x if proj(a) in pc.decode(m))
                                  for m in pc.elements}, check=False)
        if not verify_iso(iso):
            return fail("PC = KP'", poset=x.elements)
    pmaps = 0
    for x in posets:
        for y in posets:
            for f in monotone_maps(x, y):
                cx, px = connected_components(x)
                cy, py = connected_components(y)
                cf = FnMap(cx, cy, {px(a): py(f(a)) for a in x})
                kpf = upset_map(f)
                lhs = powerset_map(cf)
                # transport P(Cf) along the unions-of-components isos and compare with K(P'f)
                for m in lhs.dom.elements:
                    ups = y.encode(b for b in y if py(b) in lhs.dom.decode(m))
                    img = x.encode(a for a in x if px(a) in lhs.cod.decode(lhs(m)))
                    if kpf(ups) != img:
                        return fail("PC = KP' on maps", f=f.mapping)
                pmaps += 1
    counts["posets"] = len(posets)
    counts["monotone maps"] = pmaps
    return Report(name, True, details=counts)
