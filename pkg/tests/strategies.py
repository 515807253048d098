"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from poslog.finposet import MonotoneMap, Poset, monotone_maps


@st.composite
def posets(draw, max_size=4):
    n = draw(st.integers(0, max_size))
    labels = [str(i) for i in range(n)]
    # edges only go up in label order, so the closure is antisymmetric
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Poset.from_relation(labels, chosen)


@st.composite
def monotone_map_between(draw, dom: Poset, cod: Poset) -> MonotoneMap:
    maps = list(monotone_maps(dom, cod))
    return draw(st.sampled_from(maps))


@st.composite
def monotone_maps_st(draw, max_size=3):
    x = draw(posets(max_size))
    y = draw(posets(max_size).filter(lambda p: len(p) > 0 or len(x) == 0))
    return draw(monotone_map_between(x, y))
