import itertools

import pytest
from hypothesis import given, settings

from poslog.duality import (
    LatticeHom, TableDL, birkhoff_counit, centre_K, forget_W, free_BA, free_DL, lattices_up_to,
    powerset_BA, prime_filters, stone_counit, to_table, two_BA, ultrafilters, upset_DL,
    verify_dualities, verify_iso,
)
from poslog.errors import InputError, ResourceError
from poslog.finposet import Poset, discrete, find_isomorphism
from strategies import posets

TWO = Poset.chain(2)


def m3_table():
    els = ["0", "a", "b", "c", "1"]
    meet, join = {}, {}
    for x, y in itertools.combinations(["a", "b", "c"], 2):
        meet[x, y], join[x, y] = "0", "1"
    for x in els:
        meet[x, "0"], join[x, "0"] = "0", x
        meet[x, "1"], join[x, "1"] = x, "1"
        meet[x, x], join[x, x] = x, x
    return els, meet, join


def test_non_distributive_lattice_is_rejected():
    els, meet, join = m3_table()
    with pytest.raises(InputError, match="not a distributive lattice"):
        TableDL(els, meet, join, "0", "1")


def test_basic_constructions():
    assert len(powerset_BA(["a"])) == 2
    up = upset_DL(TWO)
    assert [up.show(a) for a in up.elements] == ["{}", "{1}", "{0,1}"]
    assert len(upset_DL(discrete("01"))) == 4
    assert forget_W(powerset_BA(["0", "1"])) == upset_DL(discrete("01"))


def test_free_sizes():
    assert [len(free_DL(n)) for n in range(4)] == [2, 3, 6, 20]
    assert len(free_BA(1)) == 4
    assert sorted(free_DL(2).show(a) for a in free_DL(2).elements) == sorted(
        ["F", "x&y", "x", "y", "x | y", "T"])


def test_free_dl_on_four_generators():
    assert len(free_DL(4)) == 168


def test_free_caps():
    with pytest.raises(ResourceError):
        free_BA(4)


def test_ultrafilters_and_prime_filters():
    assert len(ultrafilters(powerset_BA("abc"))) == 3
    chain3 = upset_DL(TWO)
    assert find_isomorphism(prime_filters(chain3), TWO) is not None
    diamond = Poset.from_relation("0123", [("0", "1"), ("0", "2"), ("1", "3"), ("2", "3")])
    square = TWO.product(TWO)
    assert find_isomorphism(prime_filters(free_DL(2)), square) is not None
    assert find_isomorphism(square, diamond) is not None


def test_centre():
    assert len(centre_K(upset_DL(TWO))) == 2
    assert len(centre_K(upset_DL(discrete("01")))) == 4


@settings(max_examples=30, deadline=None)
@given(posets(4))
def test_birkhoff_counit_is_iso_on_upset_lattices(x):
    a = upset_DL(x)
    assert verify_iso(birkhoff_counit(a))
    assert find_isomorphism(prime_filters(a), x) is not None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_stone_counit(n):
    assert verify_iso(stone_counit(powerset_BA([str(i) for i in range(n)])))


def test_generated_lattices():
    lats = lattices_up_to(6)
    assert len(lats) == 13
    for a in lats:
        assert a.violated_law() is None


def test_table_round_trip_keeps_structure():
    a = upset_DL(TWO)
    t = to_table(a)
    assert len(t) == 3 and verify_iso(birkhoff_counit(t))


def test_hom_validation():
    a, b = two_BA(), free_BA(1)
    with pytest.raises(InputError):
        LatticeHom(a, b, {x: b.bot for x in a.elements})


def test_verify_dualities():
    r = verify_dualities(3, 6)
    assert r, r.lines()
