import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poslog.errors import InputError, ResourceError
from poslog.predlift import (
    Lifting, bijection_check, cube_values, enumerate_liftings, is_monotone,
    is_monotone_componentwise, liftings_of_posetification, load_lifting_table, monotone_liftings,
    oracle_agreement, parse_lifting_line,
)
from poslog.setfunctor import Const, Dist, Id, MSet, Pow, parse_functor

BOX = Lifting(Pow(), 1, frozenset({(), ("1",)}))
DIAMOND = Lifting(Pow(), 1, frozenset({("1",), ("0", "1")}))


def test_counts():
    assert len(enumerate_liftings(Id(), 1)) == 4
    assert len(enumerate_liftings(Pow(), 1)) == 16
    assert len(enumerate_liftings(Const(("c",)), 0)) == 2


def test_identity_monotone_liftings():
    mono = {l.value for l in monotone_liftings(Id(), 1)}
    assert mono == {frozenset(), frozenset({"1"}), frozenset({"0", "1"})}


def test_box_and_diamond_are_monotone():
    assert is_monotone(BOX) and is_monotone(DIAMOND)
    assert is_monotone_componentwise(BOX) and is_monotone_componentwise(DIAMOND)


def test_emptiness_lifting_is_monotone():
    # its components are constant in the predicate, so the oracle accepts it
    empty = Lifting(Pow(), 1, frozenset({()}))
    assert is_monotone(empty)
    assert is_monotone_componentwise(empty)


def test_parity_lifting():
    at_zero = Lifting(Pow(), 0, frozenset({("e",)}))
    assert is_monotone(at_zero) and is_monotone_componentwise(at_zero)
    at_one = Lifting(Pow(), 1, frozenset({("0",), ("1",)}))
    assert not is_monotone(at_one) and not is_monotone_componentwise(at_one)


def test_posetification_side_counts():
    assert len(liftings_of_posetification(Id(), 1)) == 3
    assert len(liftings_of_posetification(Pow(), 1)) == 8
    assert len(liftings_of_posetification(Const(("c",)), 0)) == 2
    assert len(liftings_of_posetification(Const(("c",)), 1)) == 2


@pytest.mark.parametrize("t,n,count", [
    (Id(), 1, 3), (Pow(), 1, 8), (Pow(), 0, 4), (Const(("c",)), 0, 2),
    (Dist(2), 1, 4), (MSet(2), 1, 4), (Id(), 2, 6),
])
def test_bijection(t, n, count):
    r = bijection_check(t, n)
    assert r and r.details["monotone liftings"] == r.details["upsets of T'(2^n)"] == count


def test_pow_bijection_contains_box_and_diamond():
    pairing = bijection_check(Pow(), 1).details["pairing"]
    assert BOX.show() in pairing and DIAMOND.show() in pairing


@pytest.mark.parametrize("t,n", [(Id(), 1), (Pow(), 1), (Pow(), 0), (Dist(2), 1)], ids=str)
def test_oracle_agreement(t, n):
    assert oracle_agreement(t, n)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.sampled_from(cube_values(Id(), 2))))
def test_monotone_iff_componentwise_for_binary_identity(vals):
    l = Lifting(Id(), 2, frozenset(vals))
    assert is_monotone(l) == is_monotone_componentwise(l)


def test_caps():
    with pytest.raises(ResourceError):
        enumerate_liftings(parse_functor("Pow+Pow"), 2)
    with pytest.raises(ResourceError):
        enumerate_liftings(Id(), 3)


def test_invalid_lifting_value():
    with pytest.raises(InputError):
        Lifting(Pow(), 1, frozenset({("2",)}))


def test_table_parsing():
    name, l = parse_lifting_line("box = { {}, {1} } : Pow @ 1")
    assert name == "box" and l == BOX
    table = load_lifting_table("# comment\nbox = {{},{1}} : Pow @ 1\ndia = {{1},{0,1}} : Pow @ 1\n")
    assert table["dia"] == DIAMOND


@pytest.mark.parametrize("line", ["box {{}} : Pow @ 1", "1x = {} : Pow @ 1", "b = {} : Pow",
                                  "b = {{2}} : Pow @ 1", "b = {{} : Pow @ 1"])
def test_table_errors(line):
    with pytest.raises(InputError):
        parse_lifting_line(line)


def test_duplicate_table_names():
    with pytest.raises(InputError):
        load_lifting_table("a = {} : Id @ 1\na = {1} : Id @ 1\n")
