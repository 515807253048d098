import pytest
from hypothesis import given, settings

from poslog.duality import free_BA, free_DL, lattices_up_to, to_table, upset_DL
from poslog.errors import InputError
from poslog.finposet import Poset
from poslog.io import dump_lattice, dump_poset, load_poset, parse_lattice, parse_poset
from strategies import posets


def test_parse_poset():
    p = parse_poset("elements: a b c   # three\nle: a b\nle: b c\n")
    assert p == Poset.from_relation("abc", [("a", "b"), ("b", "c")])


@given(posets(5))
def test_poset_round_trip(x):
    assert parse_poset(dump_poset(x)) == x


@pytest.mark.parametrize("text", ["le: a b", "elements: a\nle: a", "elements: a\nle: a b",
                                  "elements: a b\nle: a b\nle: b a", "elements: a\nfoo: a",
                                  "elements a"])
def test_poset_errors(text):
    with pytest.raises(InputError):
        parse_poset(text)


def test_missing_file():
    with pytest.raises(InputError, match="cannot read"):
        load_poset("/nonexistent/file.poset")


def test_parse_three_chain_lattice():
    a = parse_lattice("elements: 0 a 1\nmeet: 0 a 0\nmeet: a 1 a\nmeet: 0 1 0\n"
                      "join: 0 a a\njoin: a 1 1\njoin: 0 1 1\nbot: 0\ntop: 1\n")
    assert len(a) == 3 and not a.boolean
    assert a.meet("1", "a") == "a"


@settings(max_examples=20, deadline=None)
@given(posets(4))
def test_lattice_round_trip(x):
    a = upset_DL(x)
    b = parse_lattice(dump_lattice(a))
    assert len(b) == len(a)
    assert dump_lattice(b) == dump_lattice(to_table(b))


@pytest.mark.parametrize("a", [free_BA(1), free_BA(2), free_DL(2)] + lattices_up_to(5), ids=str)
def test_lattice_round_trip_named(a):
    b = parse_lattice(dump_lattice(a))
    assert b.boolean == a.boolean and len(b) == len(a)
    assert len(b.join_irreducibles()) == len(a.join_irreducibles())


@pytest.mark.parametrize("text", [
    "elements: 0 1\nbot: 0",
    "elements: 0 1\nmeet: 0 1\nbot: 0\ntop: 1",
    "elements: 0 1\nmeet: 0 2 0\nbot: 0\ntop: 1",
    "elements: 0 1\nbot: 0 1\ntop: 1",
    "elements: 0 a b 1\nmeet: a b a\nbot: 0\ntop: 1",
])
def test_lattice_errors(text):
    with pytest.raises(InputError):
        parse_lattice(text)
