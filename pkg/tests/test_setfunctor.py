import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poslog.errors import InputError, ResourceError
from poslog.finposet import FiniteSet, FnMap, functions
from poslog.setfunctor import (
    Comp, Const, Dist, Id, MSet, Nbhd, Pow, Relation, apply_map, apply_obj, check_functor_laws,
    parse_functor, parse_value, preserves_weak_pullbacks, rel_lift, rel_lift_span, weak_pullback,
)

AB = FiniteSet(("a", "b"))
BATTERY = [Id(), Pow(), Dist(2), MSet(2), Nbhd(), Const(("c",)), Comp(Pow(), Pow())]


def small_sets():
    return [FiniteSet(tuple(str(i) for i in range(n))) for n in range(3)]


def test_sizes():
    assert len(apply_obj(Pow(), AB)) == 4
    assert len(apply_obj(Comp(Pow(), Pow()), FiniteSet(("a",)))) == 4
    assert len(apply_obj(Nbhd(), AB)) == 16


def test_dist_two_on_two_points():
    vals = apply_obj(Dist(2), AB).elements
    assert len(vals) == 3
    weights = sorted(
        tuple(Fraction(dict(v).get(x, 0), 2) for x in "ab") for v in vals)
    assert weights == [(0, 1), (Fraction(1, 2), Fraction(1, 2)), (1, 0)]


def test_dist_map_sums_masses():
    f = FnMap(AB, FiniteSet(("c",)), {"a": "c", "b": "c"})
    tf = apply_map(Dist(2), f)
    assert {tf(v) for v in tf.dom} == {(("c", 2),)}


def test_multiset_map_sums_multiplicities():
    f = FnMap(AB, FiniteSet(("c",)), {"a": "c", "b": "c"})
    assert apply_map(MSet(2), f)(("a", "b")) == ("c", "c")


def test_pow_direct_image_of_surjection_is_surjective():
    f = FnMap(FiniteSet(("0", "1", "2")), AB, {"0": "a", "1": "b", "2": "b"})
    assert apply_map(Pow(), f).is_surjective()


@pytest.mark.parametrize("t", BATTERY, ids=str)
def test_functor_laws(t):
    samples = []
    for x, y, z in itertools.product(small_sets()[1:], repeat=3):
        if len(x) + len(y) + len(z) > 5:
            continue
        for f in functions(x, y):
            for g in functions(y, z):
                samples.append((f, g))
    assert check_functor_laws(t, samples)


def test_functor_laws_for_product_with_constant():
    t = parse_functor("Pow*Const({c})")
    samples = [(f, g) for f in functions(AB, AB) for g in functions(AB, AB)]
    assert check_functor_laws(t, samples)


def test_egli_milner_lifting_of_two_chain():
    two = FiniteSet(("0", "1"))
    le = Relation(two, two, frozenset({("0", "0"), ("0", "1"), ("1", "1")}))
    lifted = rel_lift(Pow(), le)
    assert (("0",), ("0", "1")) in lifted
    assert (("0", "1"), ("1",)) in lifted
    assert ((), ("1",)) not in lifted


def test_lifting_of_id_is_identity():
    r = Relation(AB, AB, frozenset({("a", "b")}))
    assert rel_lift(Id(), r).pairs == r.pairs


@settings(max_examples=40)
@given(st.sampled_from(BATTERY[:5]), st.sets(st.tuples(st.sampled_from("ab"), st.sampled_from("xy"))))
def test_closed_form_lifting_matches_span_definition(t, pairs):
    r = Relation(AB, FiniteSet(("x", "y")), frozenset(pairs))
    assert rel_lift(t, r).pairs == rel_lift_span(t, r).pairs


@given(st.sets(st.tuples(st.sampled_from("ab"), st.sampled_from("ab"))))
def test_lifting_commutes_with_composition(pairs):
    r = Relation(AB, AB, frozenset(pairs))
    inner = rel_lift(Id(), r)
    assert rel_lift(Comp(Pow(), Id()), r).pairs == rel_lift(Pow(), inner).pairs


def test_weak_pullback_examples():
    idm = FnMap.identity(AB)
    p, _, _ = weak_pullback(idm, idm)
    assert set(p) == {("a", "a"), ("b", "b")}
    to_c = FnMap(AB, FiniteSet(("c",)), {"a": "c", "b": "c"})
    p, _, _ = weak_pullback(to_c, to_c)
    assert len(p) == 4
    cd = FiniteSet(("c", "d"))
    p, _, _ = weak_pullback(FnMap(AB, cd, {"a": "c", "b": "c"}), FnMap(AB, cd, {"a": "d", "b": "d"}))
    assert len(p) == 0


@pytest.mark.parametrize("t,ok", [(Pow(), True), (Dist(2), True), (Id(), True), (MSet(2), True),
                                  (Nbhd(), False)], ids=str)
def test_weak_pullback_preservation(t, ok):
    r = preserves_weak_pullbacks(t, 2)
    assert r.ok == ok
    if not ok:
        assert {"f", "g", "u", "v"} <= set(r.witness)


@pytest.mark.parametrize("text", ["Id", "Pow", "Dist@2", "MSet@3", "Nbhd", "Pow.Pow", "Pow+Id",
                                  "Pow*Const({c})", "Id^2", "(Pow+Id).Pow"])
def test_parse_print_round_trip(text):
    t = parse_functor(text)
    assert parse_functor(str(t)) == t


@pytest.mark.parametrize("t", BATTERY + [parse_functor("Pow+Id"), parse_functor("Id^2")], ids=str)
def test_value_round_trip(t):
    for v in apply_obj(t, AB):
        assert parse_value(t, t.show_value(v)) == v


@pytest.mark.parametrize("text", ["Pow(", "Foo", "Dist@", "Const(x.poset)", "Pow Pow"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_functor(text)


def test_size_guard():
    with pytest.raises(ResourceError):
        apply_obj(Comp(Pow(), Pow()), FiniteSet(tuple("abcde")), guard=1000)
