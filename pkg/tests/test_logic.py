import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poslog.duality import forget_W, free_BA, two_BA, verify_iso
from poslog.errors import InputError, ResourceError
from poslog.finposet import FiniteSet, Poset, discrete
from poslog.formula import beta_translate, parse_formula, positive_formulas
from poslog.logic import (
    Coalgebra, OrderedCoalgebra, L_prime_preserves_monos_check, L_prime_step, L_step,
    beta_naturality, box_generated_size, build_beta, build_beta_variant, delta, delta_prime,
    discrete_models, dunn_validity, eval_bool, eval_pos, n_step_injectivity,
    nnf_preserves_semantics, parse_model, translation_adequacy, wk_counterexample,
)
from poslog.posetification import ArrowsFromTwo, DiscreteComponents, PosetifiedFunctor
from poslog.predlift import Lifting
from poslog.setfunctor import Dist, Id, MSet, Nbhd, Pow

TWO = Poset.chain(2)
TWO_STATE = """\
states: x y
xi: x -> {x, y}
xi: y -> {}
val: p = {y}
"""


def two_state():
    return Coalgebra(Pow(), FiniteSet(("x", "y")), {"x": ("x", "y"), "y": ()}, {"p": {"y"}})


# ---------------------------------------------------------------- evaluation


def test_box_examples():
    m = two_state()
    assert eval_bool(parse_formula("[]F"), m) == {"y"}
    assert eval_bool(parse_formula("[]p"), m) == {"y"}
    assert eval_bool(parse_formula("<>T"), m) == {"x"}


def test_diamond_lifting_agrees_with_dual_box():
    m = two_state()
    dia = Lifting(Pow(), 1, frozenset({("0", "1"), ("1",)}))
    got = eval_bool(parse_formula("lift d(p)"), m, {"d": dia})
    assert got == eval_bool(parse_formula("~[]~p"), m)


def test_lift_errors():
    m = two_state()
    with pytest.raises(InputError):
        eval_bool(parse_formula("lift d(p)"), m)
    box = Lifting(Pow(), 1, frozenset({(), ("1",)}))
    with pytest.raises(InputError):
        eval_bool(parse_formula("lift b(p, q)"), m, {"b": box})


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(list(positive_formulas(("p", "q"), 2))),
       st.sampled_from(list(discrete_models(2, ("p", "q")))))
def test_positive_and_translated_semantics_agree(phi, om):
    assert eval_pos(phi, om) == eval_bool(beta_translate(phi), om.discrete_coalgebra())


def test_ordered_model_semantics_are_upsets():
    x = TWO
    xi = {"0": frozenset({"0"}), "1": frozenset({"0", "1"})}
    m = OrderedCoalgebra(x, xi, {"p": {"1"}})
    for phi in positive_formulas(("p",), 2):
        assert x.is_upset(eval_pos(phi, m))


def test_ordered_coalgebra_validation():
    with pytest.raises(InputError):
        OrderedCoalgebra(TWO, {"0": {"0"}, "1": {"0"}}, {"p": {"0"}})
    with pytest.raises(InputError):
        OrderedCoalgebra(TWO, {"0": {"1"}, "1": {"0"}})
    three = Poset.chain(3)
    with pytest.raises(InputError):
        OrderedCoalgebra(three, {a: {"0", "2"} for a in three})


def test_parse_model():
    m = parse_model(TWO_STATE)
    assert isinstance(m, Coalgebra)
    assert eval_bool(parse_formula("[]p"), m) == {"y"}
    om = parse_model("states: a b\norder: a<b\nxi: a -> {a}\nxi: b -> {a,b}\nval: p = {b}\n")
    assert isinstance(om, OrderedCoalgebra)
    assert eval_pos(parse_formula("<>p"), om) == {"b"}


@pytest.mark.parametrize("text", ["xi: a -> {a}", "states: a\nxi: a -> {b}", "states: a\nval p {a}",
                                  "states: a\nfoo: 1"])
def test_parse_model_errors(text):
    with pytest.raises(InputError):
        parse_model(text)


def test_dunn_validity():
    r = dunn_validity(3)
    assert r and r.details["frames"] == 878


def test_nnf_preserves_semantics():
    fs = [parse_formula(s) for s in ["~[]p", "~(p & []q)", "~<>(p | ~q)", "[]~~p"]]
    assert nnf_preserves_semantics(fs, 2)


def test_translation_adequacy_small():
    r = translation_adequacy(max_depth=2, max_states=2)
    # one state: 2 successor sets and 4 valuations; two states: 16 and 16
    assert r and r.details["models"] == 8 + 256


# ---------------------------------------------------------- logic functors


def test_step_sizes():
    assert len(L_step(two_BA(), Pow())) == 4
    assert len(L_step(free_BA(1), Pow())) == 16
    lp = L_prime_step(forget_W(free_BA(1)), Pow())
    assert len(lp) == 16


@pytest.mark.parametrize("n", [0, 1, 2])
def test_delta_isos(n):
    x = FiniteSet(tuple(str(i) for i in range(n)))
    assert verify_iso(delta(Pow(), x))
    assert verify_iso(delta_prime(Pow(), discrete(x.elements)))


def test_box_generated():
    assert box_generated_size(FiniteSet(("a",))) == (4, 4)
    assert box_generated_size(FiniteSet(("a", "b"))) == (16, 16)


@pytest.mark.parametrize("t", [Id(), Pow(), Dist(2), MSet(2)], ids=str)
@pytest.mark.parametrize("a", [two_BA, lambda: free_BA(1)], ids=["2", "F1"])
def test_beta_iso(t, a):
    res = build_beta(a(), t)
    assert res.report.ok and res.report.details["verdict"] == "iso"


def test_beta_sizes_for_pow_on_free_one():
    r = build_beta(free_BA(1), Pow()).report
    assert r.details["|L'WA|"] == r.details["|WLA|"] == 16


def test_beta_for_neighbourhoods_notes_weak_pullbacks():
    r = build_beta(two_BA(), Nbhd()).report
    assert r.ok and r.details["weak pullbacks"].startswith("not preserved")


def test_beta_naturality():
    assert beta_naturality(free_BA(1), Pow())


def test_beta_variants():
    assert build_beta_variant(two_BA(), Pow(), PosetifiedFunctor(Pow()))
    r = build_beta_variant(free_BA(1), Id(), DiscreteComponents())
    assert not r and r.details["verdict"] == "not surjective"
    with pytest.raises(ResourceError):
        build_beta_variant(free_BA(3), Pow(), ArrowsFromTwo())


def test_n_step():
    assert n_step_injectivity(Pow(), 1).details["sizes"].startswith("4->4")
    assert n_step_injectivity(Id(), 2)
    assert n_step_injectivity(Pow(), 2)


def test_l_prime_preserves_monos_small():
    assert L_prime_preserves_monos_check(Pow(), 2)


def test_wk_counterexample():
    r = wk_counterexample()
    assert r
    assert r.details["|P'X|"] == 5
    assert r.details["|WK(P'D2)|"] == 4
    assert r.details["|WK(P'X)|"] == 2
