import random

import pytest
import sympy
from hypothesis import given, strategies as st

from homalgebroid.algebroid import HomAlgebroid, apply_alpha, random_section
from homalgebroid.cochains import (
    AlphaStar,
    Basis,
    D,
    Evaluator,
    Function,
    PhiBar,
    Wedge,
    builtin_cochains,
    check_commutation,
    check_d_squared,
    check_leibniz,
    check_linearity,
    linearity_item,
    cochain_from_json,
    combo,
    evaluate,
)
from homalgebroid.config import RunConfig
from homalgebroid.equivalence import convert
from homalgebroid.fixtures import perturb, tangent_line, tangent_plane, twisted_action, twisted_line
from homalgebroid.kernel import BaseGeometry
from homalgebroid.report import Refusal

from classical import cartan_terms
from conftest import to_sympy

TWISTED = twisted_line()
TANGENT = tangent_line()
P3 = TWISTED.base.poly
E3 = TWISTED.basis(0)


def fn(ab, text):
    return Function(ab.base.poly(text))


# -- evaluation -------------------------------------------------------------

def test_differential_of_coordinate():
    assert evaluate(TWISTED, D(0, fn(TWISTED, "x")), [E3]) == P3("1")


def test_differential_of_square():
    assert evaluate(TWISTED, D(0, fn(TWISTED, "x^2")), [E3]) == P3("2*x")


def test_shifted_differential_of_coordinate():
    assert evaluate(TWISTED, D(1, fn(TWISTED, "x")), [E3]) == P3("-1")


def test_alpha_star_of_dual():
    assert evaluate(TWISTED, AlphaStar(Basis.dual(TWISTED.base, 0)), [E3]) == P3("-1")


def test_twist_one_vs_zero_raw_family():
    # d^1 x is twisted-linear on the raw family: d^1x(x e) = x while x * d^1x(e) = -x
    ev = Evaluator(TWISTED)
    assert ev.evaluate(D(1, fn(TWISTED, "x")), [E3.scale(P3("x"))]) == P3("x")


def test_basis_leaf_twist():
    xi0 = Basis.dual(TWISTED.base, 0, twist=0)
    xi1 = Basis.dual(TWISTED.base, 0, twist=1)
    X = E3.scale(P3("x^2 + x"))
    assert evaluate(TWISTED, xi0, [X]) == P3("x^2 + x")
    assert evaluate(TWISTED, xi1, [X]) == P3("x^2 - x")


def test_arity_mismatch():
    with pytest.raises(ValueError):
        evaluate(TWISTED, D(0, fn(TWISTED, "x")), [E3, E3])


def test_differential_refused_over_non_involution():
    base = BaseGeometry.from_strings(["x"], ["x + 1"])
    ab = HomAlgebroid.from_data(base, [["1"]], [["1"]], [[["0"]]])
    with pytest.raises(Refusal):
        evaluate(ab, D(0, Function(base.poly("x"))), [ab.basis(0)])
    # leaves still evaluate
    assert evaluate(ab, Basis.dual(base, 0), [ab.basis(0)]) == base.one()


def test_basis_form_validation():
    with pytest.raises(ValueError):
        Basis.make(2, {(1, 0): TWISTED.base.one()})
    with pytest.raises(ValueError):
        Basis.make(1, {(0,): TWISTED.base.one()}, twist=2)


# -- wedge ------------------------------------------------------------------

def test_wedge_of_duals_is_determinant():
    ab = tangent_plane()
    w = Wedge(Basis.dual(ab.base, 0), Basis.dual(ab.base, 1))
    assert evaluate(ab, w, [ab.basis(0), ab.basis(1)]) == ab.base.one()
    assert evaluate(ab, w, [ab.basis(1), ab.basis(0)]) == -ab.base.one()


def test_wedge_square_of_one_form_vanishes():
    ab = twisted_action()
    xi = D(0, Function(ab.base.poly("x^2")))
    rng = random.Random(3)
    X, Y = random_section(ab, rng, 2), random_section(ab, rng, 2)
    assert evaluate(ab, Wedge(xi, xi), [X, Y]).is_zero()


def test_wedge_of_functions_is_product():
    assert evaluate(TWISTED, Wedge(fn(TWISTED, "x + 1"), fn(TWISTED, "x")), []) == P3("x^2 + x")


def test_wedge_one_two_shuffle_sum():
    ab = twisted_action()
    a = D(0, Function(ab.base.poly("x")))
    b = D(1, Basis.dual(ab.base, 1))
    rng = random.Random(5)
    X, Y, Z = (random_section(ab, rng, 1) for _ in range(3))
    ev = Evaluator(ab)
    expected = (ev.evaluate(a, [X]) * ev.evaluate(b, [Y, Z]) - ev.evaluate(a, [Y]) * ev.evaluate(b, [X, Z])
                + ev.evaluate(a, [Z]) * ev.evaluate(b, [X, Y]))
    assert ev.evaluate(Wedge(a, b), [X, Y, Z]) == expected


# -- generic properties ------------------------------------------------------

PROPERTY_ALGEBROIDS = [twisted_line(), twisted_line("B"), tangent_line(), twisted_action(), twisted_action("B")]


def _degree_two_cochains(ab):
    return builtin_cochains(ab, 2) + [D(0, Basis.dual(ab.base, ab.rank - 1))]


@given(st.integers(0, 10_000), st.integers(0, len(PROPERTY_ALGEBROIDS) - 1))
def test_evaluation_alternates(seed, which):
    ab = PROPERTY_ALGEBROIDS[which]
    rng = random.Random(seed)
    X, Y = random_section(ab, rng, 2), random_section(ab, rng, 2)
    ev = Evaluator(ab)
    for c in _degree_two_cochains(ab):
        assert ev.evaluate(c, [X, Y]) == -ev.evaluate(c, [Y, X])
        assert ev.evaluate(c, [X, X]).is_zero()


@given(st.integers(0, 10_000), st.integers(0, len(PROPERTY_ALGEBROIDS) - 1))
def test_evaluation_is_additive(seed, which):
    ab = PROPERTY_ALGEBROIDS[which]
    rng = random.Random(seed)
    X, X2, Y = (random_section(ab, rng, 2) for _ in range(3))
    ev = Evaluator(ab)
    for c in _degree_two_cochains(ab):
        assert ev.evaluate(c, [X + X2.scale(3), Y]) == ev.evaluate(c, [X, Y]) + ev.evaluate(c, [X2, Y]) * 3
    for c in builtin_cochains(ab, 1):
        assert ev.evaluate(c, [X - X2]) == ev.evaluate(c, [X]) - ev.evaluate(c, [X2])


@pytest.mark.parametrize("ab", [twisted_line(), tangent_line(), twisted_line("B"), twisted_action()],
                         ids=["twisted-line", "tangent-line", "twisted-line-B", "twisted-action"])
def test_d_squared_zero_on_builtins(ab):
    ev = Evaluator(ab)
    cfg = RunConfig(trials=4)
    for k in range(3 if ab.rank == 1 else 2):
        for c in builtin_cochains(ab, k):
            for s in range(3):
                assert check_d_squared(ab, c, s, cfg, ev).passed


@given(st.integers(0, 10_000))
def test_alpha_star_keeps_forms_function_linear(seed):
    ab = twisted_action()
    rng = random.Random(seed)
    X = random_section(ab, rng, 2)
    g = random_section(ab, rng, 2).coefficients[0]
    ev = Evaluator(ab)
    for i in range(ab.rank):
        a = AlphaStar(Basis.dual(ab.base, i))
        assert ev.evaluate(a, [X.scale(g)]) == g * ev.evaluate(a, [X])


@given(st.integers(0, 10_000))
def test_alpha_star_and_phi_bar_distribute_over_wedge(seed):
    ab = twisted_action()
    rng = random.Random(seed)
    X, Y = random_section(ab, rng, 2), random_section(ab, rng, 2)
    a, b = Basis.dual(ab.base, 0), D(0, Function(ab.base.poly("x^2")))
    ev = Evaluator(ab)
    assert ev.evaluate(AlphaStar(Wedge(a, b)), [X, Y]) == ev.evaluate(Wedge(AlphaStar(a), AlphaStar(b)), [X, Y])
    assert ev.evaluate(PhiBar(Wedge(a, b)), [X, Y]) == ev.evaluate(Wedge(PhiBar(a), PhiBar(b)), [X, Y])


def test_sum_nodes():
    x = fn(TWISTED, "x")
    c = combo((2, D(0, x)), (-1, D(1, x)))
    assert evaluate(TWISTED, c, [E3]) == P3("3")
    with pytest.raises(ValueError):
        combo((1, x), (1, D(0, x)))


# -- graded Leibniz and commutation --------------------------------------------

def test_leibniz_on_product_of_coordinates():
    x = fn(TWISTED, "x")
    assert check_leibniz(TWISTED, x, x, 0).passed
    assert evaluate(TWISTED, D(0, Wedge(x, x)), [E3]) == P3("2*x")


def test_leibniz_with_zero():
    zero = fn(TWISTED, "0")
    assert check_leibniz(TWISTED, zero, Basis.dual(TWISTED.base, 0), 1).passed


def test_leibniz_form_and_function():
    assert check_leibniz(TWISTED, Basis.dual(TWISTED.base, 0), fn(TWISTED, "x"), 0).passed


def test_commutation_on_coordinate():
    x = fn(TWISTED, "x")
    assert evaluate(TWISTED, PhiBar(D(0, x)), [E3]) == P3("1")
    assert evaluate(TWISTED, D(1, PhiBar(x)), [E3]) == P3("1")
    assert check_commutation(TWISTED, x, 0).passed


def test_commutation_classical():
    for c in builtin_cochains(TANGENT, 1):
        assert check_commutation(TANGENT, c, 0).passed


@pytest.mark.parametrize("s", [0, 1])
def test_commutation_on_dual(s):
    assert check_commutation(TWISTED, Basis.dual(TWISTED.base, 0), s).passed


def test_alpha_commutation_needs_anchor_compatibility():
    broken = perturb(TWISTED, "anchor", (1, 1), "x")
    rep = check_commutation(broken, Function(broken.base.poly("x^2")), 0)
    assert not rep.item("alpha_star_commutes_with_d").passed


# -- linearity conditions -------------------------------------------------------

def test_linearity_native_variant():
    assert check_linearity(TWISTED, "function").passed
    assert check_linearity(TWISTED, "form").passed


def test_linearity_after_conversion():
    b, _ = convert(TWISTED, "B", verify_conditions=False)
    assert check_linearity(b, "function").passed
    assert check_linearity(b, "form").passed


def test_linearity_classical_under_both_variants():
    for variant in ("A", "B"):
        for kind in ("function", "form"):
            assert linearity_item(tangent_line(variant), "A", kind).passed
            assert linearity_item(tangent_line(variant), "B", kind).passed


def test_linearity_other_variant_fails_on_twisted_line():
    item = linearity_item(TWISTED, "B", "function")
    assert not item.passed and item.name == "d1_function_is_form"
    with pytest.raises(ValueError):
        check_linearity(TWISTED, "vector")


# -- classical degeneration ----------------------------------------------------

def _sympy_section(X):
    return tuple(to_sympy(c) for c in X.coefficients)


@pytest.mark.parametrize("make,degree", [(tangent_line, 0), (tangent_line, 1), (tangent_plane, 0),
                                         (tangent_plane, 1), (tangent_plane, 2)])
def test_classical_cartan_term_by_term(make, degree):
    ab = make()
    syms = sympy.symbols(ab.base.variables)
    rng = random.Random(degree)
    ev = Evaluator(ab)
    if degree == 0:
        eta = Function(ab.base.poly("x^3 + 2*x"))
        oracle = lambda: to_sympy(eta.poly)
    elif degree == 1:
        comp = ab.base.poly("x^2 - 1")
        eta = Basis.make(1, {(0,): comp})
        oracle = lambda X: to_sympy(comp) * X[0]
    else:
        comp = ab.base.poly("x*y + 1")
        eta = Basis.make(2, {(0, 1): comp})
        oracle = lambda X, Y: to_sympy(comp) * (X[0] * Y[1] - X[1] * Y[0])
    for _ in range(4):
        args = [random_section(ab, rng, 2) for _ in range(degree + 1)]
        want = cartan_terms(oracle, [_sympy_section(X) for X in args], syms)
        for s in (0, 1):
            got = ev.coboundary_terms(eta, s, args)
            assert set(got) == set(want)
            for key in want:
                assert to_sympy(got[key]) == want[key], key


# -- literals --------------------------------------------------------------------

def test_cochain_literals():
    ab = twisted_action()
    c = cochain_from_json({"kind": "basis", "k": 1, "twist": 0, "components": {"2": "x"}}, ab)
    assert evaluate(ab, c, [ab.section(["1", "3"])]) == ab.base.poly("3*x")
    f = cochain_from_json({"kind": "function", "poly": "x^2"}, ab)
    assert f.degree == 0 and f.poly == ab.base.poly("x^2")
    two = cochain_from_json({"kind": "basis", "k": 2, "components": {"1,2": "1"}}, ab)
    assert evaluate(ab, two, [ab.basis(0), ab.basis(1)]) == ab.base.one()
    with pytest.raises(ValueError):
        cochain_from_json({"kind": "basis", "k": 1, "components": {"3": "1"}}, ab)
    with pytest.raises(ValueError):
        cochain_from_json({"kind": "vector"}, ab)


def test_alpha_applied_to_sections_inside_alpha_star():
    ab = twisted_action()
    X = ab.section(["x", "1"])
    xi = Basis.dual(ab.base, 1)
    # alpha(x e1 + e2) = -x e1 - e2, so alpha*(e2*)(X) = phi*(-1) = -1
    assert apply_alpha(ab, X) == ab.section(["-x", "-1"])
    assert evaluate(ab, AlphaStar(xi), [X]) == ab.base.poly("-1")
