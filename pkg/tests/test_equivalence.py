import pytest

from homalgebroid.algebroid import HomAlgebroid, check_axioms
from homalgebroid.cochains import Basis, D, Function, evaluate
from homalgebroid.config import RunConfig
from homalgebroid.equivalence import (
    DifferentialFamily,
    build_family,
    check_theorem_conditions,
    convert,
    proptest,
    reconstruct,
    reconstruct_anchor,
    reconstruct_bracket,
    round_trip,
)
from homalgebroid.fixtures import (
    action_line,
    perturb,
    projected_line,
    swap_plane,
    tangent_line,
    tangent_plane,
    twisted_action,
    twisted_line,
)
from homalgebroid.kernel import BaseGeometry
from homalgebroid.report import Refusal

TWISTED = twisted_line()
TANGENT = tangent_line()
FAST = RunConfig(trials=4, max_cochain_degree=1, s_max=1)


def test_family_values():
    fam = build_family(TWISTED)
    x = Function(TWISTED.base.poly("x"))
    e = TWISTED.basis(0)
    assert fam.value(0, x, [e]) == TWISTED.base.poly("1")
    assert fam.value(1, x, [e]) == TWISTED.base.poly("-1")


def test_family_of_tangent_line_is_derivative():
    fam = build_family(TANGENT)
    f = Function(TANGENT.base.poly("x^3 - x"))
    for s in range(3):
        assert fam.value(s, f, [TANGENT.basis(0)]) == TANGENT.base.poly("3*x^2 - 1")


def test_build_family_refuses_broken_structure():
    with pytest.raises(Refusal) as info:
        build_family(perturb(TWISTED, "bracket", (1, 1, 1), "x"))
    assert not info.value.report.passed


# -- conditions -------------------------------------------------------------------

def test_conditions_native_variant():
    rep = check_theorem_conditions(build_family(TWISTED), "A")
    assert rep.passed, rep.to_text()
    assert len(rep.items) == 5


def test_conditions_other_variant_fail_linearity():
    rep = check_theorem_conditions(build_family(TWISTED), "B")
    item = rep.items[3]
    assert not item.passed
    w = item.witness
    assert (w["g"], w["lhs"], w["rhs"]) == ("x", "x", "-x")
    # the first three conditions do not depend on the variant
    assert all(i.passed for i in rep.items[:3])


@pytest.mark.parametrize("variant", ["A", "B"])
def test_conditions_classical_either_variant(variant):
    assert check_theorem_conditions(build_family(TANGENT), variant).passed


@pytest.mark.parametrize("make", [twisted_action, swap_plane, action_line])
@pytest.mark.parametrize("variant", ["A", "B"])
def test_conditions_on_rank_two(make, variant):
    ab = make(variant)
    assert check_theorem_conditions(build_family(ab, FAST), variant, FAST).passed


# -- reconstruction ------------------------------------------------------------------

def test_reconstruct_anchor_twisted_line():
    fam = build_family(TWISTED)
    assert reconstruct_anchor(fam, "A") == [[TWISTED.base.poly("1")]]


def test_reconstruct_anchor_tangent_line():
    assert reconstruct_anchor(build_family(TANGENT), "A") == [[TANGENT.base.poly("1")]]


def test_variant_b_recipe_on_raw_family():
    fam = build_family(TWISTED)
    with pytest.raises(Refusal):
        reconstruct_anchor(fam, "B")
    # rho_B(e)(x) = d^1(phi* x)(e) = d^1(-x)(e) = 1
    assert evaluate(TWISTED, D(1, Function(TWISTED.base.poly("-x"))), [TWISTED.basis(0)]) == TWISTED.base.poly("1")
    assert reconstruct_anchor(fam, "B", check=False) == [[TWISTED.base.poly("1")]]


def test_bracket_probe_on_scaled_section():
    x = TWISTED.base.poly("x")
    e = TWISTED.basis(0)
    xi = Basis.dual(TWISTED.base, 0)
    assert evaluate(TWISTED, D(0, xi), [e.scale(x), e]).is_zero()


def test_reconstruct_bracket_twisted_action():
    ab = twisted_action()
    br = reconstruct_bracket(build_family(ab, FAST), "A")
    assert br[0][1] == ab.section(["0", "-1"])
    assert br[1][0] == ab.section(["0", "1"])


def test_zero_family_gives_zero_bracket():
    base = BaseGeometry.identity(["x"])
    ab = HomAlgebroid.from_data(base, [["1", "0"], ["0", "1"]], [["0"], ["0"]],
                                [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]])
    br = reconstruct_bracket(build_family(ab), "A")
    assert all(s.is_zero() for row in br for s in row)


@pytest.mark.parametrize("ab", [TWISTED, TANGENT, twisted_line("B"), tangent_line("B")],
                         ids=["twisted-line", "tangent-line", "twisted-line-B", "tangent-line-B"])
def test_round_trip_rank_one(ab):
    rep = round_trip(ab)
    assert rep.passed, rep.to_text()
    names = [i.name for i in rep.items]
    assert names[:3] == ["anchor_reproduced", "bracket_reproduced", "reconstruction_axioms"]


@pytest.mark.parametrize("make", [twisted_action, swap_plane, action_line, tangent_plane])
@pytest.mark.parametrize("variant", ["A", "B"])
def test_round_trip_rank_two(make, variant):
    ab = make(variant)
    rec = reconstruct(build_family(ab, FAST), variant, FAST)
    assert rec.same_structure(ab)


def test_round_trip_rank_zero():
    ab = HomAlgebroid.from_data(BaseGeometry.identity(["x"]), [], [], [], "A")
    rep = round_trip(ab)
    assert rep.passed and rep.items[0].name == "rank_zero"


def test_round_trip_reports_broken_source():
    rep = round_trip(perturb(TWISTED, "alpha", (1, 1), "1"))
    assert not rep.passed and rep.items[0].name == "source_axioms"


# -- conversion --------------------------------------------------------------------

def test_convert_twisted_line():
    b, rep = convert(TWISTED, "B")
    assert rep.passed
    assert b.variant == "B" and b.anchor_sf == ((TWISTED.base.poly("-1"),),)
    assert b.alpha_sf == TWISTED.alpha_sf and b.bracket_sf == TWISTED.bracket_sf


def test_convert_classical_is_identity_on_data():
    b, _ = convert(TANGENT, "B")
    assert b.anchor_sf == TANGENT.anchor_sf and b.variant == "B"


def test_convert_there_and_back():
    b, _ = convert(TWISTED, "B")
    a, _ = convert(b, "A")
    assert a.same_structure(TWISTED)


@pytest.mark.parametrize("make", [twisted_action, swap_plane])
@pytest.mark.parametrize("variant", ["A", "B"])
def test_convert_is_involution_rank_two(make, variant):
    ab = make(variant)
    other = "B" if variant == "A" else "A"
    there, _ = convert(ab, other, FAST, verify_conditions=False)
    back, _ = convert(there, variant, FAST, verify_conditions=False)
    assert back.same_structure(ab)
    assert check_axioms(there, FAST).passed


def test_convert_same_variant_is_noop():
    out, rep = convert(TWISTED, "A")
    assert out is TWISTED and rep.item("same_variant").passed


def test_convert_refuses_singular_alpha():
    with pytest.raises(Refusal) as info:
        convert(projected_line(), "B")
    assert not info.value.report.item("alpha_invertible").passed


def test_convert_refuses_broken_source():
    with pytest.raises(Refusal):
        convert(perturb(TWISTED, "anchor", (1, 1), "x"), "B")


def test_convert_bad_target():
    with pytest.raises(ValueError):
        convert(TWISTED, "C")


# -- battery --------------------------------------------------------------------------

def test_battery_twisted_line():
    rep = proptest(TWISTED, RunConfig(trials=4))
    assert rep.passed, rep.to_text()
    assert rep.items[-1].name == "convert_involution"


def test_battery_projected_line_skips_conversion():
    rep = proptest(projected_line(), FAST)
    assert rep.passed
    assert "not applicable" in rep.item("convert_involution").detail


def test_battery_stops_on_axiom_failure():
    rep = proptest(perturb(TWISTED, "bracket", (1, 1, 1), "1"))
    assert not rep.passed
    assert rep.first_failure().name == "axioms.antisymmetry"
    assert not any(i.name.startswith("conditions.") for i in rep.items)


def test_family_wraps_evaluator():
    fam = DifferentialFamily(TWISTED)
    assert fam.d(2, Function(TWISTED.base.poly("x"))).degree == 1
