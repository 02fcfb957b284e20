"""Differential families of an algebroid, the condition lists that
characterize each definition, reconstruction of anchor and bracket from the
family, and conversion between the two definitions.

Reconstruction formulas (phi* an involution, a = alpha):

* variant A: rho(X)g = phi*(d^0 g(X)),
  xi([X,Y]) = rho(X)(phi* xi(aY)) - rho(Y)(phi* xi(aX)) - d^0 xi(X,Y)
* variant B: rho(X)g = d^1(phi* g)(X),
  xi([X,Y]) = phi*(rho(X) xi(aY)) - phi*(rho(Y) xi(aX)) - d^1 xi(X,Y)

Both are the d^s display at k = 0 and k = 1 solved for rho and the bracket.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .algebroid import (
    HomAlgebroid,
    Section,
    check_axioms,
    item_alpha_morphism,
    item_hom_jacobi,
    item_hom_leibniz,
    item_rep_alpha,
    item_rep_bracket,
)
from .cochains import (
    Basis,
    D,
    Evaluator,
    Function,
    builtin_cochains,
    check_commutation,
    check_d_squared,
    check_leibniz,
    linearity_item,
)
from .config import RunConfig
from .kernel import Poly, apply_phi, poly_matrix_inverse
from .report import CheckItem, Refusal, Report


@dataclass
class DifferentialFamily:
    algebroid: HomAlgebroid
    evaluator: Evaluator = field(repr=False, default=None)

    def __post_init__(self):
        if self.evaluator is None:
            self.evaluator = Evaluator(self.algebroid)

    def d(self, s: int, c) -> D:
        return D(s, c)

    def value(self, s: int, c, args) -> Poly:
        return self.evaluator.evaluate(D(s, c), args)


def build_family(ab: HomAlgebroid, cfg: RunConfig | None = None) -> DifferentialFamily:
    report = check_axioms(ab, cfg)
    if not report.passed:
        raise Refusal(f"algebroid fails {report.first_failure().name}", report)
    return DifferentialFamily(ab)


# ----------------------------------------------------------------------
# Condition lists
# ----------------------------------------------------------------------

CONDITION_LABELS = ("d^s o d^s = 0", "graded Leibniz rule", "alpha* and phibar* commute with d",
                    "d of a function is a form", "d of a form is twisted-linear")


def _first_failure(name: str, reports, detail: str) -> CheckItem:
    n = 0
    for rep in reports:
        for it in rep.items if isinstance(rep, Report) else [rep]:
            n += 1
            if not it.passed:
                witness = dict(it.witness or {})
                if isinstance(rep, Report):
                    witness.update({k: v for k, v in rep.meta.items()})
                witness["identity"] = it.name
                return CheckItem(name, False, witness, detail)
    return CheckItem(name, True, None, f"{detail}; {n} instances")


def check_theorem_conditions(fam: DifferentialFamily, variant: str, cfg: RunConfig | None = None) -> Report:
    """The five conditions on a differential family under which it comes from
    an algebroid of the given variant: d^2 = 0, graded Leibniz, the two
    commutations, and the two linearity conditions (with d^0 for A, d^1 for B)."""
    cfg = cfg or RunConfig()
    ab, ev = fam.algebroid, fam.evaluator
    report = Report(f"differential-family conditions for variant {variant}",
                    meta={"family_of": ab.variant, "seed": cfg.seed, "trials": cfg.trials,
                          "max_degree": cfg.max_degree, "s_range": [cfg.s_min, cfg.s_max]})
    degrees = range(cfg.max_cochain_degree + 1)
    cochains = {k: builtin_cochains(ab, k) for k in degrees}

    def dsq():
        for k in degrees:
            for c in cochains[k]:
                for s in cfg.s_range:
                    yield check_d_squared(ab, c, s, cfg, ev)

    def leib():
        for k in degrees:
            for l in degrees:
                if k + l > cfg.max_cochain_degree:
                    continue
                for a in cochains[k][:2]:
                    for b in cochains[l][:2]:
                        for s in cfg.s_range:
                            yield check_leibniz(ab, a, b, s, cfg, ev)

    def comm():
        for k in degrees:
            for c in cochains[k]:
                for s in cfg.s_range:
                    yield check_commutation(ab, c, s, cfg, ev)

    report.add(_first_failure("d_squared_zero", dsq(), CONDITION_LABELS[0]))
    report.add(_first_failure("graded_leibniz", leib(), CONDITION_LABELS[1]))
    report.add(_first_failure("commutations", comm(), CONDITION_LABELS[2]))
    fn = linearity_item(ab, variant, "function", cfg, ev)
    report.add(CheckItem(fn.name, fn.passed, fn.witness, f"{CONDITION_LABELS[3]}; {fn.detail}".rstrip("; ")))
    fm = linearity_item(ab, variant, "form", cfg, ev)
    report.add(CheckItem(fm.name, fm.passed, fm.witness, f"{CONDITION_LABELS[4]}; {fm.detail}".rstrip("; ")))
    return report


# ----------------------------------------------------------------------
# Reconstruction
# ----------------------------------------------------------------------

def _anchor_op(fam: DifferentialFamily, variant: str):
    ev, base = fam.evaluator, fam.algebroid.base
    if variant == "A":
        return lambda X, g: apply_phi(base, 1, ev.evaluate(D(0, Function(g)), [X]))
    return lambda X, g: ev.evaluate(D(1, Function(apply_phi(base, 1, g))), [X])


def reconstruct_anchor(fam: DifferentialFamily, variant: str, cfg: RunConfig | None = None,
                       check: bool = True) -> list[list[Poly]]:
    """Anchor coefficients c_ij with rho(e_i)(f) = phi*(sum_j c_ij df/dx_j),
    read off from rho(e_i)(x_j) = phi*(c_ij)."""
    ab = fam.algebroid
    if check:
        cond = linearity_item(ab, variant, "function", cfg, fam.evaluator)
        if not cond.passed:
            raise Refusal(f"family does not satisfy the variant-{variant} anchor condition",
                          Report("anchor reconstruction", [cond]))
    rho = _anchor_op(fam, variant)
    return [[apply_phi(ab.base, 1, rho(X, x)) for x in ab.base.generators] for X in ab.basis_sections()]


def reconstruct_bracket(fam: DifferentialFamily, variant: str) -> list[list[Section]]:
    ab, ev = fam.algebroid, fam.evaluator
    base = ab.base
    P = lambda h: apply_phi(base, 1, h)
    rho = _anchor_op(fam, variant)
    s = 0 if variant == "A" else 1
    E = ab.basis_sections()
    m = ab.alpha_sf  # e_k^*(alpha(e_i)) = m[i][k]
    out = []
    for i in range(ab.rank):
        row = []
        for j in range(ab.rank):
            coeffs = []
            for k in range(ab.rank):
                dxi = ev.evaluate(D(s, Basis.dual(base, k)), [E[i], E[j]])
                if variant == "A":
                    val = rho(E[i], P(m[j][k])) - rho(E[j], P(m[i][k])) - dxi
                else:
                    val = P(rho(E[i], m[j][k])) - P(rho(E[j], m[i][k])) - dxi
                coeffs.append(val)
            row.append(Section(base, coeffs))
        out.append(row)
    return out


def reconstruct(fam: DifferentialFamily, variant: str, cfg: RunConfig | None = None,
                check: bool = True) -> HomAlgebroid:
    ab = fam.algebroid
    anchor = reconstruct_anchor(fam, variant, cfg, check)
    br = reconstruct_bracket(fam, variant)
    return HomAlgebroid(ab.base, ab.rank, tuple(tuple(r) for r in br), tuple(tuple(r) for r in anchor),
                        ab.alpha_sf, variant)


def _compare_structure(name: str, got, want, fmt=str) -> CheckItem:
    for i, (rg, rw) in enumerate(zip(got, want)):
        for j, (a, b) in enumerate(zip(rg, rw)):
            if a != b:
                return CheckItem(name, False, {"entry": [i + 1, j + 1], "reconstructed": fmt(a), "original": fmt(b)})
    return CheckItem(name, True)


def round_trip(ab: HomAlgebroid, cfg: RunConfig | None = None) -> Report:
    cfg = cfg or RunConfig()
    report = Report(f"round trip (variant {ab.variant})", meta={"seed": cfg.seed, "trials": cfg.trials})
    try:
        fam = build_family(ab, cfg)
    except Refusal as exc:
        report.add(CheckItem("source_axioms", False, {"first_failure": exc.report.first_failure().name}))
        return report
    if ab.rank == 0:
        report.add(CheckItem("rank_zero", True, detail="nothing to reconstruct"))
        return report
    try:
        rec = reconstruct(fam, ab.variant, cfg)
    except Refusal as exc:
        report.add(CheckItem("anchor_condition", False, exc.report.items[0].witness))
        return report
    report.add(_compare_structure("anchor_reproduced", rec.anchor_sf, ab.anchor_sf))
    report.add(_compare_structure("bracket_reproduced", rec.bracket_sf, ab.bracket_sf, lambda s: s.to_strings()))
    axioms = check_axioms(rec, cfg)
    ff = axioms.first_failure()
    report.add(CheckItem("reconstruction_axioms", axioms.passed,
                         None if ff is None else {"identity": ff.name, **(ff.witness or {})}))
    # the intermediate identities, on the reconstruction alone
    report.add(item_rep_alpha(rec, cfg, name="anchor_intertwines_phi"))
    report.add(item_alpha_morphism(rec, cfg, name="alpha_is_bracket_morphism"))
    report.add(item_rep_bracket(rec, cfg, name="anchor_of_bracket"))
    report.add(item_hom_leibniz(rec, cfg, name="hom_leibniz"))
    report.add(item_hom_jacobi(rec, cfg, name="hom_jacobi_inner_form", form="inner"))
    return report


# ----------------------------------------------------------------------
# Conversion
# ----------------------------------------------------------------------

def convert(ab: HomAlgebroid, target: str, cfg: RunConfig | None = None,
            verify_conditions: bool = True) -> tuple[HomAlgebroid, Report]:
    """Same base, alpha and bracket; anchor rho_B = rho_A o alpha^-1 (A -> B)
    or rho_A = rho_B o alpha (B -> A). Refuses unless alpha is invertible over
    the base and the result passes the target axioms."""
    if target not in ("A", "B"):
        raise ValueError("target must be 'A' or 'B'")
    cfg = cfg or RunConfig()
    report = Report(f"convert {ab.variant} -> {target}")
    source = check_axioms(ab, cfg)
    report.add(CheckItem("source_axioms", source.passed,
                         None if source.passed else {"identity": source.first_failure().name}))
    if not source.passed:
        raise Refusal("source algebroid fails its axioms", report)
    if target == ab.variant:
        report.add(CheckItem("same_variant", True, detail="nothing to convert"))
        return ab, report
    base = ab.base
    P = lambda h: apply_phi(base, 1, h)
    M = [list(row) for row in ab.alpha_sf]
    inv = poly_matrix_inverse(M, base.variables) if ab.rank else []
    report.add(CheckItem("alpha_invertible", inv is not None,
                         None if inv is not None else {"alpha": [[str(p) for p in r] for r in M]}))
    if inv is None:
        raise Refusal("alpha is not invertible over the base", report)
    # anchor rows combine as rows of a matrix acting on the left
    T = [[P(p) for p in row] for row in (inv if target == "B" else M)]
    n = len(base.variables)
    anchor = []
    for i in range(ab.rank):
        row = []
        for l in range(n):
            acc = base.zero()
            for j in range(ab.rank):
                if T[i][j] and ab.anchor_sf[j][l]:
                    acc = acc + T[i][j] * ab.anchor_sf[j][l]
            row.append(acc)
        anchor.append(tuple(row))
    out = ab.replace(anchor_sf=tuple(anchor), variant=target)
    axioms = check_axioms(out, cfg)
    ff = axioms.first_failure()
    report.add(CheckItem("target_axioms", axioms.passed, None if ff is None else {"identity": ff.name, **(ff.witness or {})}))
    if not axioms.passed:
        raise Refusal("converted algebroid fails the target axioms", report)
    if verify_conditions:
        cond = check_theorem_conditions(DifferentialFamily(out), target, cfg)
        ff = cond.first_failure()
        report.add(CheckItem("target_conditions", cond.passed, None if ff is None else {"condition": ff.name}))
        if not cond.passed:
            raise Refusal("converted family fails the target conditions", report)
    return out, report


# ----------------------------------------------------------------------
# Full battery
# ----------------------------------------------------------------------

def proptest(ab: HomAlgebroid, cfg: RunConfig | None = None) -> Report:
    """Every property in sequence: axioms, the native conditions, round trip,
    and conversion there and back."""
    cfg = cfg or RunConfig()
    report = Report(f"property battery (variant {ab.variant})", meta=cfg.to_dict() | {"rank": ab.rank})
    report.extend(check_axioms(ab, cfg), "axioms.")
    if not report.passed:
        return report
    fam = DifferentialFamily(ab)
    report.extend(check_theorem_conditions(fam, ab.variant, cfg), "conditions.")
    report.extend(round_trip(ab, cfg), "round_trip.")
    other = "B" if ab.variant == "A" else "A"
    if ab.rank and poly_matrix_inverse([list(r) for r in ab.alpha_sf], ab.base.variables) is None:
        report.add(CheckItem("convert_involution", True, detail="not applicable: alpha not invertible"))
        return report
    try:
        there, _ = convert(ab, other, cfg)
        back, _ = convert(there, ab.variant, cfg, verify_conditions=False)
        ok = back.same_structure(ab)
        report.add(CheckItem("convert_involution", ok, None if ok else {"converted_back_anchor":
                                                                        [[str(p) for p in r] for r in back.anchor_sf]}))
    except Refusal as exc:
        ff = exc.report.first_failure()
        report.add(CheckItem("convert_involution", False, {"refused_at": ff.name if ff else str(exc)}))
    return report
