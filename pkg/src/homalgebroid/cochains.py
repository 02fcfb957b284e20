"""Cochains on the section module of a Hom-Lie algebroid.

A cochain is an expression tree. Leaves are functions (degree 0) and
``Basis`` forms given by components on increasing basis tuples; nodes are
wedge products, the differentials d^s, alpha* and phi-bar*, and weighted
sums. Trees do not carry an algebroid: an :class:`Evaluator` bound to one
evaluates any tree against it.

Conventions:

* d^s eta(X_0..X_k) = sum_i (-1)^i phi*^(k+1+s) rho(X_i) phi*^(-k-2-s) eta(aX_0..^i..aX_k)
                    + sum_{a<b} (-1)^(a+b) eta([X_a, X_b], aX_0..^a..^b..aX_k)
  where aX = alpha(X) and indices are 0-based.
* alpha*(eta)(X..) = phi*(eta(aX..)), phi-bar*(eta)(X..) = phi*(eta(X..)).
* Wedge is the signed shuffle sum with unit coefficients, so for 1-forms
  (a ^ b)(X, Y) = a(X)b(Y) - a(Y)b(X).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebroid import (
    HomAlgebroid,
    Section,
    apply_alpha,
    apply_anchor,
    bracket,
    random_poly,
    sample_tuples,
)
from .config import RunConfig
from .kernel import Poly, apply_phi, check_involution, parse_poly, poly_det
from .report import CheckItem, Refusal, Report


# ----------------------------------------------------------------------
# Expression nodes (identity-hashed so they can key the evaluation memo)
# ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Function:
    poly: Poly

    @property
    def degree(self) -> int:
        return 0


@dataclass(frozen=True, eq=False)
class Basis:
    """eta(e_I) = components[I] for increasing I; eta(f X, ...) = phi*^twist(f) eta(X, ...)."""
    k: int
    components: tuple[tuple[tuple[int, ...], Poly], ...]
    twist: int = 0

    @property
    def degree(self) -> int:
        return self.k

    @classmethod
    def make(cls, k: int, components: dict, twist: int = 0) -> "Basis":
        if twist not in (0, 1):
            raise ValueError("twist must be 0 or 1")
        items = []
        for idx, val in components.items():
            idx = tuple(idx)
            if len(idx) != k or list(idx) != sorted(set(idx)):
                raise ValueError(f"basis form index {idx} is not an increasing {k}-tuple")
            items.append((idx, val))
        return cls(k, tuple(sorted(items)), twist)

    @classmethod
    def dual(cls, base, i: int, twist: int = 0) -> "Basis":
        """The dual form e_{i+1}^*."""
        return cls.make(1, {(i,): base.one()}, twist)


@dataclass(frozen=True, eq=False)
class Wedge:
    lhs: object
    rhs: object

    @property
    def degree(self) -> int:
        return self.lhs.degree + self.rhs.degree


@dataclass(frozen=True, eq=False)
class D:
    s: int
    child: object

    @property
    def degree(self) -> int:
        return self.child.degree + 1


@dataclass(frozen=True, eq=False)
class AlphaStar:
    child: object

    @property
    def degree(self) -> int:
        return self.child.degree


@dataclass(frozen=True, eq=False)
class PhiBar:
    child: object

    @property
    def degree(self) -> int:
        return self.child.degree


@dataclass(frozen=True, eq=False)
class Sum:
    terms: tuple[tuple[Fraction, object], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("empty sum")
        if len({c.degree for _, c in self.terms}) != 1:
            raise ValueError("summands must share a degree")

    @property
    def degree(self) -> int:
        return self.terms[0][1].degree


def wedge(a, b) -> Wedge:
    return Wedge(a, b)


def d(s: int, c) -> D:
    if s < 0:
        raise ValueError("s must be non-negative")
    return D(s, c)


def alpha_star(c) -> AlphaStar:
    return AlphaStar(c)


def phi_bar(c) -> PhiBar:
    return PhiBar(c)


def combo(*terms) -> Sum:
    """combo((1, a), (-1, b)) is a - b."""
    return Sum(tuple((Fraction(w), c) for w, c in terms))


def describe(c) -> str:
    if isinstance(c, Function):
        return f"f[{c.poly}]"
    if isinstance(c, Basis):
        comps = ", ".join(f"{''.join(str(i + 1) for i in idx)}:{v}" for idx, v in c.components)
        return f"form{c.k}^{c.twist}{{{comps}}}"
    if isinstance(c, Wedge):
        return f"({describe(c.lhs)} ^ {describe(c.rhs)})"
    if isinstance(c, D):
        return f"d{c.s}({describe(c.child)})"
    if isinstance(c, AlphaStar):
        return f"alpha*({describe(c.child)})"
    if isinstance(c, PhiBar):
        return f"phibar*({describe(c.child)})"
    if isinstance(c, Sum):
        return " + ".join(f"{w}*{describe(t)}" for w, t in c.terms)
    raise TypeError(c)


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------

def _shuffles(n: int, k: int):
    """(k, n-k)-shuffles as (first block, second block, sign)."""
    for first in combinations(range(n), k):
        rest = tuple(i for i in range(n) if i not in first)
        perm = first + rest
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        yield first, rest, (-1) ** inv


class Evaluator:
    def __init__(self, ab: HomAlgebroid):
        self.ab = ab
        self._memo: dict = {}

    def phi(self, e: int, f: Poly) -> Poly:
        return apply_phi(self.ab.base, e, f)

    def evaluate(self, c, args: Sequence[Section]) -> Poly:
        args = tuple(args)
        if len(args) != c.degree:
            raise ValueError(f"cochain of degree {c.degree} evaluated on {len(args)} sections")
        key = (c, args)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._eval(c, args)
            self._memo[key] = hit
        return hit

    def _eval(self, c, args) -> Poly:
        ab = self.ab
        if isinstance(c, Function):
            return c.poly
        if isinstance(c, Basis):
            return self._eval_basis(c, args)
        if isinstance(c, Wedge):
            k = c.lhs.degree
            acc = ab.base.zero()
            for first, rest, sign in _shuffles(len(args), k):
                a = self.evaluate(c.lhs, [args[i] for i in first])
                if not a:
                    continue
                b = self.evaluate(c.rhs, [args[i] for i in rest])
                if b:
                    acc = acc + a * b if sign > 0 else acc - a * b
            return acc
        if isinstance(c, D):
            return sum(self.coboundary_terms(c.child, c.s, args).values(), ab.base.zero())
        if isinstance(c, AlphaStar):
            return self.phi(1, self.evaluate(c.child, [apply_alpha(ab, X) for X in args]))
        if isinstance(c, PhiBar):
            return self.phi(1, self.evaluate(c.child, args))
        if isinstance(c, Sum):
            acc = ab.base.zero()
            for w, t in c.terms:
                acc = acc + self.evaluate(t, args) * w
            return acc
        raise TypeError(f"not a cochain: {c!r}")

    def _eval_basis(self, c: Basis, args) -> Poly:
        base = self.ab.base
        comps = dict(c.components)
        acc = base.zero()
        for idx, val in comps.items():
            if not val:
                continue
            # sum over permutations of idx assigned to the argument slots
            acc = acc + val * self._minor(idx, args, c.twist)
        return acc

    def _minor(self, idx, args, twist) -> Poly:
        """det[ phi*^twist(args[a].coefficients[idx[b]]) ]."""
        base = self.ab.base
        k = len(idx)
        if k == 0:
            return base.one()
        rows = [[self.phi(twist, args[a].coefficients[i]) for i in idx] for a in range(k)]
        return poly_det(rows, base.variables)

    def coboundary_terms(self, eta, s: int, args) -> dict:
        """The individual terms of d^s eta on ``args``: keys ("anchor", i) and
        ("bracket", a, b), each already signed."""
        ab = self.ab
        if not ab.base.is_involution:
            raise Refusal("d^s needs an involutive base map", Report("d^s", [check_involution(ab.base).items[0]]))
        n = len(args)
        k = n - 1
        if eta.degree != k:
            raise ValueError(f"d of a degree-{eta.degree} cochain evaluated on {n} sections")
        alpha_args = [apply_alpha(ab, X) for X in args]
        terms = {}
        for i in range(n):
            inner = self.evaluate(eta, alpha_args[:i] + alpha_args[i + 1:])
            v = self.phi(k + 1 + s, apply_anchor(ab, args[i], self.phi(-k - 2 - s, inner)))
            terms[("anchor", i)] = v if i % 2 == 0 else -v
        for a in range(n):
            for b in range(a + 1, n):
                others = [alpha_args[c] for c in range(n) if c not in (a, b)]
                v = self.evaluate(eta, [bracket(ab, args[a], args[b])] + others)
                terms[("bracket", a, b)] = v if (a + b) % 2 == 0 else -v
        return terms


def evaluate(ab: HomAlgebroid, c, args: Sequence[Section]) -> Poly:
    return Evaluator(ab).evaluate(c, args)


# ----------------------------------------------------------------------
# Built-in generators and literals
# ----------------------------------------------------------------------

def builtin_cochains(ab: HomAlgebroid, degree: int) -> list:
    """A small family of cochains of each degree 0..2, including ones that are
    not function-linear (built with d)."""
    base = ab.base
    gens = base.generators or (base.one(),)
    x, y = gens[0], gens[-1]
    if degree == 0:
        return [Function(x), Function(x * y + 1)]
    if degree == 1:
        out = [Basis.dual(base, 0), d(0, Function(x * x))]
        out.append(Basis.make(1, {(ab.rank - 1,): x + 1}, twist=1))
        return out
    if degree == 2:
        out = [Wedge(Basis.dual(base, 0), d(0, Function(x))), d(1, Basis.dual(base, 0))]
        if ab.rank >= 2:
            out.append(Basis.make(2, {(0, 1): y}))
        return out
    raise ValueError("builtin cochains exist for degrees 0..2")


def cochain_from_json(data: dict, ab: HomAlgebroid):
    """{"kind": "function", "poly": "x^2"} or
    {"kind": "basis", "k": 1, "twist": 0, "components": {"1": "1"}}; component
    keys are 1-based increasing indices separated by commas."""
    kind = data.get("kind")
    if kind == "function":
        return Function(parse_poly(str(data["poly"]), ab.base.variables))
    if kind == "basis":
        k = int(data["k"])
        comps = {}
        for key, val in data.get("components", {}).items():
            idx = tuple(int(p) - 1 for p in str(key).replace(" ", ",").split(",") if p)
            if any(not 0 <= i < ab.rank for i in idx):
                raise ValueError(f"component index {key!r} out of range 1..{ab.rank}")
            comps[idx] = parse_poly(str(val), ab.base.variables)
        return Basis.make(k, comps, int(data.get("twist", 0)))
    raise ValueError(f"unknown cochain kind {kind!r}")


# ----------------------------------------------------------------------
# Identity checks
# ----------------------------------------------------------------------

def _compare(ev: Evaluator, name: str, lhs, rhs, tuples, detail: str = "") -> CheckItem:
    n = 0
    for args in tuples:
        n += 1
        a, b = ev.evaluate(lhs, args), ev.evaluate(rhs, args)
        if a != b:
            return CheckItem(name, False, {"args": [X.to_strings() for X in args], "lhs": str(a), "rhs": str(b),
                                           "residual": str(a - b)}, detail)
    return CheckItem(name, True, None, detail or f"{n} tuples")


def leibniz_sides(a, b, s: int):
    """Both sides of d^s(a ^ b) = d^(s+l)a ^ phibar*alpha*(b) + (-1)^k phibar*alpha*(a) ^ d^(s+k)b."""
    k, l = a.degree, b.degree
    lhs = d(s, Wedge(a, b))
    rhs = combo((1, Wedge(d(s + l, a), phi_bar(alpha_star(b)))),
                ((-1) ** k, Wedge(phi_bar(alpha_star(a)), d(s + k, b))))
    return lhs, rhs


def check_leibniz(ab: HomAlgebroid, a, b, s: int, cfg: RunConfig | None = None, ev: Evaluator | None = None) -> Report:
    cfg = cfg or RunConfig()
    ev = ev or Evaluator(ab)
    lhs, rhs = leibniz_sides(a, b, s)
    tuples = sample_tuples(ab, lhs.degree, cfg, "leibniz")
    rep = Report("graded Leibniz rule", meta={"s": s, "a": describe(a), "b": describe(b)})
    rep.add(_compare(ev, "graded_leibniz", lhs, rhs, tuples))
    return rep


def check_commutation(ab: HomAlgebroid, c, s: int, cfg: RunConfig | None = None, ev: Evaluator | None = None) -> Report:
    cfg = cfg or RunConfig()
    ev = ev or Evaluator(ab)
    tuples = sample_tuples(ab, c.degree + 1, cfg, "commutation")
    rep = Report("differential commutation", meta={"s": s, "cochain": describe(c)})
    rep.add(_compare(ev, "alpha_star_commutes_with_d", alpha_star(d(s, c)), d(s, alpha_star(c)), tuples))
    rep.add(_compare(ev, "phi_bar_shifts_d", phi_bar(d(s, c)), d(s + 1, phi_bar(c)), tuples))
    return rep


def check_d_squared(ab: HomAlgebroid, c, s: int, cfg: RunConfig | None = None, ev: Evaluator | None = None) -> CheckItem:
    cfg = cfg or RunConfig()
    ev = ev or Evaluator(ab)
    dd = d(s, d(s, c))
    zero = combo((0, dd))
    return _compare(ev, f"d{s}_squared_zero", dd, zero, sample_tuples(ab, dd.degree, cfg, "dsq"))


# which differential each variant's linearity conditions are stated for
LINEARITY_DEGREE = {"A": 0, "B": 1}
LINEARITY_KINDS = ("function", "form")


def linearity_item(ab: HomAlgebroid, variant: str, kind: str, cfg: RunConfig | None = None,
                   ev: Evaluator | None = None) -> CheckItem:
    """A linearity condition of the given variant, applied to any algebroid,
    so that a family can be tested against the other definition's conditions.
    kind "function": d^s f is function-linear; kind "form": d^s of a form is
    phi*-linear in each argument."""
    cfg = cfg or RunConfig()
    ev = ev or Evaluator(ab)
    if kind not in LINEARITY_KINDS:
        raise ValueError(f"kind must be one of {LINEARITY_KINDS}")
    s = LINEARITY_DEGREE[variant]
    which = f"{variant}:{kind}"
    base = ab.base
    P = lambda h: apply_phi(base, 1, h)
    rng = cfg.rng(f"linearity:{which}")
    gs = list(base.generators) + [random_poly(base, rng, cfg.max_degree) for _ in range(cfg.trials)]
    name = f"d{s}_function_is_form" if kind == "function" else f"d{s}_of_form_twisted_linear"
    n = 0
    if kind == "function":
        for f in base.generators or (base.one(),):
            df = d(s, Function(f))
            for X in ab.basis_sections():
                for g in gs:
                    n += 1
                    lhs, rhs = ev.evaluate(df, [X.scale(g)]), g * ev.evaluate(df, [X])
                    if lhs != rhs:
                        return CheckItem(name, False, {"f": str(f), "g": str(g), "X": X.to_strings(),
                                                       "lhs": str(lhs), "rhs": str(rhs)})
    else:
        pairs = sample_tuples(ab, 2, cfg, f"linearity:{which}")
        for i in range(ab.rank):
            dxi = d(s, Basis.dual(base, i))
            for X1, X2 in pairs:
                for g in gs:
                    n += 1
                    lhs, rhs = ev.evaluate(dxi, [X1.scale(g), X2]), P(g) * ev.evaluate(dxi, [X1, X2])
                    if lhs != rhs:
                        return CheckItem(name, False, {"xi": f"e{i + 1}*", "f": str(g), "X1": X1.to_strings(),
                                                       "X2": X2.to_strings(), "lhs": str(lhs), "rhs": str(rhs)})
    return CheckItem(name, True, None, f"{n} cases")


def check_linearity(ab: HomAlgebroid, kind: str, cfg: RunConfig | None = None) -> Report:
    """Linearity condition for the algebroid's own variant."""
    return Report(f"{kind} linearity, variant {ab.variant}", [linearity_item(ab, ab.variant, kind, cfg)])
