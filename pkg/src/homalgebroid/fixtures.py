"""Built-in instances.

Algebroids:

* ``twisted-line``: base Q[x], phi*: x -> -x, rank 1, alpha(e) = -e,
  rho(e)(f) = phi*(f'), [e, e] = 0. This is the tangent algebroid of the
  line twisted by the pushforward of x -> -x.
* ``tangent-line``: the classical tangent algebroid of the line (alpha, phi = id).
* ``tangent-plane``: classical tangent algebroid of the plane, rank 2.
* ``action-line``: classical action algebroid of aff2 on the line,
  rho(e1) = -x d/dx, rho(e2) = d/dx, [e1, e2] = e2.
* ``twisted-action``: ``action-line`` twisted by x -> -x; alpha = diag(1, -1),
  [e1, e2] = -e2.
* ``swap-plane``: tangent algebroid of the plane twisted by (x, y) -> (y, x).
* ``projected-line``: rank 2 over the line with alpha = diag(1, 0), a valid
  structure whose alpha is not invertible.

Hom-Lie algebras: ``heisenberg`` (h3, alpha = id) and ``aff2``
([e1, e2] = e2, alpha = diag(1, 2)), both with their adjoint representation.
"""
from __future__ import annotations

from fractions import Fraction

from .algebroid import HomAlgebroid, Section
from .homlie import HomLieAlgebra, Representation, adjoint_rep, as_matrix, mat_inverse, yau_twist
from .kernel import BaseGeometry


def twisted_line(variant: str = "A") -> HomAlgebroid:
    base = BaseGeometry.from_strings(["x"], ["-x"])
    return HomAlgebroid.from_data(base, [["-1"]], [["1"]], [[["0"]]], variant)


def tangent_line(variant: str = "A") -> HomAlgebroid:
    base = BaseGeometry.identity(["x"])
    return HomAlgebroid.from_data(base, [["1"]], [["1"]], [[["0"]]], variant)


def tangent_plane(variant: str = "A") -> HomAlgebroid:
    base = BaseGeometry.identity(["x", "y"])
    return HomAlgebroid.from_data(
        base, [["1", "0"], ["0", "1"]], [["1", "0"], ["0", "1"]],
        [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]], variant,
    )


def action_line(variant: str = "A") -> HomAlgebroid:
    base = BaseGeometry.identity(["x"])
    return HomAlgebroid.from_data(
        base, [["1", "0"], ["0", "1"]], [["-x"], ["1"]],
        [[["0", "0"], ["0", "1"]], [["0", "-1"], ["0", "0"]]], variant,
    )


def twisted_action(variant: str = "A") -> HomAlgebroid:
    base = BaseGeometry.from_strings(["x"], ["-x"])
    return HomAlgebroid.from_data(
        base, [["1", "0"], ["0", "-1"]], [["-x"], ["1"]],
        [[["0", "0"], ["0", "-1"]], [["0", "1"], ["0", "0"]]], variant,
    )


def swap_plane(variant: str = "A") -> HomAlgebroid:
    base = BaseGeometry.from_strings(["x", "y"], ["y", "x"])
    return HomAlgebroid.from_data(
        base, [["0", "1"], ["1", "0"]], [["1", "0"], ["0", "1"]],
        [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]], variant,
    )


def projected_line(variant: str = "A") -> HomAlgebroid:
    """Tangent line plus an inert rank-one summand; alpha projects it away,
    so alpha is not invertible."""
    base = BaseGeometry.identity(["x"])
    return HomAlgebroid.from_data(
        base, [["1", "0"], ["0", "0"]], [["1"], ["0"]],
        [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]], variant,
    )


ALGEBROIDS = {
    "twisted-line": twisted_line,
    "tangent-line": tangent_line,
    "tangent-plane": tangent_plane,
    "action-line": action_line,
    "twisted-action": twisted_action,
    "swap-plane": swap_plane,
    "projected-line": projected_line,
}


# -- Hom-Lie algebras -----------------------------------------------------

def heisenberg_lie() -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets(3, {(1, 2): [0, 0, 1]})


def aff2(alpha=((1, 0), (0, 2))) -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets(2, {(1, 2): [0, 1]}, alpha)


def sl2_lie() -> HomLieAlgebra:
    # basis h, e, f: [h,e] = 2e, [h,f] = -2f, [e,f] = h
    return HomLieAlgebra.from_brackets(3, {(1, 2): [0, 2, 0], (1, 3): [0, 0, -2], (2, 3): [1, 0, 0]})


def so3_lie() -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets(3, {(1, 2): [0, 0, 1], (2, 3): [1, 0, 0], (3, 1): [0, 1, 0]})


def abelian(dim: int, alpha=None) -> HomLieAlgebra:
    return HomLieAlgebra.from_brackets(dim, {}, alpha)


def direct_sum(g: HomLieAlgebra, h: HomLieAlgebra) -> HomLieAlgebra:
    n, m = g.dim, h.dim
    d = n + m
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    alpha = [[Fraction(0)] * d for _ in range(d)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = g.c[i][j][k]
            alpha[i][j] = g.alpha[i][j]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                c[n + i][n + j][n + k] = h.c[i][j][k]
            alpha[n + i][n + j] = h.alpha[i][j]
    return HomLieAlgebra.from_data(c, alpha)


def homlie_builtin(name: str) -> tuple[HomLieAlgebra, Representation]:
    if name == "heisenberg":
        g = heisenberg_lie()
    elif name == "aff2":
        g = aff2()
    else:
        raise KeyError(name)
    return g, adjoint_rep(g)


HOMLIE = ("heisenberg", "aff2")


def _random_invertible(rng, n: int):
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if mat_inverse(as_matrix(m)) is not None:
            return m


def homlie_battery(rng) -> list[tuple[str, Representation]]:
    """Hom-Lie algebras of dimension <= 4 with trivial and adjoint
    representations; twists are admissible automorphisms drawn from ``rng``."""
    out: list[tuple[str, Representation]] = []

    def add(name, g, trivial_beta=None, adjoint=True):
        out.append((f"{name}/trivial", Representation.trivial(g, 1 if trivial_beta is None else len(trivial_beta),
                                                              trivial_beta)))
        if adjoint:
            out.append((f"{name}/adjoint", adjoint_rep(g)))

    for d in (1, 2, 3, 4):
        A = _random_invertible(rng, d)
        add(f"abelian{d}", yau_twist(abelian(d).c, A), trivial_beta=_random_invertible(rng, 2))
    add("aff2", aff2())
    lam = Fraction(rng.choice([2, 3, -1, Fraction(1, 2)]))
    mu = Fraction(rng.randint(-2, 2))
    add("aff2-yau", yau_twist(aff2(((1, 0), (0, 1))).c, [[1, 0], [mu, lam]]))
    add("h3", heisenberg_lie())
    a, b, c_, d = (Fraction(rng.choice([1, 2, -1])), Fraction(rng.randint(-1, 1)),
                   Fraction(rng.randint(-1, 1)), Fraction(rng.choice([1, 3, -2])))
    if a * d - b * c_ == 0:
        b = Fraction(0)
    p, q = Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-2, 2))
    add("h3-yau", yau_twist(heisenberg_lie().c, [[a, b, 0], [c_, d, 0], [p, q, a * d - b * c_]]))
    t = Fraction(rng.choice([2, 3, Fraction(1, 2), -1]))
    add("sl2-yau", yau_twist(sl2_lie().c, [[1, 0, 0], [0, t, 0], [0, 0, 1 / t]]))
    add("so3-yau", yau_twist(so3_lie().c, [[Fraction(3, 5), Fraction(-4, 5), 0],
                                            [Fraction(4, 5), Fraction(3, 5), 0], [0, 0, 1]]))
    # non-regular twist: projection onto e1 is a bracket endomorphism of h3
    add("h3-projection", yau_twist(heisenberg_lie().c, [[1, 0, 0], [0, 0, 0], [0, 0, 0]]),
        trivial_beta=[[2, 1], [0, 1]], adjoint=False)
    sum_alg = direct_sum(aff2(((1, 0), (0, 1))), abelian(1))
    add("aff2+Q-yau", yau_twist(sum_alg.c, [[1, 0, 0], [mu, lam, 0], [0, 0, Fraction(rng.choice([2, -3]))]]))
    h3q = direct_sum(heisenberg_lie(), abelian(1))
    add("h3+Q", h3q)
    aff_sq = direct_sum(aff2(((1, 0), (0, 1))), aff2(((1, 0), (0, 1))))
    add("aff2+aff2-yau", yau_twist(aff_sq.c, [[1, 0, 0, 0], [0, lam, 0, 0], [0, 0, 1, 0], [0, 0, mu or 1, 2]]))
    return out


# -- perturbations ----------------------------------------------------------

def perturb(ab: HomAlgebroid, field: str, index, value: str) -> HomAlgebroid:
    """Replace one structure coefficient. ``index`` is 1-based: (i, j, k) for
    the k-th coefficient of [e_i, e_j], (i, j) for anchor and alpha entries."""
    P = ab.base.poly
    idx = [i - 1 for i in index]
    if field == "bracket":
        i, j, k = idx
        rows = [list(r) for r in ab.bracket_sf]
        coeffs = list(rows[i][j].coefficients)
        coeffs[k] = P(value)
        rows[i][j] = Section(ab.base, coeffs)
        return ab.replace(bracket_sf=tuple(tuple(r) for r in rows))
    if field in ("anchor", "alpha"):
        i, j = idx
        attr = field + "_sf"
        rows = [list(r) for r in getattr(ab, attr)]
        rows[i][j] = P(value)
        return ab.replace(**{attr: tuple(tuple(r) for r in rows)})
    raise ValueError(f"unknown structure field {field!r}")


def parse_perturbation(text: str):
    """``bracket:1,1,1=1`` or ``anchor:1,1=x`` -> (field, index, value)."""
    try:
        head, value = text.split("=", 1)
        field, _, idx = head.partition(":")
        index = tuple(int(p) for p in idx.split(","))
    except ValueError:
        raise ValueError(f"perturbation must look like field:i,j[,k]=poly, got {text!r}") from None
    return field.strip(), index, value.strip()


# Ten single-entry perturbations of twisted-line, each breaking some axiom.
# Avoided on purpose: constant rescalings of the anchor and even anchors such
# as x^2, which keep the structure valid.
TWISTED_LINE_MUTATIONS = (
    ("anchor", (1, 1), "x"),
    ("anchor", (1, 1), "1 + x"),
    ("anchor", (1, 1), "x^3"),
    ("anchor", (1, 1), "2 + x"),
    ("alpha", (1, 1), "1"),
    ("alpha", (1, 1), "0"),
    ("alpha", (1, 1), "-2"),
    ("alpha", (1, 1), "x"),
    ("alpha", (1, 1), "-1 + x"),
    ("bracket", (1, 1, 1), "1"),
)
