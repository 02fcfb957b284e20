"""Finite-dimensional Hom-Lie algebras, their representations, and the
twisted coboundary family on vector-valued cochains.

Matrices act on coordinate columns: ``alpha[r][c]`` is the r-th coordinate
of alpha(e_c). Indices are 0-based in code and 1-based in reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .report import CheckItem, Refusal, Report

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


# -- small exact linear algebra ---------------------------------------

def as_matrix(rows) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def mat_add(a: Matrix, b: Matrix, scale: Fraction = Fraction(1)) -> Matrix:
    return tuple(tuple(x + scale * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(x * c for x in row) for row in a)


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def mat_inverse(a: Matrix) -> Matrix | None:
    """Gauss-Jordan over the rationals; None when singular."""
    n = len(a)
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def det(a: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    work = [list(map(Fraction, row)) for row in a]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            sign = -sign
        p = work[col][col]
        result *= p
        for r in range(col + 1, n):
            if work[r][col] != 0:
                f = work[r][col] / p
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return sign * result


def mat_pow(a: Matrix, e: int, inverse: Matrix | None = None) -> Matrix:
    if e < 0:
        if inverse is None:
            inverse = mat_inverse(a)
            if inverse is None:
                raise Refusal("negative power of a singular matrix")
        a, e = inverse, -e
    out = identity(len(a))
    for _ in range(e):
        out = mat_mul(out, a)
    return out


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def _fmt_vec(v) -> list[str]:
    return [str(x) for x in v]


def _fmt_mat(m) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


# -- algebra and representation ---------------------------------------

@dataclass(frozen=True)
class HomLieAlgebra:
    dim: int
    c: tuple  # c[i][j][k]: coefficient of e_k in [e_i, e_j]
    alpha: Matrix

    @classmethod
    def from_data(cls, c, alpha) -> "HomLieAlgebra":
        dim = len(alpha)
        cc = tuple(tuple(tuple(Fraction(v) for v in cij) for cij in ci) for ci in c)
        if len(cc) != dim or any(len(ci) != dim or any(len(cij) != dim for cij in ci) for ci in cc):
            raise ValueError("structure constants must be dim x dim x dim")
        return cls(dim, cc, as_matrix(alpha))

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, alpha=None) -> "HomLieAlgebra":
        """``brackets`` maps 1-based pairs (i, j) to coordinate lists of
        [e_i, e_j]; the antisymmetric partner is filled in."""
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), vec in brackets.items():
            for k, v in enumerate(vec):
                c[i - 1][j - 1][k] += Fraction(v)
                c[j - 1][i - 1][k] -= Fraction(v)
        return cls.from_data(c, identity(dim) if alpha is None else alpha)

    def bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                w = ui * vj
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] += w * ck
        return tuple(out)

    def apply_alpha(self, u: Sequence[Fraction]) -> Vector:
        return mat_vec(self.alpha, u)

    def basis(self, i: int) -> Vector:
        return unit(self.dim, i)


@dataclass(frozen=True)
class Representation:
    algebra: HomLieAlgebra
    dimV: int
    rho: tuple[Matrix, ...]
    beta: Matrix
    _beta_inv: Matrix | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_data(cls, algebra: HomLieAlgebra, rho, beta) -> "Representation":
        beta = as_matrix(beta)
        rho = tuple(as_matrix(m) for m in rho)
        if len(rho) != algebra.dim:
            raise ValueError("need one rho matrix per basis element")
        return cls(algebra, len(beta), rho, beta, mat_inverse(beta))

    @classmethod
    def trivial(cls, algebra: HomLieAlgebra, dimV: int = 1, beta=None) -> "Representation":
        beta = identity(dimV) if beta is None else beta
        return cls.from_data(algebra, [zeros(dimV)] * algebra.dim, beta)

    @property
    def beta_inv(self) -> Matrix:
        if self._beta_inv is None:
            raise Refusal("beta is singular; the coboundary family needs an invertible beta")
        return self._beta_inv

    def rho_of(self, u: Sequence[Fraction]) -> Matrix:
        out = zeros(self.dimV)
        for i, ui in enumerate(u):
            if ui:
                out = mat_add(out, self.rho[i], ui)
        return out


def yau_twist(c, alpha) -> HomLieAlgebra:
    """Twist a Lie algebra by a bracket endomorphism: [x,y]' = alpha[x,y]."""
    lie = HomLieAlgebra.from_data(c, identity(len(alpha)))
    pre = Report("yau_twist preconditions")
    pre.extend(check_hom_jacobi(lie))
    pre.extend(check_alpha_morphism(HomLieAlgebra(lie.dim, lie.c, as_matrix(alpha))))
    if not pre.passed:
        raise Refusal("input is not a Lie algebra with a bracket endomorphism", pre)
    A = as_matrix(alpha)
    twisted = tuple(
        tuple(mat_vec(A, lie.c[i][j]) for j in range(lie.dim)) for i in range(lie.dim)
    )
    return HomLieAlgebra(lie.dim, twisted, A)


def adjoint_rep(g: HomLieAlgebra) -> Representation:
    """rho(x) = [x, .], beta = alpha. Needs alpha invertible."""
    if mat_inverse(g.alpha) is None:
        raise Refusal("adjoint representation needs an invertible alpha")
    rho = []
    for i in range(g.dim):
        cols = [g.bracket(g.basis(i), g.basis(j)) for j in range(g.dim)]
        rho.append(tuple(tuple(cols[j][r] for j in range(g.dim)) for r in range(g.dim)))
    return Representation.from_data(g, rho, g.alpha)


# -- checkers -----------------------------------------------------------

def check_antisymmetry(g: HomLieAlgebra) -> CheckItem:
    bad = []
    for i in range(g.dim):
        for j in range(i, g.dim):
            for k in range(g.dim):
                if g.c[i][j][k] != -g.c[j][i][k]:
                    bad.append([i + 1, j + 1, k + 1])
    return CheckItem("antisymmetry", not bad, {"entries": bad[:10]} if bad else None)


def check_hom_jacobi(g: HomLieAlgebra) -> Report:
    report = Report("hom-Lie algebra: Hom-Jacobi")
    anti = report.add(check_antisymmetry(g))
    if not anti.passed:
        report.add(CheckItem("hom_jacobi", False, detail="skipped: antisymmetry fails"))
        return report
    bad = []
    for i, j, k in combinations(range(g.dim), 3):
        x, y, z = g.basis(i), g.basis(j), g.basis(k)
        total = [Fraction(0)] * g.dim
        for a, b, cc in ((x, y, z), (y, z, x), (z, x, y)):
            term = g.bracket(g.apply_alpha(a), g.bracket(b, cc))
            total = [t + v for t, v in zip(total, term)]
        if any(total):
            bad.append({"triple": [i + 1, j + 1, k + 1], "residual": _fmt_vec(total)})
    report.add(CheckItem("hom_jacobi", not bad, {"violations": bad} if bad else None))
    return report


def check_alpha_morphism(g: HomLieAlgebra) -> Report:
    report = Report("hom-Lie algebra: alpha morphism")
    bad = []
    for i, j in combinations(range(g.dim), 2):
        lhs = g.apply_alpha(g.bracket(g.basis(i), g.basis(j)))
        rhs = g.bracket(g.apply_alpha(g.basis(i)), g.apply_alpha(g.basis(j)))
        if lhs != rhs:
            bad.append({"pair": [i + 1, j + 1], "lhs": _fmt_vec(lhs), "rhs": _fmt_vec(rhs)})
    report.add(CheckItem("alpha_morphism", not bad, {"violations": bad} if bad else None))
    return report


def check_representation(r: Representation) -> Report:
    if r._beta_inv is None:
        raise Refusal("beta is singular")
    g = r.algebra
    report = Report("representation axioms")
    bad1 = []
    for i in range(g.dim):
        lhs = mat_mul(r.rho_of(g.apply_alpha(g.basis(i))), r.beta)
        rhs = mat_mul(r.beta, r.rho[i])
        if lhs != rhs:
            bad1.append({"basis": i + 1, "residual": _fmt_mat(mat_add(lhs, rhs, Fraction(-1)))})
    report.add(CheckItem("rep_alpha_beta", not bad1, {"violations": bad1} if bad1 else None))
    bad2 = []
    for i, j in combinations(range(g.dim), 2):
        x, y = g.basis(i), g.basis(j)
        lhs = mat_mul(r.rho_of(g.bracket(x, y)), r.beta)
        rhs = mat_add(
            mat_mul(r.rho_of(g.apply_alpha(x)), r.rho[j]),
            mat_mul(r.rho_of(g.apply_alpha(y)), r.rho[i]),
            Fraction(-1),
        )
        if lhs != rhs:
            bad2.append({"pair": [i + 1, j + 1], "residual": _fmt_mat(mat_add(lhs, rhs, Fraction(-1)))})
    report.add(CheckItem("rep_bracket", not bad2, {"violations": bad2} if bad2 else None))
    return report


# -- cochains and the coboundary family --------------------------------

@dataclass(frozen=True)
class VectorCochain:
    """Alternating k-linear map g^k -> V stored on increasing index tuples."""

    degree: int
    dimV: int
    values: dict  # increasing tuple -> Vector; missing tuples are zero

    @classmethod
    def basis(cls, k: int, indices: Sequence[int], dimV: int, m: int) -> "VectorCochain":
        return cls(k, dimV, {tuple(indices): unit(dimV, m)})

    @classmethod
    def zero(cls, k: int, dimV: int) -> "VectorCochain":
        return cls(k, dimV, {})

    def value(self, idx: tuple[int, ...]) -> Vector:
        return self.values.get(idx, tuple(Fraction(0) for _ in range(self.dimV)))

    def is_zero(self) -> bool:
        return all(not any(v) for v in self.values.values())

    def __add__(self, other: "VectorCochain") -> "VectorCochain":
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = tuple(a + b for a, b in zip(self.value(k), v))
        return VectorCochain(self.degree, self.dimV, out)

    def scale(self, c) -> "VectorCochain":
        c = Fraction(c)
        return VectorCochain(self.degree, self.dimV, {k: tuple(c * x for x in v) for k, v in self.values.items()})

    def normalized(self) -> dict:
        return {k: v for k, v in self.values.items() if any(v)}

    def __eq__(self, other):
        if not isinstance(other, VectorCochain):
            return NotImplemented
        return (self.degree, self.dimV, self.normalized()) == (other.degree, other.dimV, other.normalized())

    def evaluate(self, vectors: Sequence[Sequence[Fraction]]) -> Vector:
        """Multilinear alternating evaluation via k x k minors."""
        if len(vectors) != self.degree:
            raise ValueError(f"expected {self.degree} arguments, got {len(vectors)}")
        out = [Fraction(0)] * self.dimV
        for idx, val in self.values.items():
            if not any(val):
                continue
            minor = [[vectors[col][row] for col in range(self.degree)] for row in idx]
            d = det(minor)
            if d:
                for m in range(self.dimV):
                    out[m] += d * val[m]
        return tuple(out)


def coboundary_vec(r: Representation, s: int, eta: VectorCochain) -> VectorCochain:
    if s < 0:
        raise ValueError("s must be non-negative")
    g = r.algebra
    k = eta.degree
    left = mat_pow(r.beta, k + 1 + s)
    right = mat_pow(r.beta, -(k + 2 + s), r.beta_inv)
    alphas = [g.apply_alpha(g.basis(i)) for i in range(g.dim)]
    out = {}
    for J in combinations(range(g.dim), k + 1):
        total = [Fraction(0)] * r.dimV
        for pos, i in enumerate(J):
            rest = [alphas[j] for p, j in enumerate(J) if p != pos]
            val = mat_vec(right, eta.evaluate(rest))
            if not any(val):
                continue
            val = mat_vec(left, mat_vec(r.rho[i], val))
            sign = -1 if pos % 2 else 1
            total = [t + sign * v for t, v in zip(total, val)]
        for a, b in combinations(range(k + 1), 2):
            br = g.bracket(g.basis(J[a]), g.basis(J[b]))
            rest = [alphas[j] for p, j in enumerate(J) if p not in (a, b)]
            val = eta.evaluate([br] + rest)
            sign = -1 if (a + b) % 2 else 1
            total = [t + sign * v for t, v in zip(total, val)]
        if any(total):
            out[J] = tuple(total)
    return VectorCochain(k + 1, r.dimV, out)


def check_d_squared_vec(r: Representation, s: int, max_k: int) -> Report:
    g = r.algebra
    report = Report(f"d^{s} o d^{s} = 0", meta={"s": s, "max_k": max_k})
    bad = []
    count = 0
    for k in range(0, max_k + 1):
        for I in combinations(range(g.dim), k):
            for m in range(r.dimV):
                eta = VectorCochain.basis(k, I, r.dimV, m)
                dd = coboundary_vec(r, s, coboundary_vec(r, s, eta))
                count += 1
                if not dd.is_zero():
                    bad.append({
                        "cochain": {"degree": k, "indices": [i + 1 for i in I], "component": m + 1},
                        "residual": {",".join(str(i + 1) for i in key): _fmt_vec(v) for key, v in dd.normalized().items()},
                    })
    report.add(CheckItem(f"d{s}_squared_zero", not bad, {"violations": bad[:5]} if bad else None,
                         detail=f"{count} basis cochains"))
    return report


# -- serialization --------------------------------------------------------

def homlie_from_json(data: dict):
    """Returns (algebra, representation-or-None)."""
    g = HomLieAlgebra.from_data(data["c"], data["alpha"])
    if int(data["dim"]) != g.dim:
        raise ValueError(f"dim field {data['dim']} does not match alpha size {g.dim}")
    if "rho" in data:
        rep = Representation.from_data(g, data["rho"], data["beta"])
        if int(data.get("dimV", rep.dimV)) != rep.dimV:
            raise ValueError("dimV does not match beta size")
        return g, rep
    return g, None


def homlie_to_json(g: HomLieAlgebra, rep: Representation | None = None) -> dict:
    out = {
        "dim": g.dim,
        "c": [[[str(v) for v in cij] for cij in ci] for ci in g.c],
        "alpha": _fmt_mat(g.alpha),
    }
    if rep is not None:
        out.update({"dimV": rep.dimV, "rho": [_fmt_mat(m) for m in rep.rho], "beta": _fmt_mat(rep.beta)})
    return out
