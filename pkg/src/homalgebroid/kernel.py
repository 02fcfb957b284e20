"""Exact polynomial arithmetic over the rationals, base algebras with an
involutive pullback, and twisted derivations.

Polynomials are immutable; every operation returns a new value in canonical
form (no zero coefficients stored). Equality is structural.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Mapping, Sequence, Union

from .report import CheckItem, Report

Number = Union[int, Fraction]


def _grlex_key(exp: tuple[int, ...]):
    return (sum(exp), exp)


class Poly:
    """Multivariate polynomial with ``Fraction`` coefficients.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    coefficients.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple[int, ...], Number] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for variables {self.variables}")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, variables: Sequence[str], c: Number) -> "Poly":
        c = Fraction(c)
        variables = tuple(variables)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        i = variables.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls._raw(variables, {exp: Fraction(1)})

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls._raw(tuple(variables), {})

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.variables, other)
        return NotImplemented

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp)
            if v is None:
                out[exp] = c
            else:
                v = v + c
                if v:
                    out[exp] = v
                else:
                    del out[exp]
        return Poly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly.zero(self.variables)
            return Poly._raw(self.variables, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly.zero(self.variables)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus and substitution -------------------------------------
    def diff(self, index: int) -> "Poly":
        out = {}
        for exp, c in self.terms.items():
            e = exp[index]
            if e:
                ne = exp[:index] + (e - 1,) + exp[index + 1:]
                out[ne] = c * e
        return Poly._raw(self.variables, out)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Simultaneously replace variable i by ``images[i]``."""
        if len(images) != len(self.variables):
            raise ValueError("need one image per variable")
        if not self.terms:
            return self
        target_vars = images[0].variables if images else self.variables
        linear = _monomial_images(images)
        if linear is not None:
            # each image is c_i * (one variable): permute exponents, scale coefficients
            out = {}
            for exp, c in self.terms.items():
                ne = [0] * len(target_vars)
                for (coef, j), e in zip(linear, exp):
                    if e:
                        ne[j] += e
                        c = c * coef ** e
                ne = tuple(ne)
                v = out.get(ne, 0) + c
                if v:
                    out[ne] = v
                else:
                    out.pop(ne, None)
            return Poly._raw(target_vars, out)
        powers: list[dict[int, Poly]] = [{} for _ in images]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        total = Poly.zero(target_vars)
        for exp, c in self.terms.items():
            term = Poly.const(target_vars, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * pw(i, e)
            total = total + term
        return total

    # -- inspection ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.variables, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exp) if e
            )
            if not mono:
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            pieces.append(s)
        out = pieces[0]
        for s in pieces[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={list(self.variables)})"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if a.variables != b.variables:
        raise ValueError(f"variable mismatch: {a.variables} vs {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------

class PolyParseError(ValueError):
    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise PolyParseError(text, start, f"unexpected character {ch!r}")
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse ``3*x^2 - 1/2*x*y + 1`` style text over ``variables``.

    Parentheses and unary signs are accepted. Errors carry the character
    position of the offending token.
    """
    variables = tuple(variables)
    toks = _tokenize(str(text))
    i = 0

    def peek():
        return toks[i]

    def take(kind=None):
        nonlocal i
        t = toks[i]
        if kind is not None and t[0] != kind:
            raise PolyParseError(text, t[2], f"expected {kind!r}, found {t[1] or 'end of input'!r}")
        i += 1
        return t

    def expr():
        sign = 1
        while peek()[0] in "+-":
            if take()[0] == "-":
                sign = -sign
        acc = term() * sign
        while peek()[0] in ("+", "-"):
            op = take()[0]
            s = 1 if op == "+" else -1
            while peek()[0] in "+-":
                if take()[0] == "-":
                    s = -s
            acc = acc + term() * s
        return acc

    def term():
        acc = factor()
        while peek()[0] == "*":
            take()
            acc = acc * factor()
        return acc

    def factor():
        kind, val, pos = peek()
        if kind == "num":
            take()
            if "/" in val and int(val.split("/")[1]) == 0:
                raise PolyParseError(text, pos, "zero denominator")
            base = Poly.const(variables, Fraction(val))
        elif kind == "id":
            take()
            if val not in variables:
                raise PolyParseError(text, pos, f"unknown variable {val!r}")
            base = Poly.var(variables, val)
        elif kind == "(":
            take()
            base = expr()
            take(")")
        else:
            raise PolyParseError(text, pos, f"expected a number, variable or '(', found {val or 'end of input'!r}")
        if peek()[0] == "^":
            take()
            e = take("num")
            if "/" in e[1]:
                raise PolyParseError(text, e[2], "exponent must be a non-negative integer")
            base = base ** int(e[1])
        return base

    if toks[0][0] == "end":
        raise PolyParseError(text, 0, "empty polynomial")
    result = expr()
    t = peek()
    if t[0] != "end":
        raise PolyParseError(text, t[2], f"unexpected {t[1]!r}")
    return result


# ----------------------------------------------------------------------
# Base geometry
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BaseGeometry:
    """Polynomial base algebra with a pullback endomorphism given by the
    images of the variables."""

    variables: tuple[str, ...]
    phi_images: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.variables) != len(self.phi_images):
            raise ValueError("need one pullback image per variable")
        for p in self.phi_images:
            if p.variables != self.variables:
                raise ValueError("pullback images must live over the base variables")

    @classmethod
    def from_strings(cls, variables: Sequence[str], phi: Sequence[str]) -> "BaseGeometry":
        variables = tuple(variables)
        return cls(variables, tuple(parse_poly(s, variables) for s in phi))

    @classmethod
    def identity(cls, variables: Sequence[str]) -> "BaseGeometry":
        variables = tuple(variables)
        return cls(variables, tuple(Poly.var(variables, v) for v in variables))

    def poly(self, text_or_value) -> Poly:
        if isinstance(text_or_value, Poly):
            if text_or_value.variables != self.variables:
                raise ValueError("variable mismatch")
            return text_or_value
        if isinstance(text_or_value, (int, Fraction)):
            return Poly.const(self.variables, text_or_value)
        return parse_poly(text_or_value, self.variables)

    def zero(self) -> Poly:
        return Poly.zero(self.variables)

    def one(self) -> Poly:
        return Poly.const(self.variables, 1)

    def var(self, name: str) -> Poly:
        return Poly.var(self.variables, name)

    @property
    def generators(self) -> list[Poly]:
        return [Poly.var(self.variables, v) for v in self.variables]

    @cached_property
    def is_identity(self) -> bool:
        return all(img == g for img, g in zip(self.phi_images, self.generators))

    @cached_property
    def is_involution(self) -> bool:
        return check_involution(self).passed

    def phi(self, f: Poly, e: int = 1) -> Poly:
        return apply_phi(self, e, f)


def check_involution(base: BaseGeometry) -> Report:
    report = Report("involution")
    bad = {}
    for name, img in zip(base.variables, base.phi_images):
        double = img.substitute(base.phi_images)
        if double != Poly.var(base.variables, name):
            bad[name] = str(double)
    report.add(CheckItem("phi_squared_is_identity", not bad, {"double_images": bad} if bad else None))
    return report


def _monomial_images(images):
    """[(c_i, j_i)] when every image is c_i * x_{j_i}, else None."""
    out = []
    for img in images:
        if len(img.terms) != 1:
            return None
        (exp, c), = img.terms.items()
        if sum(exp) != 1:
            return None
        out.append((c, exp.index(1)))
    return out


@lru_cache(maxsize=65536)
def _pullback(base: "BaseGeometry", f: Poly) -> Poly:
    return f.substitute(base.phi_images)


def apply_phi(base: BaseGeometry, e: int, f: Poly) -> Poly:
    """(phi*)^e f. Powers other than 0 and 1 are reduced mod 2, which is
    only legitimate once the pullback is known to be an involution."""
    if f.variables != base.variables:
        raise ValueError(f"variable mismatch: {f.variables} vs {base.variables}")
    if e not in (0, 1) and not base.is_involution:
        raise ValueError(f"(phi*)^{e} needs an involutive pullback")
    if e % 2 == 0 or base.is_identity:
        return f
    return _pullback(base, f)


@dataclass(frozen=True)
class TwistedDerivation:
    """f -> (phi*)^twist ( sum_j coefficients[j] * df/dx_j )."""

    base: BaseGeometry
    coefficients: tuple[Poly, ...]
    twist: int = 0

    def __post_init__(self):
        if len(self.coefficients) != len(self.base.variables):
            raise ValueError("need one coefficient per base variable")

    def __call__(self, f: Poly) -> Poly:
        return apply_derivation(self, f)


def apply_derivation(D: TwistedDerivation, f: Poly) -> Poly:
    if f.variables != D.base.variables:
        raise ValueError("variable mismatch")
    acc = D.base.zero()
    for j, c in enumerate(D.coefficients):
        if c:
            acc = acc + c * f.diff(j)
    return apply_phi(D.base, D.twist, acc)


# ----------------------------------------------------------------------
# Polynomial matrices (small; used for invertibility of alpha)
# ----------------------------------------------------------------------

def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def poly_det(m: Sequence[Sequence[Poly]], variables: Sequence[str]) -> Poly:
    n = len(m)
    total = Poly.zero(variables)
    for p in permutations(range(n)):
        term = Poly.const(variables, _perm_sign(p))
        for i in range(n):
            term = term * m[i][p[i]]
            if not term:
                break
        total = total + term
    return total


def poly_matrix_inverse(m: Sequence[Sequence[Poly]], variables: Sequence[str]) -> list[list[Poly]] | None:
    """Inverse over the polynomial ring, or None when the determinant is not
    a nonzero constant."""
    n = len(m)
    det = poly_det(m, variables)
    if not det or not det.is_constant():
        return None
    inv_det = 1 / det.constant_value()
    out = [[Poly.zero(variables)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            cof = poly_det(minor, variables) if minor else Poly.const(variables, 1)
            out[j][i] = cof * (inv_det * (-1) ** (i + j))
    return out
