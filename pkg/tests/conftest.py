from fractions import Fraction

from hypothesis import settings, strategies as st

from homalgebroid.kernel import Poly

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

COEFFS = st.sampled_from([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-3, 2), Fraction(2)])


def polys(variables=("x", "y"), max_degree=3, max_terms=4):
    n = len(variables)
    exps = st.tuples(*[st.integers(0, max_degree) for _ in range(n)])
    return st.dictionaries(exps, COEFFS, max_size=max_terms).map(lambda t: Poly(variables, t))


def to_sympy(p):
    """Independent conversion of a Poly to a sympy expression."""
    import sympy

    syms = sympy.symbols(tuple(p.variables))
    out = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exp):
            term *= s ** e
        out += term
    return sympy.expand(out)
