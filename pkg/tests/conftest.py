from fractions import Fraction

from hypothesis import settings, strategies as st

from pmstar.algebra import OmegaFunction
from pmstar.gaussian import GaussianRational

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def gaussians(draw, nonzero=False):
    re, im = draw(small_q), draw(small_q)
    g = GaussianRational(re, im)
    if nonzero and not g:
        g = GaussianRational(1)
    return g


@st.composite
def omega_functions(draw, max_terms=4, max_exp=3, max_k=2, nonneg=False):
    lo = 0 if nonneg else -max_exp
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        key = (draw(st.integers(lo, max_exp)), draw(st.integers(lo, max_exp)))
        terms[key] = draw(gaussians(nonzero=True))
    return OmegaFunction(terms, draw(st.integers(0, max_k)))


@st.composite
def holomorphic_functions(draw, max_terms=3, max_k=2):
    total = OmegaFunction.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        k = draw(st.integers(0, max_k))
        total = total + OmegaFunction.monomial(draw(st.integers(0, k)), draw(st.integers(0, k)),
                                               draw(gaussians(nonzero=True)), k)
    return total


@st.composite
def small_points(draw):
    """Rational points with |z|, |w| <= 1/2 and both coordinates nonzero."""
    coord = st.builds(lambda a, b: GaussianRational(Fraction(a, 20), Fraction(b, 20)),
                      st.integers(-7, 7), st.integers(-7, 7)).filter(lambda x: bool(x))
    return draw(coord), draw(coord)
