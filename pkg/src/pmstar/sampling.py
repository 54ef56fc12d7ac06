"""Seeded random objects for property suites and acceptance runs."""
import random
from fractions import Fraction

from .algebra import OmegaFunction
from .gaussian import GaussianRational
from .restrict import SmoothPolyFunction


def _coef(rng, complex_part=True):
    re = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    im = Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if complex_part else 0
    c = GaussianRational(re, im)
    return c if c else GaussianRational(1)


def random_omega(rng, max_terms=6, max_exp=3, max_k=2):
    """p/(1-zw)^k with at most max_terms monomials and |exponents| <= max_exp."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            terms[(rng.randint(-max_exp, max_exp), rng.randint(-max_exp, max_exp))] = _coef(rng)
        f = OmegaFunction(terms, rng.randint(0, max_k))
        if f:
            return f


def random_holomorphic(rng, max_terms=3, max_k=2):
    """A function holomorphic on all of Omega: terms z^i w^j/(1-zw)^k with i, j <= k."""
    total = OmegaFunction.zero()
    while not total:
        for _ in range(rng.randint(1, max_terms)):
            k = rng.randint(0, max_k)
            i, j = rng.randint(0, k), rng.randint(0, k)
            total = total + OmegaFunction.monomial(i, j, _coef(rng), k)
    return total


def random_polynomial(rng, max_terms=4, max_deg=3):
    total = OmegaFunction.zero()
    while not total:
        for _ in range(rng.randint(1, max_terms)):
            total = total + OmegaFunction.monomial(rng.randint(0, max_deg), rng.randint(0, max_deg), _coef(rng))
    return total


def random_smooth(rng, target="disk", max_terms=4, max_deg=3):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[(rng.randint(0, max_deg), rng.randint(0, max_deg))] = _coef(rng)
    return SmoothPolyFunction(terms, 0, target)


def random_point(rng, radius=Fraction(1, 2)):
    """A rational point (z, w) with |z|, |w| < radius, so zw != 1."""
    def one():
        while True:
            x = GaussianRational(Fraction(rng.randint(-9, 9), 20), Fraction(rng.randint(-9, 9), 20))
            if x and x.abs2() < radius * radius:
                return x
    return one(), one()


def make_rng(seed):
    return random.Random(seed)
