from fractions import Fraction

import pytest
from hypothesis import given

from pmstar.gaussian import GaussianRational as G, parse_gaussian
from conftest import gaussians


def test_parse_forms():
    assert parse_gaussian("1/2+3/4i") == G(Fraction(1, 2), Fraction(3, 4))
    assert parse_gaussian("2,-1") == G(2, -1)
    assert parse_gaussian("0.1") == G(Fraction(1, 10))
    assert parse_gaussian("-i") == G(0, -1)
    assert parse_gaussian("i/10") == G(0, Fraction(1, 10))
    assert parse_gaussian("(1+i)/20") == G(Fraction(1, 20), Fraction(1, 20))


def test_str_round_trip():
    for g in (G(Fraction(1, 2), Fraction(3, 4)), G(0, 1), G(-2), G(1, -1)):
        assert parse_gaussian(str(g)) == g


def test_float_mixing_gives_complex():
    assert isinstance(G(1, 1) * 0.5, complex)
    assert G(1) + Fraction(1, 2) == G(Fraction(3, 2))


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        G(0).inverse()


@given(gaussians(), gaussians(nonzero=True))
def test_field_axioms(a, b):
    assert (a * b) / b == a
    assert a - a == G(0)
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))
