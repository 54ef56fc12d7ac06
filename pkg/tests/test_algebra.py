from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, strategies as st

from pmstar.algebra import (OmegaFunction, arithmetic, evaluate, format_function, homogeneity_degree,
                            moebius_pullback, parse_expression as P, pullback_transform,
                            wirtinger_derivative)
from pmstar.errors import (ExpressionSyntaxError, NoFiniteLimit, NotClassPreserving, PoleAtPoint,
                           UnrepresentableDenominator, ZeroFunction)
from pmstar.gaussian import GaussianRational as G
from pmstar.geometry import MoebiusMap, apply_map, dilation_map, flip_map, phi_map, swap_map
from conftest import gaussians, omega_functions, small_points


def test_parse_examples():
    f = P("z^2*w/(1-z*w)")
    assert f.terms == {(2, 1): G(1)} and f.k == 1
    g = P("(1-z*w)^2/(1-z*w)^3")
    assert g.terms == {(0, 0): G(1)} and g.k == 1
    with pytest.raises(UnrepresentableDenominator):
        P("1/(z+w)")


def test_parse_syntax_error_has_position():
    with pytest.raises(ExpressionSyntaxError) as exc:
        P("z*(w+")
    assert exc.value.position is not None


def test_parse_literals():
    assert P("0.5*z") == P("1/2*z")
    assert P("(1+2i)*w") == OmegaFunction.monomial(0, 1, G(1, 2))
    assert P("z^-2") == OmegaFunction.monomial(-2, 0)
    assert P("1e-1") == OmegaFunction.const(G(Fr(1, 10)))


def test_arithmetic_examples():
    f = P("z/(1-z*w)+w^3")
    assert arithmetic("add", f, arithmetic("neg", f)) == OmegaFunction.zero()
    assert OmegaFunction.basis(1, 0) * OmegaFunction.basis(0, 1) == P("z*w/(1-z*w)^2")
    assert arithmetic("mul", OmegaFunction.one(), f) == f


def test_wirtinger_examples():
    assert wirtinger_derivative(P("1/(1-z*w)"), "z", 1) == P("w/(1-z*w)^2")
    assert wirtinger_derivative(P("z^2"), "w", 1) == OmegaFunction.zero()
    assert wirtinger_derivative(P("z^3"), "z", 2) == P("6*z")


def test_pullback_examples():
    assert pullback_transform(P("1/(1-z*w)"), "flip") == P("-z*w/(1-z*w)")
    assert pullback_transform(P("z^2*w"), "swap") == P("w^2*z")
    assert pullback_transform(OmegaFunction.basis(1, 0), "dilation", 3) == P("3*z/(1-z*w)")
    with pytest.raises(NotClassPreserving):
        moebius_pullback(P("z"), phi_map(Fr(1, 2), Fr(1, 3)))


def test_evaluate_examples():
    assert evaluate(OmegaFunction.basis(1, 0), ("inf", 2)) == G(Fr(-1, 2))
    assert evaluate(P("z^2*w"), (Fr(1, 2), Fr(1, 3))) == G(Fr(1, 12))
    with pytest.raises(PoleAtPoint):
        evaluate(P("1/(1-z*w)"), (1, 1))
    with pytest.raises(NoFiniteLimit):
        evaluate(P("z"), ("inf", 2))
    assert isinstance(evaluate(P("z*w"), (0.5, 0.25)), complex)


def test_homogeneity_examples():
    assert homogeneity_degree(OmegaFunction.basis(2, 1)) == 1
    assert homogeneity_degree(P("1-z*w")) == 0
    assert homogeneity_degree(P("z+w")) is None
    with pytest.raises(ZeroFunction):
        homogeneity_degree(OmegaFunction.zero())


def test_format_and_json():
    assert format_function(P("2*z-2*z^2*w")) == "2*z*(1-z*w)"
    assert format_function(P("1/(1-z*w)")) == "1/(1-z*w)"
    f = P("(1/2+i)*z^2*w^-1/(1-z*w)^2 + 3")
    assert OmegaFunction.from_json(f.to_json()) == f
    assert P(format_function(f)) == f


@given(omega_functions())
def test_normalization_idempotent(f):
    assert OmegaFunction(f.terms, f.k) == f
    assert P(format_function(f)) == f


@given(omega_functions(), omega_functions(), omega_functions())
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@given(omega_functions())
def test_mixed_partials_commute(f):
    assert f.d_z().d_w() == f.d_w().d_z()


@given(omega_functions())
def test_flip_involution(f):
    assert f.flip().flip() == f
    assert f.swap().swap() == f


@given(omega_functions(), omega_functions(), small_points())
def test_evaluate_multiplicative(f, g, p):
    assert evaluate(f * g, p) == evaluate(f, p) * evaluate(g, p)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2), gaussians(nonzero=True), small_points())
def test_homogeneity_scaling(i, j, k, gamma, p):
    f = OmegaFunction.monomial(i, j, 1, k) + OmegaFunction.monomial(i + 1, j + 1, 2, k)
    deg = homogeneity_degree(f)
    q = apply_map(dilation_map(gamma), p)
    assert evaluate(f, q) == gamma ** deg * evaluate(f, p)


@given(omega_functions(), gaussians(nonzero=True), small_points())
def test_class_pullbacks_match_action(f, gamma, p):
    for T in (dilation_map(gamma), flip_map(), swap_map(), MoebiusMap(0, gamma, 1, 0)):
        q = apply_map(T, p)
        try:
            expected = evaluate(f, q)
        except (PoleAtPoint, NoFiniteLimit):
            continue
        assert evaluate(moebius_pullback(f, T), p) == expected
