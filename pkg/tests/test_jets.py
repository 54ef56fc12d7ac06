from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from pmstar import jets
from pmstar.algebra import OmegaFunction, evaluate, parse_expression as P
from pmstar.errors import PoleAtPoint
from pmstar.gaussian import GaussianRational as G
from pmstar.operators import ALL_METHODS, pm_derive
from conftest import omega_functions, small_points


def test_taylor_examples():
    j = jets.taylor_jet(P("1/(1-z*w)"), (0, 0), (2, 2))
    assert [[j[a, b] for b in range(3)] for a in range(3)] == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    j = jets.taylor_jet(P("z^2"), (1, 0), (2, 0))
    assert [j[a, 0] for a in range(3)] == [1, 2, 1]
    assert jets.taylor_jet(P("5"), (Fr(1, 3), 2), (0, 0))[0, 0] == 5
    with pytest.raises(PoleAtPoint):
        jets.taylor_jet(P("1/(1-z*w)"), (1, 1), (1, 1))


def test_compose_examples():
    z, w = G(Fr(1, 2)), G(Fr(1, 3))
    j = jets.compose_with_phi(jets.OmegaProvider(P("z")), (z, w), (1, 1))
    assert j[1, 0] == 1 - z * w and j[0, 1] == 0
    j = jets.compose_with_phi(jets.OmegaProvider(P("1")), (z, w), (2, 2))
    assert all(j[a, b] == (1 if a == b == 0 else 0) for a in range(3) for b in range(3))
    j = jets.compose_with_phi(jets.OmegaProvider(P("z*w")), (z, w), (1, 1))
    assert j.derivative(1, 1) == G(Fr(25, 36))


def test_inner_phi_closed_form():
    z, w = G(Fr(1, 2)), G(Fr(1, 3))
    direct = jets.moebius_series(G(1), z, w, G(1), G(0), 8)
    assert jets.inner_phi(z, w, 8)[1:] == direct[1:]


@given(omega_functions(), omega_functions(), small_points())
def test_jet_ring_homomorphism(f, g, p):
    o = (2, 3)
    assert jets.taylor_jet(f * g, p, o) == jets.taylor_jet(f, p, o) * jets.taylor_jet(g, p, o)


@given(omega_functions(), small_points())
def test_orders_consistent(f, p):
    assert jets.taylor_jet(f, p, (3, 2)).restrict(1, 1) == jets.taylor_jet(f, p, (1, 1))


@given(omega_functions(max_terms=3), small_points(), st.integers(0, 3), st.integers(0, 3))
def test_definition_pathway_matches_operators(f, p, m, n):
    v = jets.pm_value_from_jets(jets.OmegaProvider(f), p, m, n)
    for meth in ALL_METHODS:
        assert evaluate(pm_derive(f, m, n, meth), p) == v


def test_function_provider_matches_exact():
    fp = jets.FunctionProvider(lambda base, orders: jets.taylor_jet(P("z^2*w"), base, orders).numeric())
    p = (Fr(1, 4), Fr(1, 5))
    a = jets.pm_value_from_jets(fp, p, 1, 1)
    b = evaluate(pm_derive(P("z^2*w"), 1, 1), p)
    assert abs(complex(a) - complex(b)) < 1e-14
