from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from pmstar.errors import DecompositionOutOfChart, SingularPrefactor
from pmstar.gaussian import GaussianRational as G
from pmstar.geometry import (Domain, INF, MoebiusMap, ProjectiveCoord, apply_map, compose_maps,
                             decompose_map, dilation_map, flip_map, identity_map, in_domain,
                             invariance_prefactor, inverse_map, phi_map, point, recompose_map)
from conftest import gaussians, small_points


def test_domain_membership():
    assert in_domain(point(0, 0), Domain.OMEGA)
    assert not in_domain(point(0, "inf"), Domain.OMEGA)
    assert not in_domain(point(2, Fr(1, 2)), Domain.OMEGA)
    assert in_domain(point("inf", 2), Domain.OMEGA)
    assert in_domain(point("inf", 2), Domain.OMEGA_PLUS)
    assert not in_domain(point("inf", 2), Domain.OMEGA_MINUS)
    assert not in_domain(point("inf", 2), Domain.FINITE)


def test_projective_equality_and_canonical():
    assert ProjectiveCoord(2, 4) == ProjectiveCoord(Fr(1, 2))
    c = ProjectiveCoord(G(3), G(0)).canonical()
    assert c == INF and c.canonical() == c


def test_map_examples():
    assert apply_map(flip_map(), point(2, 3)) == point(Fr(1, 3), Fr(1, 2))
    z, w = Fr(1, 2), Fr(1, 3)
    assert apply_map(phi_map(z, w), point(0, 0)) == point(z, w)
    assert apply_map(dilation_map(2), point(1, 4)) == point(2, 2)


def test_phi_composition_law():
    a, b, z, w = Fr(1, 4), Fr(1, 5), Fr(1, 2), Fr(1, 3)
    lhs = compose_maps(phi_map(a, b), phi_map(z, w))
    base = apply_map(phi_map(z, w), point(a, b))
    rhs = compose_maps(dilation_map((1 + a * w) / (1 + b * z)), phi_map(*base.values()))
    for k in range(10):
        p = point(Fr(k, 17), Fr(-k, 23))
        assert apply_map(lhs, p) == apply_map(rhs, p)


def test_decompose_examples():
    assert decompose_map(identity_map()) == (1, point(0, 0), False)
    assert decompose_map(flip_map()) == (1, point(0, 0), True)
    T = compose_maps(dilation_map(2), phi_map(Fr(1, 2), Fr(1, 3)))
    g, base, fl = decompose_map(T)
    assert (g, base, fl) == (2, point(Fr(1, 2), Fr(1, 3)), False)
    with pytest.raises(DecompositionOutOfChart):
        decompose_map(MoebiusMap(0, 1, 1, 0))


def test_prefactor_examples():
    inv = MoebiusMap(0, 1, 1, 0)
    z, w = G(Fr(1, 3)), G(Fr(1, 5))
    assert invariance_prefactor(inv, 3, 2, point(z, w)) == w / z
    assert invariance_prefactor(dilation_map(3), 1, 3, point(z, w)) == G(Fr(1, 9))
    assert invariance_prefactor(phi_map(z, w), 2, 2, point(1, 1)) == 1
    with pytest.raises(SingularPrefactor):
        invariance_prefactor(inv, 1, 0, point(0, w))


maps = st.builds(lambda a, b, c, d, f: MoebiusMap(a, b, c, d, f) if a * d != b * c else identity_map(),
                 gaussians(), gaussians(), gaussians(), gaussians(), st.booleans())


@given(maps, maps, maps, small_points())
def test_group_laws(T1, T2, T3, p):
    assert compose_maps(compose_maps(T1, T2), T3) == compose_maps(T1, compose_maps(T2, T3))
    assert compose_maps(T1, inverse_map(T1)) == identity_map()
    assert apply_map(compose_maps(T1, flip_map()), p) == apply_map(compose_maps(flip_map(), T1), p)
    q = apply_map(T2, p)
    assert apply_map(compose_maps(T1, T2), p) == apply_map(T1, q)


@given(maps, small_points())
def test_maps_preserve_omega(T, p):
    assert in_domain(apply_map(T, p))
    assert in_domain(apply_map(T, apply_map(flip_map(), p)))


@given(gaussians(nonzero=True), small_points(), st.booleans(), small_points())
def test_decompose_recompose(gamma, base, fl, p):
    T = recompose_map(gamma, base, fl)
    g, b, f2 = decompose_map(T)
    assert apply_map(recompose_map(g, b, f2), p) == apply_map(T, p)


@given(small_points(), small_points(), small_points(), st.integers(0, 3), st.integers(0, 3))
def test_prefactor_cocycle(b1, b2, p, m, n):
    T1, T2 = phi_map(*b1), phi_map(*b2)
    q = apply_map(T2, p)
    lhs = invariance_prefactor(compose_maps(T1, T2), m, n, p)
    assert lhs == invariance_prefactor(T1, m, n, q) * invariance_prefactor(T2, m, n, p)
