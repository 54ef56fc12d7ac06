from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from pmstar import operators, restrict, star
from pmstar.algebra import OmegaFunction, parse_expression as P
from pmstar.errors import NonPolynomialRestriction
from pmstar.gaussian import GaussianRational as G
from pmstar.restrict import SmoothPolyFunction, classical_derive, parse_smooth
from pmstar.sampling import make_rng, random_holomorphic, random_smooth

S = parse_smooth
H = star.StarParams(hbar=Fr(1, 10))

smooth_polys = st.builds(lambda seed, t: random_smooth(make_rng(seed), t),
                         st.integers(0, 10 ** 6), st.sampled_from(["disk", "sphere"]))


def test_derive_examples():
    assert classical_derive("z^3+z*zb", 1) == S("(1-z*zb)*(3*z^2+zb)")
    assert classical_derive("z^2", 2) == S("2*(1-z*zb)*(1-3*z*zb)")
    assert classical_derive("zb", 1, conjugated=True) == S("1-z*zb")
    assert classical_derive("z^2+zb", 0) == S("z^2+zb")


def test_sphere_metric():
    assert classical_derive("z^2", 1, target="sphere") == S("2*z*(1+z*zb)", "sphere")


def test_restrict_examples():
    assert restrict.diagonal_restrict(P("z*w")) == S("z*zb")
    assert restrict.diagonal_restrict(P("z*w"), "sphere") == S("-z*zb", "sphere")
    assert restrict.diagonal_restrict(P("z^2*w")) == S("z^2*zb")
    with pytest.raises(NonPolynomialRestriction):
        restrict.diagonal_restrict(P("z/(1-z*w)"))
    f = restrict.diagonal_restrict(P("z/(1-z*w)"), allow_metric=True)
    assert f(Fr(1, 2)) == G(Fr(2, 3))
    assert restrict.diagonal_value(P("z/(1-z*w)"), Fr(1, 2), "sphere") == G(Fr(2, 5))


@pytest.mark.parametrize("target", ["disk", "sphere"])
def test_one_two_variable_agreement_exhaustive(target):
    for i in range(7):
        for j in range(7 - i):
            f = SmoothPolyFunction.monomial(i, j, 1, target)
            for n in range(6):
                for conj in (False, True):
                    out = classical_derive(f, n, conj, check=False)
                    assert out == restrict.two_variable_derive(f, n, conj)


@given(smooth_polys, st.integers(0, 8))
def test_routes_agree(f, n):
    outs = [classical_derive(f, n, route=r, check=False) for r in restrict.ROUTES]
    assert outs[0] == outs[1] == outs[2]


@given(smooth_polys)
def test_conjugate_three_bar_rule(f):
    assert classical_derive(f, 2, conjugated=True) == classical_derive(f.conj(), 2).conj()


def test_hat_d_examples():
    z = S("z")
    assert restrict.hat_d_iterate(z, 0) == z
    assert restrict.hat_d(z) == S("(1-z*zb)^2")
    two = restrict.hat_d_iterate(z, 2)
    assert two == S("-2*zb*(1-z*zb)^3")
    assert two == classical_derive(z, 2).metric_power(2)


@given(smooth_polys, st.integers(0, 5))
def test_hat_d_linearises(f, n):
    assert restrict.hat_d_iterate(f, n) == classical_derive(f, n).metric_power(n)


@given(st.integers(0, 10 ** 6), st.integers(0, 4))
def test_classical_invariance(seed, n):
    rng = make_rng(seed)
    f = random_smooth(rng)
    rep = restrict.classical_invariance(f, G(Fr(1, 3), Fr(-1, 5)), n, [Fr(1, 4), G(Fr(-1, 3), Fr(1, 6))])
    assert rep.passed and rep.max_deviation < 1e-10


def test_star_disk_examples():
    eta = P("z^2+3*z")
    r = restrict.star_disk(P("1"), eta, Fr(1, 3), H)
    assert r.value == pytest.approx(complex(Fr(1, 9) + 1))
    r = restrict.star_disk(P("w"), P("z"), Fr(1, 2), H)
    assert abs(r.value - star.star_eval("w", "z", (Fr(1, 2), Fr(1, 2)), H).value) < 1e-12
    assert r.agreement < 1e-12
    a1 = star.asym_coeffs("w", "z", 1).coefficients[1]
    assert restrict.diagonal_restrict(a1, allow_metric=True) == S("(1-z*zb)^2")


def test_star_sphere_examples():
    eta = P("z^2+3*z")
    assert restrict.star_sphere(P("1"), eta, Fr(1, 3), H).value == pytest.approx(complex(Fr(1, 9) + 1))
    r = restrict.star_sphere(P("z"), P("w"), 0, H)
    assert r.value == star.star_eval("z", "w", (0, 0), H).value
    d = restrict.star_disk(P("w"), P("z"), Fr(1, 4), H).value
    s = restrict.star_sphere(P("w"), P("z"), Fr(1, 4), H).value
    assert abs(d - s) > 1e-3


@given(st.integers(0, 10 ** 6), st.sampled_from(["disk", "sphere"]))
def test_diagonal_star_one_variable_agreement(seed, target):
    rng = make_rng(seed)
    phi, eta = random_holomorphic(rng), random_holomorphic(rng)
    z = G(Fr(rng.randint(-6, 6), 20), Fr(rng.randint(-6, 6), 20))
    fn = restrict.star_disk if target == "disk" else restrict.star_sphere
    r = fn(phi, eta, z, H)
    assert r.agreement < 1e-10
