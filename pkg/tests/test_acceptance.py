"""Acceptance criteria 1-10, each printed as a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v` or `python3 scripts/run_acceptance.py`.
"""
import math
from fractions import Fraction as Fr

import pytest

from pmstar import operators as ops
from pmstar import restrict, star
from pmstar.algebra import OmegaFunction, evaluate, moebius_pullback, parse_function
from pmstar.gaussian import GaussianRational as G
from pmstar.geometry import dilation_map, flip_map, phi_map
from pmstar.sampling import make_rng, random_holomorphic, random_omega, random_point, random_polynomial
from pmstar.verify import closed_form_wz, kernel_rank_check, poly_shape_ok

SEED = 2024
HB = Fr(1, 10)
P0 = (Fr(1, 2), Fr(1, 3))


def corpus():
    rng = make_rng(SEED)
    return [random_omega(rng, max_terms=6, max_exp=3, max_k=2) for _ in range(50)]


def crit1():
    bad = 0
    for f in corpus():
        for m in range(7):
            for n in range(7 - m):
                vals = [ops.pm_derive(f, m, n, meth) for meth in ops.ALL_METHODS]
                bad += any(v != vals[0] for v in vals[1:])
    return bad == 0, f"{bad} mismatching (f, m, n) cases"


def crit2():
    bad = 0
    for f in corpus():
        grid = {(m, n): ops.pm_derive(f, m, n, "definition") for m in range(7) for n in range(7 - m)}
        for m in range(6):
            for n in range(6 - m):
                bad += grid[(m + 1, n)] != ops.recursion_z(f, m, n, grid)
                bad += grid[(m, n + 1)] != ops.recursion_w(f, m, n, grid)
        for m in range(7):
            for n in range(7 - m):
                bad += ops.pm_derive(f, m, n, "laplace") != grid[(m, n)]
    z = OmegaFunction.z()
    truth = ops.pm_derive(z, 2, 1, "definition")
    printed = ops.pm_derive(z, 2, 1, "laplace", alpha="printed")
    shown = printed != truth
    return bad == 0 and shown, f"{bad} failures; printed alpha_(n,0) gives {printed}, definition gives {truth}"


def crit3():
    ok = all(poly_shape_ok(ops.diag_poly(n), n, n) for n in range(13))
    ok &= all(poly_shape_ok(ops.laplace_poly(m, n), m, n) for m in range(9) for n in range(9))
    rem = ops.bk_polynomials(7)
    ok &= all(rem[n + 1] == ops.diag_poly(n + 1) for n in range(7))
    return ok, f"P_3 = {ops.diag_poly(3)}"


def crit4():
    bad = 0
    for n in range(5):
        for slot in ("z", "w"):
            for f in ops.kernel_basis(n, slot, cutoff=6):
                g = ops.pure_z(f, n + 1) if slot == "z" else ops.pure_w(f, n + 1)
                bad += bool(g)
        nullity, expected = kernel_rank_check(n, cutoff=6, seed=SEED)
        bad += nullity != expected
    return bad == 0, f"{bad} failures"


def crit5():
    bad = 0
    maps = [dilation_map(G(2)), dilation_map(G(Fr(1, 3), Fr(1, 2))), flip_map()]
    for f in corpus():
        for T in maps:
            for m in range(5):
                for n in range(5 - m):
                    bad += ops.check_invariance(f, T, m, n, []).symbolic is not True
    rng = make_rng(SEED + 5)
    fs = corpus()
    worst = 0.0
    for _ in range(20):
        T = phi_map(*random_point(rng))
        f = fs[rng.randrange(len(fs))]
        pts = [random_point(rng) for _ in range(5)]
        for m in range(5):
            for n in range(5 - m):
                worst = max(worst, ops.check_invariance(f, T, m, n, pts).max_relative)
    return bad == 0 and worst <= 1e-10, f"{bad} symbolic failures, worst relative {worst:.2e}"


def crit6():
    prm = star.StarParams(hbar=HB)
    ok = star.star_eval("1", "1", P0, prm).exact_value == 1
    rng = make_rng(SEED + 6)
    for _ in range(10):
        g, q = random_holomorphic(rng), random_point(rng)
        ok &= star.star_eval("z", g, q, prm).exact_value == evaluate(OmegaFunction.z() * g, q)
    dev = abs(star.star_eval("w", "z", P0, prm).value - closed_form_wz(*P0, 0.1))
    ok &= dev <= 1e-9
    excess = -math.inf
    for _ in range(10):
        f, g, q = random_holomorphic(rng), random_holomorphic(rng), random_point(rng)
        for h in (HB, G(0, HB)):
            r = star.star_eval(f, g, q, star.StarParams(hbar=h))
            ref = star.star_eval(f, g, q, star.StarParams(hbar=h, abs_tol=1e-30, max_terms=400))
            excess = max(excess, abs(r.value - ref.value) - r.tail_bound)
    ok &= excess <= 0
    return ok, f"oracle deviation {dev:.1e}, worst remainder minus bound {excess:.1e}"


RAYS = (0.0, math.pi / 2, -math.pi / 2, 0.99 * 3 * math.pi / 4)


def crit7():
    A = star.asym_coeffs("w", "z", 2)
    ok = A.coefficients[1] == parse_function("(1-z*w)^2")
    ok &= A.coefficients[2] == parse_function("2*z*w*(1-z*w)^2")
    rng = make_rng(SEED + 7)
    pairs = [(OmegaFunction.w(), OmegaFunction.z()), (random_polynomial(rng), random_polynomial(rng))]
    worst = math.inf
    for f, g in pairs:
        for N in range(3):
            for ang in RAYS:
                rem = star.asymptotic_remainders(f, g, P0, N, star.ray_hbars(ang, 1e-3, 1e-1, 5))
                worst = min(worst, star.loglog_slope(rem) - N)
    ok &= worst >= 0.9
    return ok, f"smallest slope minus N {worst:.3f}"


def crit8():
    rng = make_rng(SEED + 8)
    worst = -math.inf
    for _ in range(10):
        f, g, h = (random_holomorphic(rng) for _ in range(3))
        for _ in range(5):
            p = random_point(rng)
            for hb in (HB, G(0, HB)):
                rep = star.check_associativity(f, g, h, p, star.StarParams(hbar=hb))
                worst = max(worst, rep.deviation - rep.bound)
    return worst <= 0, f"worst deviation minus bound {worst:.1e}"


def crit9():
    bad = 0
    for target in ("disk", "sphere"):
        for i in range(7):
            for j in range(7 - i):
                f = restrict.SmoothPolyFunction.monomial(i, j, 1, target)
                for n in range(6):
                    for conj in (False, True):
                        bad += restrict.classical_derive(f, n, conj, check=False) != \
                            restrict.two_variable_derive(f, n, conj)
    rng = make_rng(SEED + 9)
    prm = star.StarParams(hbar=HB)
    worst = 0.0
    for _ in range(10):
        phi, eta = random_holomorphic(rng), random_holomorphic(rng)
        z = random_point(rng)[0]
        for fn, eps in ((restrict.star_disk, 1), (restrict.star_sphere, -1)):
            r = fn(phi, eta, z, prm)
            pulled = star.star_eval(phi, eta, (z, eps * z.conjugate()), prm).value
            worst = max(worst, r.agreement, abs(r.value - pulled))
    return bad == 0 and worst <= 1e-10, f"{bad} exact mismatches, worst star deviation {worst:.1e}"


def crit10():
    rng = make_rng(SEED + 10)
    ok = True
    for _ in range(3):
        f, g = random_holomorphic(rng), random_holomorphic(rng)
        ok &= star.bidiff_dilation_exact(f, g, G(2), 12)
        ok &= star.bidiff_dilation_exact(f, g, G(Fr(1, 3), Fr(1, 2)), 12)
    prm = star.StarParams(hbar=HB)
    # a commuting pair would make the flip check vacuous, so require {f, g} != 0
    pairs = [(OmegaFunction.basis(1, 0), OmegaFunction.basis(0, 1))]
    while len(pairs) < 2:
        f, g = random_holomorphic(rng), random_holomorphic(rng)
        if star.poisson_bracket(f, g):
            pairs.append((f, g))
    pts = [random_point(rng) for _ in range(3)]
    maps = (("F", flip_map()), ("Phi1", phi_map(*random_point(rng))), ("Phi2", phi_map(*random_point(rng))))
    notes = []
    for name, T in maps:
        dev = tail = 0.0
        for f, g in pairs:
            rep = star.check_star_invariance(f, g, T, pts, prm)
            ok &= rep.max_deviation <= 2 * rep.max_combined_tail
            dev, tail = max(dev, rep.max_deviation), max(tail, rep.max_combined_tail)
        notes.append(f"{name} dev {dev:.1e} vs 2*tail {2 * tail:.1e}")
    return ok, "; ".join(notes)


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10]


def run_one(k):
    ok, detail = CRITERIA[k - 1]()
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"


@pytest.mark.parametrize("k", range(1, 11))
def test_criterion(k, capsys):
    ok, line = run_one(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
