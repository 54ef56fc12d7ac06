"""The Wick star product on Omega as a convergent factorial series.

    (f * g)(p) = sum_n (-1)^n / n! * 1/(-1/hbar)_n * B_n(g, f)(p),
    B_n(f, g) = D_z^n f * D_w^n g.

Terms are accumulated as (-1)^n rho_n beta_n with rho_n = n!/(-1/hbar)_n
and beta_n = B_n(g,f)(p)/(n!)^2, so no factorials grow.  When hbar and p
are rational every term is exact and the partial sum is exact.
"""
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from .algebra import OmegaFunction, evaluate, parse_function
from .errors import (OutsideDeformationDomain, BudgetExhausted, PoleAtPoint,
                     CertificationUnavailable, DomainPairingViolation)
from .gaussian import GaussianRational, ONE, ZERO, to_exact, is_exact
from .geometry import (Domain, as_point, apply_map, flip_point, in_domain)
from .operators import d10, d01, pure_z, pure_w
from . import jets


# ---------------------------------------------------------------- combinatorics

def falling_factorial(x, n):
    """(x)_n = x (x-1) ... (x-n+1)."""
    out = 1
    for j in range(n):
        out = out * (x - j)
    return out


def stirling2(n, k, convention="expansion"):
    """Stirling numbers of the second kind with boundary rows at -1.

    convention='expansion': {-1,-1} = 1 and {m,-1} = 0 for m >= 0, which is
    what the expansion of 1/(-1/hbar)_k in powers of hbar requires.
    convention='printed': {0,-1} = 1 instead.
    """
    if k == -1 or n == -1:
        if convention == "printed":
            return 1 if (n, k) == (0, -1) else 0
        return 1 if (n, k) == (-1, -1) else 0
    if n < -1 or k < -1:
        return 0
    return _stirling(n, k)


_STIRLING = {}


def _stirling(n, k):
    if k > n or k < 0:
        return 0
    if n == 0:
        return 1
    if k == 0:
        return 0
    key = (n, k)
    if key not in _STIRLING:
        _STIRLING[key] = k * _stirling(n - 1, k) + _stirling(n - 1, k - 1)
    return _STIRLING[key]


def parse_hbar(hbar):
    if isinstance(hbar, (GaussianRational, int, Fraction)):
        return GaussianRational.of(hbar)
    if isinstance(hbar, str):
        return GaussianRational.of(hbar)
    return complex(hbar)


def alpha_for(hbar):
    """alpha = 1/c with c = inf_j |1/hbar + j|/(j+1).

    With x = 1/hbar, a = Re x - 1, b = Im x and t = 1/(j+1),
    |x+j|^2/(j+1)^2 = 1 + 2 a t + (a^2+b^2) t^2 is convex in t, so the
    infimum over t in {1, 1/2, 1/3, ...} and the limit t -> 0 is reached
    at the two grid neighbours of t* = -a/(a^2+b^2), at t = 1, or in the
    limit (value 1).
    """
    h = complex(parse_hbar(hbar))
    if h == 0:
        raise OutsideDeformationDomain("hbar = 0")
    x = 1 / h
    if x.real < 0 and abs(x.imag) < 1e-12 and abs(x.real - round(x.real)) < 1e-12:
        raise OutsideDeformationDomain(f"hbar = -1/{round(-x.real)} lies outside the deformation domain")
    a, b = x.real - 1, x.imag
    r2 = a * a + b * b
    cands = {0}
    if r2 > 0 and a < 0:
        jstar = r2 / -a - 1
        for j in (math.floor(jstar), math.ceil(jstar)):
            if j >= 0:
                cands.add(j)
    q = min([1.0] + [abs(x + j) / (j + 1) for j in cands])
    if q <= 1e-14:
        raise OutsideDeformationDomain("Pochhammer symbol vanishes")
    return 1 / q


# ---------------------------------------------------------------- B_n

def bidiff(f, g, n):
    """B_n(f, g) = D_z^n f * D_w^n g."""
    return pure_z(f, n) * pure_w(g, n)


def scaled_pure_sequence(f, slot, N):
    """[D^n f / n! for n = 0..N], D = D_z or D_w, via D^{n+1} = D^1 D^n - n w D^n."""
    out = [f]
    g = f
    for n in range(N):
        if slot == "z":
            nxt = d10(g) - g.times_monomial(0, 1, GaussianRational(n))
        else:
            nxt = d01(g) - g.times_monomial(1, 0, GaussianRational(n))
        g = nxt * GaussianRational(Fraction(1, n + 1))
        out.append(g)
    return out


class _PureSeq:
    """Lazily extended D^n f/n! sequence."""

    def __init__(self, f, slot):
        self.f, self.slot = f, slot
        self.seq = [f]

    def __getitem__(self, n):
        while len(self.seq) <= n:
            m = len(self.seq) - 1
            g = self.seq[-1]
            if not g:
                self.seq.append(g)
                continue
            if self.slot == "z":
                nxt = d10(g) - g.times_monomial(0, 1, GaussianRational(m))
            else:
                nxt = d01(g) - g.times_monomial(1, 0, GaussianRational(m))
            self.seq.append(nxt * GaussianRational(Fraction(1, m + 1)))
        return self.seq[n]


# ---------------------------------------------------------------- params

@dataclass
class StarParams:
    hbar: object = Fraction(1, 10)
    max_terms: int = 200
    abs_tol: float = 1e-12
    radius_R: float = None
    bound_mode: str = "certified_geometric"
    samples: int = 256
    strict: bool = True

    def __post_init__(self):
        self.hbar = parse_hbar(self.hbar)
        if self.bound_mode not in ("certified_geometric", "successive_term"):
            raise ValueError(f"unknown bound mode {self.bound_mode!r}")


@dataclass
class StarResult:
    value: complex
    tail_bound: float
    terms: int
    mode: str
    converged: bool = True
    exact_value: object = None
    radius: float = None
    alpha: float = None

    def to_json(self):
        return {"value": [self.value.real, self.value.imag], "tail_bound": self.tail_bound,
                "terms": self.terms, "mode": self.mode}

    def __iter__(self):
        return iter((self.value, self.tail_bound, self.terms))


# ---------------------------------------------------------------- sup norms

def numeric_evaluator(f):
    """Vectorised complex evaluation of an OmegaFunction."""
    items = [(i, j, complex(c)) for (i, j), c in f.terms.items()]
    k = f.k

    def ev(z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        acc = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for i, j, c in items:
            acc = acc + c * z ** i * w ** j
        if k:
            acc = acc / (1 - z * w) ** k
        return acc
    return ev


def _circle_sup(ev, centre, other, R, slot, samples):
    """max over |u| = R of |f| on {(phi_{z,w}(u), w)} (slot z) or the w analogue."""
    z, w = centre, other
    theta = np.linspace(0, 2 * np.pi, samples, endpoint=False)

    def values(th):
        u = R * np.exp(1j * th)
        moved = (z + u) / (1 + w * u)
        if slot == "z":
            return np.abs(ev(moved, w))
        return np.abs(ev(w, moved))

    vals = values(theta)
    best = int(np.argmax(vals))
    step = 2 * np.pi / samples
    fine = np.linspace(theta[best] - step, theta[best] + step, 33)
    return float(max(vals.max(), values(fine).max()))


def pole_radius(f, z, w, slot):
    """Distance to the nearest possible pole of u -> f(phi_{z,w}(u), w) (slot z).

    For slot w the roles of the exponents are exchanged and (z,w) should
    be passed as (w,z).
    """
    if not f.terms:
        return math.inf
    if slot == "z":
        top = max(i for i, j in f.terms)
        low = min(i for i, j in f.terms)
    else:
        top = max(j for i, j in f.terms)
        low = min(j for i, j in f.terms)
    r = math.inf
    if top > f.k and w != 0:
        r = min(r, 1 / abs(w))
    if low < 0:
        r = min(r, abs(z))
    return r


def choose_radius(f, g, z, w, alpha, R=None):
    """Radius for the Cauchy estimates of B_n(g, f) at (z, w)."""
    rmax = min(pole_radius(g, z, w, "z"), pole_radius(f, w, z, "w"))
    if R is None:
        R = max(math.sqrt(2 * alpha), 1.0)
    if R >= rmax:
        if rmax * rmax <= alpha * (1 + 1e-9):
            raise CertificationUnavailable(
                f"poles at distance {rmax:.4g} leave no radius with R^2 > alpha = {alpha:.4g}")
        R = (math.sqrt(alpha) + rmax) / 2
    if R * R <= alpha:
        raise CertificationUnavailable(f"radius {R} needs R^2 > alpha = {alpha}")
    return R


def sup_norms(f, g, z, w, R, samples=256):
    """(||g||_{L1}, ||f||_{L2}) on the Cauchy circles around (z, w)."""
    z, w = complex(z), complex(w)
    sg = _circle_sup(numeric_evaluator(g), z, w, R, "z", samples)
    sf = _circle_sup(numeric_evaluator(f), w, z, R, "w", samples)
    return sg, sf


def certified_tail(f, g, p, N, params, alpha=None):
    """Bound for |sum_{n>N} term_n| at a finite point p."""
    if alpha is None:
        alpha = alpha_for(params.hbar)
    z, w = (complex(x) for x in as_point(p).values())
    R = choose_radius(f, g, z, w, alpha, params.radius_R)
    sg, sf = sup_norms(f, g, z, w, R, params.samples)
    r = alpha / (R * R)
    return sg * sf * r ** (N + 1) / (1 - r)


# ---------------------------------------------------------------- evaluation

def _rho_factors(hbar, exact):
    """Yields rho_n = n!/(-1/hbar)_n incrementally."""
    x = (ONE / hbar) if exact else 1 / complex(hbar)
    rho = ONE if exact else 1.0 + 0j
    n = 0
    while True:
        yield rho
        den = -x - n
        if den == 0:
            raise OutsideDeformationDomain("Pochhammer symbol vanishes")
        rho = rho * (n + 1) / den
        n += 1


def _sum_series(beta, hbar, params, N_cert=None):
    """Sum (-1)^n rho_n beta(n).  Returns (value, exact_value, last_n, tail_est, converged)."""
    exact = is_exact(hbar)
    rhos = _rho_factors(hbar, exact)
    total = ZERO if exact else 0j
    small_run = 0
    last = 0.0
    n = -1
    for n in range(params.max_terms):
        rho = next(rhos)
        b = beta(n)
        if not exact or not is_exact(b):
            rho_c = complex(rho)
            total = complex(total) + (-1) ** n * rho_c * complex(b)
            exact = False
            term_abs = abs(rho_c * complex(b))
        else:
            t = rho * b
            total = total + t if n % 2 == 0 else total - t
            term_abs = abs(complex(t))
        last = term_abs
        if N_cert is not None:
            if n >= N_cert:
                return total, n + 1, last, True
        else:
            small_run = small_run + 1 if term_abs < params.abs_tol else 0
            if small_run >= 3:
                return total, n + 1, last, True
    return total, n + 1, last, False


def star_eval(f, g, p, params=None):
    """(f * g)(p) with a tail bound.  Note the operand order: terms use B_n(g, f)."""
    params = params or StarParams()
    f, g = parse_function(f), parse_function(g)
    hbar = params.hbar
    alpha = alpha_for(hbar)
    p = as_point(p)
    if not in_domain(p, Domain.OMEGA):
        raise PoleAtPoint("1-zw")
    if not p.is_finite:
        # (f * g)(p) = (g o F * f o F)(F p)
        return star_eval(g.flip(), f.flip(), flip_point(p), params)
    z, w = (to_exact(x) for x in p.values())
    Gz = _PureSeq(g, "z")
    Fw = _PureSeq(f, "w")

    def beta(n):
        a = Gz[n]
        if not a:
            return ZERO
        b = Fw[n]
        if not b:
            return ZERO
        return evaluate(a, (z, w)) * evaluate(b, (z, w))

    mode = params.bound_mode
    R = None
    if mode == "certified_geometric":
        zc, wc = complex(z), complex(w)
        R = choose_radius(f, g, zc, wc, alpha, params.radius_R)
        sg, sf = sup_norms(f, g, zc, wc, R, params.samples)
        r = alpha / (R * R)
        S = sg * sf / (1 - r)
        # smallest N with S r^(N+1) <= tol
        if S <= params.abs_tol:
            N = 0
        else:
            N = max(0, math.ceil(math.log(params.abs_tol / S) / math.log(r)) - 1)
        if N + 1 > params.max_terms:
            partial, used, _, _ = _sum_series(beta, hbar, StarParams(
                hbar, params.max_terms, params.abs_tol, R, "successive_term", params.samples))
            res = StarResult(complex(partial), S * r ** params.max_terms, used, mode, False,
                             partial if is_exact(partial) else None, R, alpha)
            if params.strict:
                raise BudgetExhausted(f"certified bound needs {N + 1} terms > max_terms = {params.max_terms}", res)
            return res
        total, used, _, ok = _sum_series(beta, hbar, params, N_cert=N)
        tail = S * r ** (N + 1)
    else:
        total, used, last, ok = _sum_series(beta, hbar, params)
        tail = last
        if not ok and params.strict:
            raise BudgetExhausted("series did not meet the tolerance within max_terms",
                                  StarResult(complex(total), tail, used, mode, False, None, None, alpha))
    exact_value = total if is_exact(total) else None
    return StarResult(complex(total), tail, used, mode, ok, exact_value, R, alpha)


def star_eval_jets(fp, gp, p, params=None):
    """Star product of jet providers; successive-term tail estimate only."""
    params = params or StarParams(bound_mode="successive_term")
    if isinstance(fp, OmegaFunction):
        fp = jets.OmegaProvider(fp)
    if isinstance(gp, OmegaFunction):
        gp = jets.OmegaProvider(gp)
    # rational-class functions are holomorphic near every finite point of Omega
    if not (isinstance(fp, jets.OmegaProvider) and isinstance(gp, jets.OmegaProvider)):
        jets.check_pairing(fp, gp)
    p = as_point(p)
    for prov in (fp, gp):
        dom = prov.domain
        ok = in_domain(p, Domain.FINITE) and in_domain(p, dom)
        if not ok:
            raise DomainPairingViolation(f"point {p} is not interior to the domain {dom.value}")
    hbar = params.hbar
    alpha_for(hbar)
    cache = {"K": -1}

    def refresh(K):
        cache["g"] = jets.compose_with_phi(gp, p, (K, 0)).coeffs
        cache["f"] = jets.compose_with_phi(fp, p, (0, K)).coeffs
        cache["K"] = K

    def beta(n):
        if n > cache["K"]:
            refresh(max(16, 2 * cache["K"], n))
        return cache["g"][n][0] * cache["f"][0][n]

    local = StarParams(hbar, params.max_terms, params.abs_tol, params.radius_R, "successive_term",
                       params.samples, params.strict)
    total, used, last, ok = _sum_series(beta, hbar, local)
    if not ok and params.strict:
        raise BudgetExhausted("jet series did not meet the tolerance within max_terms",
                              StarResult(complex(total), last, used, "successive_term", False))
    return StarResult(complex(total), last, used, "successive_term", ok,
                      total if is_exact(total) else None)


def truncated_star(f, g, hbar, N):
    """Exact partial sum sum_{n<=N} (-1)^n/n! (-1/hbar)_n^{-1} B_n(g,f) as an OmegaFunction."""
    hbar = GaussianRational.of(parse_hbar(hbar))
    x = ONE / hbar
    Gz, Fw = _PureSeq(g, "z"), _PureSeq(f, "w")
    total = OmegaFunction.zero()
    rho = ONE
    for n in range(N + 1):
        if n:
            rho = rho * n / (-x - (n - 1))
        a = Gz[n]
        b = Fw[n]
        if a and b:
            term = (a * b) * rho
            total = total + term if n % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------- asymptotics

@dataclass
class AsymptoticSeries:
    coefficients: list

    def evaluate(self, hbar, p):
        hbar = parse_hbar(hbar)
        total = 0
        for n, a in enumerate(self.coefficients):
            total = total + hbar ** n * evaluate(a, p)
        return total


def asym_coeffs(f, g, N, convention="expansion"):
    """a_0 = f g, a_n = sum_k (-1)^(k+n)/k! {n-1, k-1} B_k(g, f)."""
    f, g = parse_function(f), parse_function(g)
    B = [bidiff(g, f, k) for k in range(N + 1)]
    out = [f * g]
    for n in range(1, N + 1):
        total = OmegaFunction.zero()
        for k in range(0, n + 1):
            s = stirling2(n - 1, k - 1, convention)
            if s:
                total = total + B[k] * GaussianRational(Fraction((-1) ** (k + n) * s, math.factorial(k)))
        out.append(total)
    return AsymptoticSeries(out)


def pochhammer_expansion(k, N, convention="expansion"):
    """Coefficients of hbar^0..hbar^N in 1/(-1/hbar)_k from the Stirling formula."""
    return [(-1) ** n * stirling2(n - 1, k - 1, convention) if n >= k or convention == "printed" else 0
            for n in range(N + 1)]


def poisson_bracket(f, g):
    """{f, g} = B_1(f, g) - B_1(g, f) = (1-zw)^2 (f_z g_w - f_w g_z)."""
    return bidiff(f, g, 1) - bidiff(g, f, 1)


# ---------------------------------------------------------------- invariance

@dataclass
class StarInvarianceReport:
    max_deviation: float
    max_deviation_swapped: float
    max_combined_tail: float
    points: int
    passed: bool
    details: list = field(default_factory=list)


def check_star_invariance(f, g, T, points, params=None):
    """Compare (f o T) * (g o T) at p with (f * g)(T p).

    The report also carries the deviation from (g * f)(T p), the relation
    that holds for maps containing the flip F.
    """
    from .algebra import moebius_pullback
    params = params or StarParams()
    symbolic = T.is_diagonal or T.is_antidiagonal
    worst = worst_sw = worst_tail = 0.0
    ok = True
    details = []
    for p in points:
        p = as_point(p)
        if symbolic:
            lhs = star_eval(moebius_pullback(f, T), moebius_pullback(g, T), p, params)
        else:
            lp = StarParams(params.hbar, params.max_terms, min(params.abs_tol, 1e-14), params.radius_R,
                            "successive_term", params.samples)
            lhs = star_eval_jets(jets.PullbackProvider(f, T), jets.PullbackProvider(g, T), p, lp)
        q = apply_map(T, p)
        rhs = star_eval(f, g, q, params)
        rhs_sw = star_eval(g, f, q, params)
        dev = abs(lhs.value - rhs.value)
        dev_sw = abs(lhs.value - rhs_sw.value)
        tail = lhs.tail_bound + rhs.tail_bound
        ok = ok and dev <= 2 * tail
        worst, worst_sw, worst_tail = max(worst, dev), max(worst_sw, dev_sw), max(worst_tail, tail)
        details.append({"point": str(p), "lhs": lhs.value, "rhs": rhs.value, "deviation": dev, "tail": tail})
    return StarInvarianceReport(worst, worst_sw, worst_tail, len(points), ok, details)


def bidiff_dilation_exact(f, g, gamma, N):
    """B_n(f o rho, g o rho) == B_n(f, g) o rho for n <= N, exactly."""
    return all(bidiff(f.dilate(gamma), g.dilate(gamma), n) == bidiff(f, g, n).dilate(gamma)
               for n in range(N + 1))


# ---------------------------------------------------------------- associativity

def _slot_circle(p, R, slot, samples):
    """Points of the Cauchy compactum L_1 (slot z) or L_2 (slot w) around p."""
    z, w = p
    u = R * np.exp(1j * np.linspace(0, 2 * np.pi, samples, endpoint=False))
    if slot == "z":
        return [(complex(x), w) for x in (z + u) / (1 + w * u)]
    return [(z, complex(x)) for x in (w + u) / (1 + z * u)]


def _truncation_sup(f, g, pts, N, params, alpha):
    """max over pts of the certified bound on |f*g - truncated_star(f,g,N)|."""
    out = 0.0
    for z, w in pts:
        R = choose_radius(f, g, z, w, alpha, params.radius_R)
        sg, sf = sup_norms(f, g, z, w, R, params.samples)
        r = alpha / (R * R)
        out = max(out, sg * sf * r ** (N + 1) / (1 - r))
    return out


@dataclass
class AssociatorReport:
    lhs: complex
    rhs: complex
    deviation: float
    bound: float

    @property
    def passed(self):
        return self.deviation <= self.bound


def check_associativity(f, g, h, p, params=None, N=None, ring=64):
    """|((f*g)*h - f*(g*h))(p)| against propagated tail bounds.

    The inner products are replaced by exact truncations F_N, G_N; the
    outer series is evaluated on them with its own certified tail, and the
    inner truncation error enters through the Cauchy estimate
    |sum_n c_n D_z^n h D_w^n (F - F_N)| <= ||h||_{L1} sup_{L2}|F - F_N| / (1 - r).
    """
    params = params or StarParams()
    f, g, h = (parse_function(x) for x in (f, g, h))
    alpha = alpha_for(params.hbar)
    p = as_point(p)
    z, w = (complex(x) for x in p.values())
    if N is None:
        N = 60
    F = truncated_star(f, g, params.hbar, N)
    G = truncated_star(g, h, params.hbar, N)
    left = star_eval(F, h, p, params)
    right = star_eval(f, G, p, params)
    R = choose_radius(F, h, z, w, alpha, params.radius_R)
    r = alpha / (R * R)
    sh = _circle_sup(numeric_evaluator(h), z, w, R, "z", params.samples)
    eF = _truncation_sup(f, g, _slot_circle((z, w), R, "w", ring), N, params, alpha)
    R2 = choose_radius(f, G, z, w, alpha, params.radius_R)
    r2 = alpha / (R2 * R2)
    sf = _circle_sup(numeric_evaluator(f), w, z, R2, "w", params.samples)
    eG = _truncation_sup(g, h, _slot_circle((z, w), R2, "z", ring), N, params, alpha)
    bound = (left.tail_bound + right.tail_bound + sh * eF / (1 - r) + sf * eG / (1 - r2))
    return AssociatorReport(left.value, right.value, abs(left.value - right.value), bound)


# ---------------------------------------------------------------- asymptotic order

def ray_hbars(angle, lo=1e-3, hi=1e-1, count=7):
    """Exact hbar values spaced logarithmically on the ray arg hbar = angle."""
    mags = np.geomspace(hi, lo, count)
    return [GaussianRational(Fraction(float(m * np.cos(angle))).limit_denominator(10 ** 9),
                             Fraction(float(m * np.sin(angle))).limit_denominator(10 ** 9)) for m in mags]


def asymptotic_remainders(f, g, p, N, hbars, params=None):
    """[(|hbar|, |f*g - sum_{n<=N} hbar^n a_n|)] evaluated exactly where possible."""
    params = params or StarParams()
    f, g = parse_function(f), parse_function(g)
    series = asym_coeffs(f, g, N)
    coeffs = [evaluate(a, p) for a in series.coefficients]
    out = []
    for h in hbars:
        res = star_eval(f, g, p, StarParams(h, params.max_terms, params.abs_tol * 1e-8, params.radius_R,
                                            params.bound_mode, params.samples))
        approx = sum((h ** n * c for n, c in enumerate(coeffs)), ZERO)
        val = res.exact_value if res.exact_value is not None else res.value
        out.append((abs(complex(h)), abs(complex(val - approx))))
    return out


def loglog_slope(pairs):
    """Least-squares slope of log remainder against log |hbar|; inf if every remainder is 0."""
    if all(b == 0 for _, b in pairs):
        return math.inf
    x = np.log([a for a, _ in pairs])
    y = np.log([b for _, b in pairs])
    return float(np.polyfit(x, y, 1)[0])
