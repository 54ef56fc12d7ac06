"""One-variable Peschl-Minda operators on the disk and the sphere.

A SmoothPolyFunction is p(z, zb) * (1 - eps |z|^2)^e with p a polynomial in
z and zb = conj(z), eps = +1 on the disk and -1 on the sphere.  Derivatives
are taken with zb held fixed.  The one-variable calculus below is written
independently of the two-variable algebra so the two can check each other.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import OmegaFunction, evaluate, parse_function
from .errors import NonPolynomialRestriction, PMError
from .gaussian import GaussianRational, ONE, ZERO, to_exact
from .geometry import MoebiusMap
from . import operators, star

EPS = {"disk": 1, "sphere": -1}


def _eps(target):
    try:
        return EPS[target]
    except KeyError:
        raise ValueError(f"unknown target {target!r}") from None


# ---------------------------------------------------------------- polynomials in z, zb

def _add(p, q, s=1):
    out = dict(p)
    for key, c in q.items():
        v = out.get(key, ZERO) + c * s if s != 1 else out.get(key, ZERO) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return out


def _mul(p, q):
    out = {}
    for (a, b), c in p.items():
        for (i, j), d in q.items():
            key = (a + i, b + j)
            v = out.get(key, ZERO) + c * d
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _scale(p, c):
    if not c:
        return {}
    return {key: v * c for key, v in p.items()}


def _metric(r, eps):
    """(1 - eps z zb)^r for r >= 0."""
    return {(s, s): GaussianRational(comb(r, s) * (-eps) ** s) for s in range(r + 1)}


def _dz(p):
    return {(i - 1, j): c * i for (i, j), c in p.items() if i}


def _dzb(p):
    return {(i, j - 1): c * j for (i, j), c in p.items() if j}


def _divide_metric(p, eps):
    """p/(1 - eps z zb) if exact, else None.

    Works diagonal by diagonal: there p = sum a_s t^s with t = z zb, and
    a = q (1 - eps t) means q_s = a_s + eps q_(s-1) with remainder zero at the top.
    """
    diags = {}
    for (i, j), c in p.items():
        diags.setdefault(i - j, {})[min(i, j)] = c
    out = {}
    for d, coeffs in diags.items():
        top = max(coeffs)
        q = ZERO
        qs = []
        for s in range(top + 1):
            q = coeffs.get(s, ZERO) + q * eps
            qs.append(q)
        if qs[-1]:
            return None
        i0, j0 = max(d, 0), max(-d, 0)
        for s, c in enumerate(qs[:-1]):
            if c:
                out[(i0 + s, j0 + s)] = c
    return out


# ---------------------------------------------------------------- SmoothPolyFunction

class SmoothPolyFunction:
    """p(z, zb) (1 - eps |z|^2)^e, normalised so p is not divisible by the metric."""
    __slots__ = ("terms", "e", "target")

    def __init__(self, terms, e=0, target="disk"):
        eps = _eps(target)
        terms = {(int(i), int(j)): GaussianRational.of(c) for (i, j), c in dict(terms).items()
                 if GaussianRational.of(c)}
        if any(i < 0 or j < 0 for i, j in terms):
            raise ValueError("negative exponents are not polynomial")
        if not terms:
            e = 0
        while terms:
            q = _divide_metric(terms, eps)
            if q is None:
                break
            terms, e = q, e + 1
        self.terms, self.e, self.target = terms, e, target

    @property
    def eps(self):
        return EPS[self.target]

    @classmethod
    def monomial(cls, i, j, c=1, target="disk"):
        return cls({(i, j): c}, 0, target)

    def _common(self, other):
        if self.target != other.target:
            raise ValueError("mixed targets")
        e = min(self.e, other.e)
        p = _mul(self.terms, _metric(self.e - e, self.eps))
        q = _mul(other.terms, _metric(other.e - e, self.eps))
        return p, q, e

    def __add__(self, other):
        p, q, e = self._common(other)
        return SmoothPolyFunction(_add(p, q), e, self.target)

    def __sub__(self, other):
        p, q, e = self._common(other)
        return SmoothPolyFunction(_add(p, q, -1), e, self.target)

    def __mul__(self, other):
        if isinstance(other, SmoothPolyFunction):
            return SmoothPolyFunction(_mul(self.terms, other.terms), self.e + other.e, self.target)
        return SmoothPolyFunction(_scale(self.terms, GaussianRational.of(other)), self.e, self.target)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, SmoothPolyFunction):
            return NotImplemented
        return (self.target, self.e, self.terms) == (other.target, other.e, other.terms)

    def __hash__(self):
        return hash((self.target, self.e, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def metric_power(self, r):
        return SmoothPolyFunction(self.terms, self.e + r, self.target)

    def times_zb(self, c=1):
        return SmoothPolyFunction({(i, j + 1): v * GaussianRational.of(c) for (i, j), v in self.terms.items()},
                                  self.e, self.target)

    def d(self):
        """Partial derivative in z with zb fixed."""
        # d[p M^e] = (dp) M^e + p e (-eps zb) M^(e-1)
        a = SmoothPolyFunction(_dz(self.terms), self.e, self.target)
        if not self.e:
            return a
        b = SmoothPolyFunction(_mul(self.terms, {(0, 1): GaussianRational(-self.eps * self.e)}),
                               self.e - 1, self.target)
        return a + b

    def dbar(self):
        a = SmoothPolyFunction(_dzb(self.terms), self.e, self.target)
        if not self.e:
            return a
        b = SmoothPolyFunction(_mul(self.terms, {(1, 0): GaussianRational(-self.eps * self.e)}),
                               self.e - 1, self.target)
        return a + b

    def conj(self):
        """conj(f) as a function: conjugate coefficients and swap z with zb."""
        return SmoothPolyFunction({(j, i): c.conjugate() for (i, j), c in self.terms.items()},
                                  self.e, self.target)

    def __call__(self, z):
        z = to_exact(z)
        zb = z.conjugate()
        total = ZERO
        for (i, j), c in self.terms.items():
            total = total + c * z ** i * zb ** j
        m = ONE - self.eps * z * zb
        if self.e < 0 and not m:
            raise PMError("metric factor vanishes")
        return total * m ** self.e

    def to_omega(self):
        """The two-variable function with zb = eps w."""
        eps = self.eps
        base = OmegaFunction({(i, j): c * eps ** j for (i, j), c in self.terms.items()}, 0)
        return base.times_metric(self.e)

    def __repr__(self):
        return f"SmoothPolyFunction({self})"

    def __str__(self):
        return format_smooth(self)


def _zmon(i, j):
    parts = []
    if i:
        parts.append("z" if i == 1 else f"z^{i}")
    if j:
        parts.append("zb" if j == 1 else f"zb^{j}")
    return "*".join(parts)


def format_smooth(f):
    if not f.terms:
        return "0"
    items = sorted(f.terms.items(), key=lambda t: (t[0][0] + t[0][1], t[0][1], t[0][0]))
    out = ""
    for (i, j), c in items:
        mon = _zmon(i, j)
        s = str(c)
        if not c.is_real():
            s = f"({s})"
        if mon:
            if s == "1":
                s = mon
            elif s == "-1":
                s = "-" + mon
            else:
                s = f"{s}*{mon}"
        if out and not s.startswith("-"):
            out += "+"
        out += s
    met = "(1-|z|^2)" if f.eps == 1 else "(1+|z|^2)"
    if f.e == 0:
        return out
    if len(items) > 1:
        out = f"({out})"
    power = met if abs(f.e) == 1 else f"{met}^{abs(f.e)}"
    if f.e > 0:
        return power if out == "1" else f"{out}*{power}"
    return f"{out}/{power}"


def parse_smooth(text, target="disk"):
    """Parse an expression in z and zb (or conj(z) written zb)."""
    f = parse_function(text.replace("zb", "w"))
    if f.k:
        raise NonPolynomialRestriction("only polynomials in z, zb are accepted")
    return SmoothPolyFunction(f.terms, 0, target)


# ---------------------------------------------------------------- restriction

def diagonal_restrict(f, target="disk", allow_metric=False):
    """Substitute w = zb (disk) or w = -zb (sphere)."""
    f = parse_function(f)
    eps = _eps(target)
    if f.k and not allow_metric:
        raise NonPolynomialRestriction(f"(1-zw)^-{f.k} is not polynomial on the diagonal")
    if any(i < 0 or j < 0 for i, j in f.terms):
        raise NonPolynomialRestriction("negative exponents")
    return SmoothPolyFunction({(i, j): c * eps ** j for (i, j), c in f.terms.items()}, -f.k, target)


def diagonal_value(f, z, target="disk"):
    """Evaluation-level restriction f(z, eps zb)."""
    z = to_exact(z)
    return evaluate(parse_function(f), (z, _eps(target) * z.conjugate()))


# ---------------------------------------------------------------- classical operators

ROUTES = ("aharonov", "recursion", "euclidean")


def _aharonov(f, n):
    """D^n f = sum_k n!/k! C(n-1,k-1) (-eps zb)^(n-k) M^k d^k f."""
    eps = f.eps
    total = SmoothPolyFunction({}, 0, f.target)
    dk = f
    for k in range(n + 1):
        if k:
            dk = dk.d()
        w = operators.bell_weight(n, k)
        if w and dk:
            coef = GaussianRational(w * (-eps) ** (n - k))
            term = SmoothPolyFunction({(i, j + n - k): c * coef for (i, j), c in dk.terms.items()},
                                      dk.e + k, f.target)
            total = total + term
    return total


def _recursion(f, n):
    """D^(m+1) = M d D^m - m eps zb D^m."""
    g = f
    for m in range(n):
        g = g.d().metric_power(1) - g.times_zb(m * f.eps)
    return g


def _euclidean(f, n):
    """D^(n) f = M d^n [M^(n-1) f] for n >= 1."""
    if n == 0:
        return f
    g = f.metric_power(n - 1)
    for _ in range(n):
        g = g.d()
    return g.metric_power(1)


def classical_derive(f, n, conjugated=False, target=None, route="aharonov", check=True):
    """D^n f (or its conjugate D-bar^n f = conj D^n conj f) on the disk or sphere.

    With check=True the result is compared with the two-variable route
    D_z^n (resp. D_w^n) followed by diagonal restriction.
    """
    if isinstance(f, str):
        f = parse_smooth(f, target or "disk")
    if target is not None and f.target != target:
        f = SmoothPolyFunction(f.terms, f.e, target)
    base = f.conj() if conjugated else f
    fn = {"aharonov": _aharonov, "recursion": _recursion, "euclidean": _euclidean}[route]
    out = fn(base, n)
    if conjugated:
        out = out.conj()
    if check:
        two = two_variable_derive(f, n, conjugated)
        if two != out:
            raise PMError(f"one- and two-variable routes disagree: {out} vs {two}")
    return out


def two_variable_derive(f, n, conjugated=False):
    """Diagonal restriction of D_z^n (or eps^n D_w^n) of the two-variable extension."""
    F = f.to_omega()
    if conjugated:
        g = operators.pure_w(F, n) * GaussianRational(f.eps ** n)
    else:
        g = operators.pure_z(F, n)
    return diagonal_restrict(g, f.target, allow_metric=True)


def hat_d(f):
    """D-hat f = M^2 d f."""
    return f.d().metric_power(2)


def hat_d_iterate(f, n):
    for _ in range(n):
        f = hat_d(f)
    return f


def classical_invariance(f, a, n, zs):
    """D^n(f o T) = (T'/|T'|)^n (D^n f) o T for T(z) = (z + a)/(conj(a) z + 1).

    Checked through the two-variable prefactor at (z, zb); returns the report.
    """
    a = GaussianRational.of(a)
    T = MoebiusMap(ONE, a, a.conjugate(), ONE)
    F = f.to_omega()
    pts = [(to_exact(z), to_exact(z).conjugate()) for z in zs]
    return operators.check_invariance(F, T, n, 0, pts)


# ---------------------------------------------------------------- diagonal star products

@dataclass
class DiagonalStarResult:
    value: complex
    tail_bound: float
    terms: int
    one_variable_value: complex
    agreement: float

    def __iter__(self):
        return iter((self.value, self.tail_bound))


def _one_variable_star(phi, eta, z, hbar, terms, target):
    """Sum over n < terms of sign_n/n! (-1/hbar)_n^-1 (D-bar^n phi)(D^n eta) at z.

    sign_n = (-1)^n on the disk and 1 on the sphere.
    """
    eps = _eps(target)
    P = diagonal_restrict(phi, target, allow_metric=True)
    E = diagonal_restrict(eta, target, allow_metric=True)
    Pc = P.conj()
    exact = star.is_exact(hbar)
    rhos = star._rho_factors(hbar, exact)
    total = ZERO if exact else 0j
    dP, dE = Pc, E
    for n in range(terms):
        rho = next(rhos)
        if n:
            dP = (dP.d().metric_power(1) - dP.times_zb((n - 1) * eps)) * GaussianRational(Fraction(1, n))
            dE = (dE.d().metric_power(1) - dE.times_zb((n - 1) * eps)) * GaussianRational(Fraction(1, n))
        if not dP or not dE:
            continue
        # D-bar^n phi = conj(D^n conj phi); dP holds D^n(conj phi)/n!
        b = dP(z).conjugate() * dE(z)
        sign = (-1) ** n if eps == 1 else 1
        if exact:
            total = total + rho * b * sign
        else:
            total = total + complex(rho) * complex(b) * sign
    return total


def _diagonal_star(phi, eta, z, params, target):
    params = params or star.StarParams()
    phi, eta = parse_function(phi), parse_function(eta)
    z = to_exact(z)
    eps = _eps(target)
    if target == "disk" and abs(complex(z)) >= 1:
        raise PMError("disk point must satisfy |z| < 1")
    res = star.star_eval(phi, eta, (z, eps * z.conjugate()), params)
    one = _one_variable_star(phi, eta, z, params.hbar, res.terms, target)
    one_c = complex(one)
    return DiagonalStarResult(res.value, res.tail_bound, res.terms, one_c, abs(one_c - res.value))


def star_disk(phi, eta, z, params=None):
    """(phi *_disk eta)(z) through the pullback (z, zb), recomputed by the one-variable sum."""
    return _diagonal_star(phi, eta, z, params, "disk")


def star_sphere(phi, eta, z, params=None):
    """(phi *_sphere eta)(z) through the pullback (z, -zb), recomputed by the one-variable sum."""
    return _diagonal_star(phi, eta, z, params, "sphere")
