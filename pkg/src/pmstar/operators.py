"""Peschl-Minda derivatives D^{m,n} by several independent routes.

definition        compose f with Phi_{z,w} using symbolic jets
explicit          closed double sum over euclidean derivatives
recursion         ladder built from D^{1,0} and D^{0,1}
laplace           pure operator applied to P_{m,n}(D^{1,1})
pure_linearised   D_z^{n+1} f = (1-zw) d_z^{n+1}[(1-zw)^n f], pure orders only
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import comb, factorial

from .algebra import OmegaFunction, evaluate
from .errors import MethodNotApplicable
from .gaussian import GaussianRational, ONE
from .geometry import apply_map, as_point, invariance_prefactor
from . import jets


class PMethod(str, Enum):
    DEFINITION = "definition"
    EXPLICIT = "explicit"
    RECURSION = "recursion"
    LAPLACE = "laplace"
    PURE_LINEARISED = "pure_linearised"


ALL_METHODS = (PMethod.DEFINITION, PMethod.EXPLICIT, PMethod.RECURSION, PMethod.LAPLACE)

_Z = OmegaFunction.z()
_W = OmegaFunction.w()
_S = OmegaFunction.metric(1)


# ---------------------------------------------------------------- first order

def d10(f):
    """D^{1,0} f = (1-zw) d_z f."""
    return f.d_z().times_metric(1)


def d01(f):
    return f.d_w().times_metric(1)


def laplacian(f):
    """D^{1,1} f = (1-zw)^2 d_z d_w f."""
    return f.d_z().d_w().times_metric(2)


def pure_linearised(f, n, slot="z"):
    if n == 0:
        return f
    g = f.times_metric(n - 1).diff(slot, n)
    return g.times_metric(1)


def psi_plus(z, w):
    """Linearising coordinates (z/(1-zw), w) on Omega_+."""
    return z / (1 - z * w), w


def psi_plus_inv(u, v):
    return u / (1 + u * v), v


def psi_minus(z, w):
    return z, w / (1 - z * w)


def psi_minus_inv(u, v):
    return u, v / (1 + u * v)


# ---------------------------------------------------------------- explicit

def bell_weight(n, j):
    """n!/j! C(n-1, j-1), with the empty-sum convention for n = 0."""
    if j == 0:
        return 1 if n == 0 else 0
    return factorial(n) // factorial(j) * comb(n - 1, j - 1)


def _explicit(f, m, n):
    grid = {}
    row = f
    for j in range(m + 1):
        col = row
        for k in range(n + 1):
            grid[(j, k)] = col
            if k < n:
                col = col.d_w()
        if j < m:
            row = row.d_z()
    total = OmegaFunction.zero()
    for j in range(m + 1):
        a = bell_weight(m, j)
        if not a:
            continue
        for k in range(n + 1):
            b = bell_weight(n, k)
            if not b:
                continue
            g = grid[(j, k)]
            if not g:
                continue
            # (-w)^{m-j} (-z)^{n-k} (1-zw)^{j+k}
            sign = (-1) ** (m - j + n - k)
            term = g.times_monomial(n - k, m - j, GaussianRational(sign * a * b)).times_metric(j + k)
            total = total + term
    return total


# ---------------------------------------------------------------- recursion

def pm_ladder(f, M, N):
    """All D^{m,n} f with m <= M, n <= N from the two recursions."""
    grid = {(0, 0): f}
    for n in range(N):
        g = grid[(0, n)]
        # D^{0,n+1} = -n z D^{0,n} + D^{0,1} D^{0,n}
        grid[(0, n + 1)] = d01(g) - g.times_monomial(1, 0, GaussianRational(n))
    for n in range(N + 1):
        for m in range(M):
            g = grid[(m, n)]
            # D^{m+1,n} = (n-m) w D^{m,n} + D^{1,0} D^{m,n} + n(n-1) D^{m,n-1}
            nxt = d10(g) + g.times_monomial(0, 1, GaussianRational(n - m))
            if n >= 2:
                nxt = nxt + grid[(m, n - 1)] * (n * (n - 1))
            grid[(m + 1, n)] = nxt
    return grid


def recursion_z(f, m, n, grid=None):
    """Right side of the z-recursion for D^{m+1,n} from lower entries."""
    grid = grid or {}
    def D(a, b):
        if a < 0 or b < 0:
            return OmegaFunction.zero()
        if (a, b) not in grid:
            grid[(a, b)] = pm_derive(f, a, b)
        return grid[(a, b)]
    return D(m, n).times_monomial(0, 1, GaussianRational(n - m)) + d10(D(m, n)) + D(m, n - 1) * (n * (n - 1))


def recursion_w(f, m, n, grid=None):
    """Right side of the w-recursion for D^{m,n+1} from lower entries."""
    grid = grid or {}
    def D(a, b):
        if a < 0 or b < 0:
            return OmegaFunction.zero()
        if (a, b) not in grid:
            grid[(a, b)] = pm_derive(f, a, b)
        return grid[(a, b)]
    return D(m, n).times_monomial(1, 0, GaussianRational(m - n)) + d01(D(m, n)) + D(m - 1, n) * (m * (m - 1))


# ---------------------------------------------------------------- polynomials

@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple = field(default=(0,))

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self):
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def scale(self, c):
        return IntPolynomial(tuple(c * x for x in self.coeffs))

    def shift(self):
        """Multiply by x."""
        return IntPolynomial((0,) + self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def apply(self, op, f):
        """sum_k c_k op^k(f)."""
        total = OmegaFunction.zero()
        g = f
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + g * c
            if k < len(self.coeffs) - 1:
                g = op(g)
        return total

    def is_monic(self):
        return self.coeffs[-1] == 1

    def __str__(self):
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            coef = str(c) if (c != 1 or k == 0) else ""
            parts.append(coef + ("*" if coef and mono else "") + mono)
        return "+".join(parts).replace("+-", "-") or "0"


@lru_cache(maxsize=None)
def diag_poly(n):
    """P_n: P_0 = 1, P_1 = x, P_{n+1} = (x + 2n^2) P_n - n^2 (n-1)^2 P_{n-1}."""
    if n == 0:
        return IntPolynomial((1,))
    if n == 1:
        return IntPolynomial((0, 1))
    k = n - 1
    return (diag_poly(k).shift() + diag_poly(k).scale(2 * k * k)
            + diag_poly(k - 1).scale(-(k * k) * (k - 1) ** 2))


def alpha_coeff(n, k, convention="corrected"):
    """Weights of the off-diagonal recursion.

    convention='corrected' uses alpha_{n,0} = 0 for n >= 1, the value forced
    by D^{2,1} = D^{1,0} D^{1,1}; convention='printed' uses n!(n-1)!.
    """
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        if convention == "printed":
            return factorial(n) * factorial(n - 1)
        if convention != "corrected":
            raise ValueError(convention)
        return 0
    return factorial(n) * factorial(n - 1) // (factorial(k) * factorial(k - 1))


@lru_cache(maxsize=None)
def laplace_poly(m, n, alpha="corrected"):
    """P_{m,n}, symmetric in (m, n)."""
    if m < n:
        m, n = n, m
    if m == n:
        return diag_poly(n)
    p = m - n - 1
    total = IntPolynomial((0,))
    for k in range(n + 1):
        a = alpha_coeff(n, k, alpha)
        if a:
            total = total + laplace_poly(k + p, k, alpha).scale(a)
    return total


def bk_polynomials(N):
    """P_1..P_N from the closed formula for the coefficients b_k(n+1).

    b_k(n+1) = ((n-k+1)(2k^2+1) + 3k)/(3k) (n!/(k-1)!)^2
               + sum_{j=k+1}^{n} b_{k-1}(j) (n!/j!)^2 (n-j+1)
    """
    from fractions import Fraction
    b = {1: {1: Fraction(1)}}
    for n in range(1, N):
        row = {}
        for k in range(1, n + 2):
            v = Fraction((n - k + 1) * (2 * k * k + 1) + 3 * k, 3 * k) * Fraction(factorial(n), factorial(k - 1)) ** 2
            for j in range(k + 1, n + 1):
                v += b[j].get(k - 1, 0) * Fraction(factorial(n), factorial(j)) ** 2 * (n - j + 1)
            row[k] = v
        b[n + 1] = row
    out = {}
    for n, row in b.items():
        if any(v.denominator != 1 for v in row.values()):
            raise ArithmeticError(f"non-integer coefficient for P_{n}")
        out[n] = IntPolynomial(tuple([0] + [int(row[k]) for k in range(1, n + 1)]))
    return out


# ---------------------------------------------------------------- dispatch

def _laplace(f, m, n, alpha="corrected"):
    g = laplace_poly(m, n, alpha).apply(laplacian, f)
    if m >= n:
        return pure_linearised(g, m - n, "z")
    return pure_linearised(g, n - m, "w")


def pm_derive(f, m, n, method=PMethod.EXPLICIT, alpha="corrected"):
    """D^{m,n} f as an exact OmegaFunction."""
    if m < 0 or n < 0:
        return OmegaFunction.zero()
    method = PMethod(method)
    if m == 0 and n == 0:
        return f
    if method is PMethod.EXPLICIT:
        return _explicit(f, m, n)
    if method is PMethod.DEFINITION:
        return jets.definition_coefficient(f, m, n)
    if method is PMethod.RECURSION:
        return pm_ladder(f, m, n)[(m, n)]
    if method is PMethod.LAPLACE:
        return _laplace(f, m, n, alpha)
    if method is PMethod.PURE_LINEARISED:
        if m and n:
            raise MethodNotApplicable("pure_linearised needs m = 0 or n = 0")
        return pure_linearised(f, m, "z") if m else pure_linearised(f, n, "w")
    raise MethodNotApplicable(str(method))


def pure_z(f, n):
    return pure_linearised(f, n, "z")


def pure_w(f, n):
    return pure_linearised(f, n, "w")


def pm_tilde(f, m, n, method=PMethod.EXPLICIT):
    """Flip-chart derivative: (z/w)^(n-m) D^{n,m} f."""
    return pm_derive(f, n, m, method).times_monomial(n - m, m - n)


def pm_tilde_via_flip(f, m, n, method=PMethod.EXPLICIT):
    """D^{m,n}(f o F) pulled back by F, the flip-chart definition."""
    return pm_derive(f.flip(), m, n, method).flip()


def kernel_basis(n, slot="z", cutoff=4):
    """z^j w^k/(1-zw)^n for j <= n, k <= cutoff (roles swapped for slot w)."""
    out = []
    for j in range(n + 1):
        for k in range(cutoff + 1):
            f = OmegaFunction.monomial(j, k, 1, n)
            out.append(f if slot == "z" else f.swap())
    return out


def basis_function(p, q):
    return OmegaFunction.basis(p, q)


# ---------------------------------------------------------------- invariance

def prefactor_function(T, m, n):
    """The invariance factor as an OmegaFunction, for class-preserving T."""
    a, b, c, d = (GaussianRational.of(x) for x in (T.a, T.b, T.c, T.d))
    z, w = _Z, _W
    if not T.flip:
        num, den, e = a + w * b, z * c + d, m - n
    else:
        num, den, e = z * a + b, w * d + c, n - m
    return (num / den) ** e


@dataclass
class InvarianceReport:
    m: int
    n: int
    max_deviation: float
    max_relative: float
    points: int
    symbolic: object = None    # True/False when a symbolic check was possible
    details: list = field(default_factory=list)

    @property
    def passed(self):
        return self.symbolic is not False and self.max_relative <= 1e-10


def check_invariance(f, T, m, n, points, method=PMethod.EXPLICIT):
    """Compare D^{m,n}(f o T)(p) with prefactor * (D f)(T p).

    The left side comes from the definition (jets of f o T composed with
    Phi_p); the right side from pm_derive and the matrix prefactor.  For
    flip-type T the right side uses D^{n,m}.
    """
    mm, nn = (n, m) if T.flip else (m, n)
    Df = pm_derive(f, mm, nn, method)
    provider = jets.PullbackProvider(f, T)
    max_dev = max_rel = 0.0
    details = []
    for p in points:
        p = as_point(p)
        lhs = jets.pm_value_from_jets(provider, p, m, n)
        rhs = invariance_prefactor(T, m, n, p) * evaluate(Df, apply_map(T, p))
        dev = abs(complex(lhs - rhs))
        scale = max(abs(complex(lhs)), abs(complex(rhs)))
        rel = dev / scale if scale else dev
        max_dev, max_rel = max(max_dev, dev), max(max_rel, rel)
        details.append((str(p), complex(lhs), complex(rhs)))
    symbolic = None
    if T.is_diagonal or T.is_antidiagonal:
        from .algebra import moebius_pullback
        lhs_sym = pm_derive(moebius_pullback(f, T), m, n, method)
        rhs_sym = prefactor_function(T, m, n) * moebius_pullback(Df, T)
        symbolic = lhs_sym == rhs_sym
    return InvarianceReport(m, n, max_dev, max_rel, len(points), symbolic, details)
