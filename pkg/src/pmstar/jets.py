"""Truncated bivariate Taylor jets and composition with Moebius-type maps.

Jets are rectangular: coeffs[i][j] is the coefficient of u^i v^j with
i <= M, j <= N.  Coefficients may be numbers or OmegaFunctions; the
composition routines only use ring operations, so running them with the
symbols z, w as base point gives D^{m,n} symbolically.
"""
import cmath
from dataclasses import dataclass
from math import comb, factorial

from .algebra import OmegaFunction
from .errors import PoleAtPoint, DomainPairingViolation
from .gaussian import GaussianRational, ONE, ZERO, to_exact
from .geometry import Domain, as_point, apply_map, in_domain


# ---------------------------------------------------------------- series

def series_mul(a, b, n, zero=ZERO):
    """Product of two univariate series truncated after degree n."""
    out = [zero] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if not x:
            continue
        for j in range(min(len(b) - 1, n - i) + 1):
            y = b[j]
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def series_powers(a, n, count, one=ONE, zero=ZERO):
    """[a^0, a^1, ..., a^count] truncated after degree n."""
    pows = [[one] + [zero] * n]
    for _ in range(count):
        pows.append(series_mul(pows[-1], a, n, zero))
    return pows


def series_inverse(a, n):
    """1/a for a numeric series with a[0] != 0."""
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term")
    inv0 = 1 / a[0] if not isinstance(a[0], int) else GaussianRational(1) / a[0]
    out = [inv0]
    for m in range(1, n + 1):
        s = 0
        for j in range(1, min(m, len(a) - 1) + 1):
            if a[j]:
                s = s + a[j] * out[m - j]
        out.append(-s * inv0)
    return out


def moebius_series(a, b, c, d, x0, n):
    """Taylor coefficients of u -> (a(x0+u)+b)/(c(x0+u)+d) up to degree n."""
    num = [a * x0 + b, a] + [ZERO] * (n - 1)
    den = [c * x0 + d, c] + [ZERO] * (n - 1)
    if den[0] == 0:
        raise PoleAtPoint("Moebius denominator")
    return series_mul(num, series_inverse(den, n), n)


def inner_phi(z, w, n):
    """Coefficients of u -> phi_{z,w}(u) - z, with phi(u) = (z+u)/(1+wu).

    Closed form: the k-th coefficient is (-1)^(k-1) w^(k-1) (1-zw).
    """
    s = 1 - z * w
    out = [s * 0]
    p = s
    for _ in range(1, n + 1):
        out.append(p)
        p = -(p * w)
    return out


def _gbinom(i, r):
    """Generalized binomial coefficient C(i, r) for integer i, r >= 0."""
    num = 1
    for t in range(r):
        num *= i - t
    return num // factorial(r) if num % factorial(r) == 0 else GaussianRational(num) / factorial(r)


# ---------------------------------------------------------------- Jet2

@dataclass(frozen=True)
class Jet2:
    base: tuple
    orders: tuple
    coeffs: tuple

    def __getitem__(self, idx):
        i, j = idx
        return self.coeffs[i][j]

    def derivative(self, m, n):
        """m! n! coeffs[m][n], the mixed partial at the base point."""
        return self.coeffs[m][n] * (factorial(m) * factorial(n))

    def restrict(self, M, N):
        return Jet2(self.base, (M, N), tuple(tuple(row[:N + 1]) for row in self.coeffs[:M + 1]))

    def _check(self, other):
        if self.orders != other.orders:
            raise ValueError("jets with different orders")

    def __add__(self, other):
        self._check(other)
        return Jet2(self.base, self.orders, tuple(
            tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.base, self.orders, tuple(tuple(x * other for x in r) for r in self.coeffs))
        self._check(other)
        return Jet2(self.base, self.orders, tuple(map(tuple, _grid_mul(self.coeffs, other.coeffs, *self.orders))))

    __rmul__ = __mul__

    def numeric(self):
        return [[complex(x) for x in row] for row in self.coeffs]


def _grid_mul(a, b, M, N, zero=ZERO):
    out = [[zero] * (N + 1) for _ in range(M + 1)]
    for i1 in range(M + 1):
        for j1 in range(N + 1):
            x = a[i1][j1]
            if not x:
                continue
            for i2 in range(M + 1 - i1):
                row = b[i2]
                orow = out[i1 + i2]
                for j2 in range(N + 1 - j1):
                    y = row[j2]
                    if y:
                        orow[j1 + j2] = orow[j1 + j2] + x * y
    return out


def _binomial_series(x0, e, n):
    """(x0+u)^e truncated after degree n (e may be negative)."""
    out = []
    for r in range(n + 1):
        if e >= 0 and r > e:
            out.append(ZERO)
        else:
            out.append(x0 ** (e - r) * _gbinom(e, r))
    return out


def taylor_jet(f, base, orders):
    """Exact Taylor jet of an OmegaFunction at a finite base point."""
    M, N = orders
    z0, w0 = (to_exact(x) for x in as_point(base).values())
    for i, j in f.terms:
        if i < 0 and z0 == 0:
            raise PoleAtPoint("z")
        if j < 0 and w0 == 0:
            raise PoleAtPoint("w")
    zs, ws = {}, {}
    P = [[ZERO] * (N + 1) for _ in range(M + 1)]
    for (i, j), c in f.terms.items():
        if i not in zs:
            zs[i] = _binomial_series(z0, i, M)
        if j not in ws:
            ws[j] = _binomial_series(w0, j, N)
        Z, W = zs[i], ws[j]
        for a in range(M + 1):
            if not Z[a]:
                continue
            za = c * Z[a]
            row = P[a]
            for b in range(N + 1):
                if W[b]:
                    row[b] = row[b] + za * W[b]
    if f.k:
        s0 = 1 - z0 * w0
        if s0 == 0:
            raise PoleAtPoint("1-zw")
        # 1 - zw = s0 (1 - s), s = (w0 u + z0 v + u v)/s0
        S = [[ZERO] * (N + 1) for _ in range(M + 1)]
        if M >= 1:
            S[1][0] = w0 / s0
        if N >= 1:
            S[0][1] = z0 / s0
        if M >= 1 and N >= 1:
            S[1][1] = ONE / s0
        Dk = [[ZERO] * (N + 1) for _ in range(M + 1)]
        Sr = [[ZERO] * (N + 1) for _ in range(M + 1)]
        Sr[0][0] = ONE
        for r in range(M + N + 1):
            coef = comb(f.k + r - 1, r)
            for a in range(M + 1):
                for b in range(N + 1):
                    if Sr[a][b]:
                        Dk[a][b] = Dk[a][b] + Sr[a][b] * coef
            Sr = _grid_mul(Sr, S, M, N)
        scale = ONE / s0 ** f.k
        Dk = [[x * scale for x in row] for row in Dk]
        P = _grid_mul(P, Dk, M, N)
    return Jet2((z0, w0), (M, N), tuple(map(tuple, P)))


def symbolic_taylor_jet(f, orders):
    """Jet with symbolic base: coeffs[i][j] = d_z^i d_w^j f / (i! j!)."""
    M, N = orders
    rows = []
    fz = f
    for i in range(M + 1):
        row, g = [], fz
        for j in range(N + 1):
            row.append(g * GaussianRational(1, 0) / (factorial(i) * factorial(j)))
            if j < N:
                g = g.d_w()
        rows.append(tuple(row))
        if i < M:
            fz = fz.d_z()
    return Jet2(("z", "w"), (M, N), tuple(rows))


# ---------------------------------------------------------------- composition

def compose_separable(c, A, B, M, N, zero=ZERO, one=ONE):
    """Coefficients of (u,v) -> f(x0 + A(u), y0 + B(v)) from f's jet c at (x0,y0).

    A and B are series without constant term.  Contracting one variable at
    a time costs O(M^2 N + M N^2).
    """
    Ap = series_powers(A, M, M, one, zero)
    Bp = series_powers(B, N, N, one, zero)
    T = [[zero] * (N + 1) for _ in range(M + 1)]
    for m in range(M + 1):
        for j in range(N + 1):
            acc = zero
            for i in range(m + 1):
                x = Ap[i][m]
                if x and c[i][j]:
                    acc = acc + c[i][j] * x
            T[m][j] = acc
    R = [[zero] * (N + 1) for _ in range(M + 1)]
    for m in range(M + 1):
        for n in range(N + 1):
            acc = zero
            for j in range(n + 1):
                y = Bp[j][n]
                if y and T[m][j]:
                    acc = acc + T[m][j] * y
            R[m][n] = acc
    return R


def compose_with_phi(fp, base, orders):
    """Jet at (0,0) of (u,v) -> f(Phi_{z,w}(u,v)); entry (m,n) times m!n! is D^{m,n}f."""
    if isinstance(fp, OmegaFunction):
        fp = OmegaProvider(fp)
    M, N = orders
    p = as_point(base)
    if not in_domain(p, Domain.FINITE):
        raise PoleAtPoint("base point must lie in the finite chart of Omega")
    z, w = (to_exact(x) if not isinstance(x, complex) else x for x in p.values())
    c = fp.jet(p, (M, N)).coeffs
    R = compose_separable(c, inner_phi(z, w, M), inner_phi(w, z, N), M, N)
    return Jet2((ZERO, ZERO), (M, N), tuple(map(tuple, R)))


def definition_coefficient(f, m, n):
    """D^{m,n} f as an OmegaFunction, from the composition with symbolic base."""
    zs, ws = OmegaFunction.z(), OmegaFunction.w()
    c = symbolic_taylor_jet(f, (m, n)).coeffs
    A = inner_phi(zs, ws, m)
    B = inner_phi(ws, zs, n)
    zero, one = OmegaFunction.zero(), OmegaFunction.one()
    Ap = series_powers(A, m, m, one, zero)
    Bp = series_powers(B, n, n, one, zero)
    acc = zero
    for i in range(m + 1):
        for j in range(n + 1):
            if c[i][j] and Ap[i][m] and Bp[j][n]:
                acc = acc + c[i][j] * Ap[i][m] * Bp[j][n]
    return acc * (factorial(m) * factorial(n))


# ---------------------------------------------------------------- providers

class JetProvider:
    """Abstract holomorphic function known through its jets."""
    domain = Domain.OMEGA

    def jet(self, base, orders):
        raise NotImplementedError

    def value(self, base):
        return self.jet(base, (0, 0))[0, 0]


class OmegaProvider(JetProvider):
    def __init__(self, f, domain=None):
        self.f = f
        if domain is None:
            domain = _natural_domain(f)
        self.domain = domain

    def jet(self, base, orders):
        return taylor_jet(self.f, base, orders)


def _natural_domain(f):
    """Largest of Omega, Omega+, Omega-, finite chart on which f is holomorphic."""
    if any(i < 0 or j < 0 for i, j in f.terms):
        return Domain.FINITE
    plus = all(i <= f.k for i, j in f.terms)    # bounded as z -> inf
    minus = all(j <= f.k for i, j in f.terms)   # bounded as w -> inf
    if plus and minus:
        return Domain.OMEGA
    if plus:
        return Domain.OMEGA_PLUS
    if minus:
        return Domain.OMEGA_MINUS
    return Domain.FINITE


class FunctionProvider(JetProvider):
    """Wrap a callable (base values, orders) -> coefficient grid."""

    def __init__(self, fn, domain=Domain.OMEGA):
        self.fn = fn
        self.domain = domain

    def jet(self, base, orders):
        p = as_point(base)
        grid = self.fn(p.values(), orders)
        return Jet2(p.values(), orders, tuple(map(tuple, grid)))


def exp_provider(domain=Domain.BIDISK):
    """exp(z + w) = sum z^i w^j/(i! j!), an entire function, tagged with a bidisk domain."""
    def fn(base, orders):
        z0, w0 = (complex(x) for x in base)
        e = cmath.exp(z0 + w0)
        M, N = orders
        return [[e / (factorial(i) * factorial(j)) for j in range(N + 1)] for i in range(M + 1)]
    return FunctionProvider(fn, domain)


class PullbackProvider(JetProvider):
    """Jets of f o T for a Moebius map T, by univariate substitution."""

    def __init__(self, fp, T):
        if isinstance(fp, OmegaFunction):
            fp = OmegaProvider(fp)
        self.fp = fp
        self.T = T
        self.domain = fp.domain if fp.domain in (Domain.OMEGA, Domain.FINITE) else Domain.FINITE

    def jet(self, base, orders):
        M, N = orders
        p = as_point(base)
        z0, w0 = (to_exact(x) if not isinstance(x, complex) else x for x in p.values())
        T = self.T
        image = apply_map(T, p)
        if not image.is_finite:
            raise PoleAtPoint("image of the base point is not finite")
        a, b, c, d = T.a, T.b, T.c, T.d
        if not T.flip:
            A = moebius_series(a, b, c, d, z0, M)
            B = moebius_series(d, c, b, a, w0, N)
            A[0] = B[0] = ZERO
            cf = self.fp.jet(image, (M, N)).coeffs
            R = compose_separable(cf, A, B, M, N)
        else:
            # f(1/chi(w), 1/psi(z)): first slot of f depends on v, second on u
            A = moebius_series(b, a, d, c, w0, N)   # 1/chi
            B = moebius_series(c, d, a, b, z0, M)   # 1/psi
            A[0] = B[0] = ZERO
            cf = self.fp.jet(image, (N, M)).coeffs
            Rt = compose_separable(cf, A, B, N, M)
            R = [[Rt[n][m] for n in range(N + 1)] for m in range(M + 1)]
        return Jet2((z0, w0), (M, N), tuple(map(tuple, R)))


def pm_value_from_jets(fp, p, m, n):
    """D^{m,n} f(p) through the definition: m! n! [u^m v^n] f(Phi_p(u,v))."""
    return compose_with_phi(fp, p, (m, n)).derivative(m, n)


def check_pairing(fp, gp):
    """The mixed-domain pairings under which f * g converges."""
    allowed = {
        (Domain.BIDISK, Domain.OMEGA_PLUS),
        (Domain.OMEGA_MINUS, Domain.BIDISK),
        (Domain.OMEGA, Domain.OMEGA_PLUS),
        (Domain.OMEGA_MINUS, Domain.OMEGA),
        (Domain.OMEGA, Domain.OMEGA),
        (Domain.BIDISK, Domain.OMEGA),
        (Domain.OMEGA, Domain.BIDISK),
    }
    pair = (fp.domain, gp.domain)
    if pair not in allowed:
        raise DomainPairingViolation(f"no convergence result for the pairing {pair[0].value} x {pair[1].value}")
