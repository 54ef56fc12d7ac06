"""Points of the extended plane squared, the domain Omega, and the group M.

Each slot of a point is stored projectively as (num, den), so the rule
0 * inf = 1 becomes the polynomial test z.num*w.num != z.den*w.den.
"""
from dataclasses import dataclass
from enum import Enum

from .errors import DecompositionOutOfChart, SingularPrefactor
from .gaussian import GaussianRational, ONE, ZERO


class Domain(str, Enum):
    OMEGA = "Omega"
    OMEGA_PLUS = "OmegaPlus"
    OMEGA_MINUS = "OmegaMinus"
    FINITE = "FiniteChart"
    BIDISK = "Bidisk"


def _exactify(x):
    if isinstance(x, int):
        return GaussianRational(x)
    return x


@dataclass(frozen=True, eq=False)
class ProjectiveCoord:
    num: object
    den: object = 1

    def __post_init__(self):
        if self.num == 0 and self.den == 0:
            raise ValueError("projective coordinate (0:0) is invalid")

    @classmethod
    def of(cls, x):
        if isinstance(x, ProjectiveCoord):
            return x
        if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        if isinstance(x, float) and x == float("inf"):
            return INF
        if isinstance(x, str):
            x = GaussianRational.of(x)
        return cls(x, 1)

    @property
    def is_infinite(self):
        return self.den == 0

    @property
    def value(self):
        """Affine value; raises for the point at infinity."""
        if self.is_infinite:
            raise ValueError("coordinate is infinite")
        if self.den == 1:
            return self.num
        return _exactify(self.num) / self.den

    def canonical(self):
        if self.is_infinite:
            return ProjectiveCoord(1, 0)
        return ProjectiveCoord(self.value, 1)

    def reciprocal(self):
        return ProjectiveCoord(self.den, self.num)

    def __eq__(self, other):
        if not isinstance(other, ProjectiveCoord):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        c = self.canonical()
        return hash((c.num, c.den))

    def __str__(self):
        return "inf" if self.is_infinite else str(self.value)


INF = ProjectiveCoord(1, 0)


@dataclass(frozen=True)
class ExtPoint2:
    z: ProjectiveCoord
    w: ProjectiveCoord

    @property
    def is_finite(self):
        return not (self.z.is_infinite or self.w.is_infinite)

    def values(self):
        return self.z.value, self.w.value

    def __str__(self):
        return f"({self.z}; {self.w})"


def point(z, w):
    """Build an ExtPoint2 from numbers, 'inf' strings or ProjectiveCoords."""
    return ExtPoint2(ProjectiveCoord.of(z), ProjectiveCoord.of(w))


def as_point(p):
    if isinstance(p, ExtPoint2):
        return p
    z, w = p
    return point(z, w)


def in_domain(p, which=Domain.OMEGA):
    p = as_point(p)
    which = Domain(which)
    z, w = p.z, p.w
    in_omega = z.num * w.num != z.den * w.den
    if which is Domain.OMEGA:
        return in_omega
    if which is Domain.OMEGA_PLUS:
        return in_omega and not w.is_infinite
    if which is Domain.OMEGA_MINUS:
        return in_omega and not z.is_infinite
    if which is Domain.FINITE:
        return in_omega and p.is_finite
    if which is Domain.BIDISK:
        return p.is_finite and abs(complex(z.value)) < 1 and abs(complex(w.value)) < 1
    raise ValueError(which)


def flip_point(p):
    p = as_point(p)
    return ExtPoint2(p.w.reciprocal(), p.z.reciprocal())


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """psi(z) = (a z + b)/(c z + d) acting as (psi(z), 1/psi(1/w)), then F if flip."""
    a: object
    b: object
    c: object
    d: object
    flip: bool = False

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("singular Moebius matrix")

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def psi(self, x):
        x = ProjectiveCoord.of(x)
        return ProjectiveCoord(self.a * x.num + self.b * x.den,
                               self.c * x.num + self.d * x.den)

    def chi(self, x):
        # 1/psi(1/w) is the matrix (d, c; b, a) acting on w
        x = ProjectiveCoord.of(x)
        return ProjectiveCoord(self.d * x.num + self.c * x.den,
                               self.b * x.num + self.a * x.den)

    def __call__(self, p):
        return apply_map(self, p)

    def normalized(self):
        entries = (self.a, self.b, self.c, self.d)
        lead = next(e for e in entries if e != 0)
        a, b, c, d = (_exactify(e) / lead for e in entries)
        return (a, b, c, d, self.flip)

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __repr__(self):
        return f"MoebiusMap({self.a}, {self.b}, {self.c}, {self.d}, flip={self.flip})"

    @property
    def is_diagonal(self):
        return self.b == 0 and self.c == 0

    @property
    def is_antidiagonal(self):
        return self.a == 0 and self.d == 0


def identity_map():
    return MoebiusMap(ONE, ZERO, ZERO, ONE)


def flip_map():
    return MoebiusMap(ONE, ZERO, ZERO, ONE, True)


def phi_map(z, w):
    """Phi_{z,w}(u,v) = ((z+u)/(1+wu), (w+v)/(1+zv))."""
    return MoebiusMap(ONE, _exactify(z), _exactify(w), ONE)


def dilation_map(gamma):
    """rho_gamma(u,v) = (gamma u, v/gamma)."""
    return MoebiusMap(_exactify(gamma), ZERO, ZERO, ONE)


def inversion_map():
    """(z,w) -> (1/z, 1/w)."""
    return MoebiusMap(ZERO, ONE, ONE, ZERO)


def swap_map():
    """(z,w) -> (w,z), which is the inversion composed with F."""
    return MoebiusMap(ZERO, ONE, ONE, ZERO, True)


def apply_map(T, p):
    p = as_point(p)
    z, w = T.psi(p.z), T.chi(p.w)
    if T.flip:
        return ExtPoint2(w.reciprocal(), z.reciprocal())
    return ExtPoint2(z, w)


def compose_maps(T1, T2):
    """T1 after T2.  F is central, so flip flags combine by XOR."""
    a = T1.a * T2.a + T1.b * T2.c
    b = T1.a * T2.b + T1.b * T2.d
    c = T1.c * T2.a + T1.d * T2.c
    d = T1.c * T2.b + T1.d * T2.d
    return MoebiusMap(a, b, c, d, T1.flip != T2.flip)


def inverse_map(T):
    return MoebiusMap(T.d, -T.b, -T.c, T.a, T.flip)


def decompose_map(T):
    """Return (gamma, base, flip) with T = rho_gamma o Phi_base (o F if flip)."""
    if T.a == 0 or T.d == 0:
        raise DecompositionOutOfChart(
            "T (or T o F) does not send the origin to a finite point")
    a, b, c, d = (_exactify(e) for e in (T.a, T.b, T.c, T.d))
    gamma = a / d
    return gamma, point(b / a, c / d), T.flip


def recompose_map(gamma, base, flip=False):
    base = as_point(base)
    z, w = base.values()
    T = compose_maps(dilation_map(gamma), phi_map(z, w))
    return compose_maps(T, flip_map()) if flip else T


def invariance_prefactor(T, m, n, p):
    """Factor c with D^{m,n}(f o T)(p) = c * (D^{m',n'} f)(T p).

    For flip-free T, (m',n') = (m,n) and c = ((a+bw)/(cz+d))^(m-n).
    For T with flip, (m',n') = (n,m) and c = ((az+b)/(dw+c))^(n-m).
    """
    p = as_point(p)
    z, w = (_exactify(x) for x in p.values())
    e = m - n
    if not T.flip:
        num = T.a + T.b * w
        den = T.c * z + T.d
    else:
        num = T.a * z + T.b
        den = T.d * w + T.c
        e = -e
    if e == 0:
        return ONE
    if num == 0 or den == 0:
        raise SingularPrefactor("prefactor denominator vanishes at the point")
    return (num / den) ** e
