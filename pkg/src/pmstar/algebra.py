"""Exact function class p(z,w)/(1-zw)^k with p a Laurent polynomial.

Coefficients are Gaussian rationals.  A numerator is a dict mapping the
exponent pair (i, j) of z^i w^j to a nonzero coefficient.  Because zw and
1-zw are both invariant under z -> t z, w -> w/t, divisibility by (1-zw)
can be decided one diagonal i-j = const at a time: on each diagonal the
numerator is a Laurent polynomial in t = zw, and it is divisible by 1-t
iff its coefficients sum to zero.
"""
import re
from fractions import Fraction
from math import comb

from .errors import (ExpressionSyntaxError, NoFiniteLimit, PoleAtPoint,
                     UnrepresentableDenominator, ZeroFunction, NotClassPreserving)
from .gaussian import GaussianRational, ONE, ZERO, I, to_exact, is_exact
from .geometry import as_point, in_domain, flip_point, Domain

_G = GaussianRational


def _coef(x):
    return x if isinstance(x, GaussianRational) else GaussianRational.of(x)


# ---------------------------------------------------------------- numerators

def _padd(p, q, sign=1):
    out = dict(p)
    for key, c in q.items():
        v = out.get(key)
        if v is None:
            out[key] = c if sign == 1 else -c
        else:
            v = v + c if sign == 1 else v - c
            if v:
                out[key] = v
            else:
                del out[key]
    return out


def _pscale(p, c):
    if not c:
        return {}
    if c == ONE:
        return dict(p)
    return {key: v * c for key, v in p.items()}


def _pmul(p, q):
    if len(p) > len(q):
        p, q = q, p
    out = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            key = (i1 + i2, j1 + j2)
            v = out.get(key)
            out[key] = c1 * c2 if v is None else v + c1 * c2
    return {key: v for key, v in out.items() if v}


def _pshift(p, a, b):
    return {(i + a, j + b): c for (i, j), c in p.items()}


def _metric_power(r):
    """Numerator of (1-zw)^r for r >= 0."""
    return {(s, s): _G._make(Fraction((-1) ** s * comb(r, s)), Fraction(0))
            for s in range(r + 1)}


def _times_metric(p, r):
    if r == 0 or not p:
        return dict(p)
    if r == 1:
        return _padd(p, _pshift(p, 1, 1), -1)
    return _pmul(p, _metric_power(r))


def _diagonals(p):
    diag = {}
    for (i, j), c in p.items():
        diag.setdefault(i - j, {})[j] = c
    return diag


def _divisible(p):
    if not p:
        return True
    sums = {}
    for (i, j), c in p.items():
        d = i - j
        s = sums.get(d)
        sums[d] = c if s is None else s + c
    return not any(sums.values())


def _divide_metric(p):
    """Exact quotient p/(1-zw); p must be divisible."""
    out = {}
    for d, row in _diagonals(p).items():
        js = sorted(row)
        acc = ZERO
        for j in range(js[0], js[-1]):
            c = row.get(j)
            if c is not None:
                acc = acc + c
            if acc:
                out[(j + d, j)] = acc
    return out


def _pderiv(p, slot):
    out = {}
    if slot == "z":
        for (i, j), c in p.items():
            if i:
                out[(i - 1, j)] = c * i
    else:
        for (i, j), c in p.items():
            if j:
                out[(i, j - 1)] = c * j
    return out


# ---------------------------------------------------------------- the class

class OmegaFunction:
    """p(z,w)/(1-zw)^k in normalized form (k minimal)."""
    __slots__ = ("terms", "k", "_hash")

    def __init__(self, terms=None, k=0, normalize=True):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = dict(terms)
        terms = {(int(i), int(j)): _coef(c) for (i, j), c in terms.items()}
        terms = {key: c for key, c in terms.items() if c}
        if k < 0:
            terms = _times_metric(terms, -k)
            k = 0
        if normalize:
            while k > 0 and _divisible(terms):
                terms = _divide_metric(terms)
                k -= 1
        if not terms:
            k = 0
        self.terms = terms
        self.k = k
        self._hash = None

    @classmethod
    def _raw(cls, terms, k):
        f = object.__new__(cls)
        if not terms:
            k = 0
        else:
            while k > 0 and _divisible(terms):
                terms = _divide_metric(terms)
                k -= 1
        f.terms = terms
        f.k = k
        f._hash = None
        return f

    # constructors
    @classmethod
    def zero(cls):
        return cls._raw({}, 0)

    @classmethod
    def const(cls, c):
        c = _coef(c)
        return cls._raw({(0, 0): c} if c else {}, 0)

    @classmethod
    def one(cls):
        return cls.const(ONE)

    @classmethod
    def monomial(cls, i, j, c=1, k=0):
        return cls({(i, j): c}, k)

    @classmethod
    def z(cls):
        return cls.monomial(1, 0)

    @classmethod
    def w(cls):
        return cls.monomial(0, 1)

    @classmethod
    def metric(cls, r=1):
        """(1-zw)^r for any integer r."""
        if r >= 0:
            return cls._raw(_metric_power(r), 0)
        return cls._raw({(0, 0): ONE}, -r)

    @classmethod
    def basis(cls, p, q):
        """f_{p,q} = z^p w^q/(1-zw)^max(p,q)."""
        return cls._raw({(p, q): ONE}, max(p, q))

    # basic protocol
    def __repr__(self):
        return f"OmegaFunction({str(self)!r})"

    def __str__(self):
        return format_function(self)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, OmegaFunction):
            return self.k == other.k and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == OmegaFunction.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.k, frozenset(self.terms.items())))
        return self._hash

    def is_constant(self):
        return self.k == 0 and set(self.terms) <= {(0, 0)}

    def is_polynomial(self):
        return self.k == 0 and all(i >= 0 and j >= 0 for i, j in self.terms)

    # ring operations
    def _lift(self, other):
        if isinstance(other, OmegaFunction):
            return other
        return OmegaFunction.const(other)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        K = max(self.k, other.k)
        p = _times_metric(self.terms, K - self.k)
        q = _times_metric(other.terms, K - other.k)
        return OmegaFunction._raw(_padd(p, q), K)

    __radd__ = __add__

    def __neg__(self):
        return OmegaFunction._raw({key: -c for key, c in self.terms.items()}, self.k)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, OmegaFunction):
            if not self.terms or not other.terms:
                return OmegaFunction.zero()
            return OmegaFunction._raw(_pmul(self.terms, other.terms), self.k + other.k)
        c = _coef(other)
        return OmegaFunction._raw(_pscale(self.terms, c), self.k)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, OmegaFunction):
            return self * other.inverse()
        c = _coef(other)
        return OmegaFunction._raw(_pscale(self.terms, c.inverse()), self.k)

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = OmegaFunction.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        return self * _coef(c)

    def times_monomial(self, a, b, c=ONE):
        c = _coef(c)
        if not c:
            return OmegaFunction.zero()
        return OmegaFunction._raw({(i + a, j + b): v * c for (i, j), v in self.terms.items()}, self.k)

    def times_metric(self, r):
        """Multiply by (1-zw)^r for any integer r."""
        if r >= 0:
            if r <= self.k:
                return OmegaFunction._raw(dict(self.terms), self.k - r)
            return OmegaFunction._raw(_times_metric(self.terms, r - self.k), 0)
        return OmegaFunction._raw(dict(self.terms), self.k - r)

    def factor_metric(self):
        """(e, q) with self = q * (1-zw)^e and q not divisible by 1-zw."""
        if not self.terms:
            return 0, self
        p, r = self.terms, 0
        while _divisible(p):
            p = _divide_metric(p)
            r += 1
        return r - self.k, OmegaFunction._raw(p, 0)

    def inverse(self):
        if not self.terms:
            raise ZeroDivisionError("division by the zero function")
        e, q = self.factor_metric()
        if len(q.terms) != 1:
            raise UnrepresentableDenominator(
                f"denominator {self} has factors other than z, w and (1-zw)")
        (a, b), c = next(iter(q.terms.items()))
        return OmegaFunction._raw({(-a, -b): c.inverse()}, 0).times_metric(-e)

    # calculus
    def diff(self, slot="z", order=1):
        f = self
        for _ in range(order):
            f = f._diff1(slot)
        return f

    def d_z(self, order=1):
        return self.diff("z", order)

    def d_w(self, order=1):
        return self.diff("w", order)

    def _diff1(self, slot):
        p, k = self.terms, self.k
        dp = _pderiv(p, slot)
        if k == 0:
            return OmegaFunction._raw(dp, 0)
        # d/dz [p (1-zw)^-k] = [(1-zw) p_z + k w p] (1-zw)^-(k+1)
        shift = (0, 1) if slot == "z" else (1, 0)
        num = _padd(_times_metric(dp, 1), _pscale(_pshift(p, *shift), _G(k)))
        return OmegaFunction._raw(num, k + 1)

    # pullbacks
    def swap(self):
        return OmegaFunction._raw({(j, i): c for (i, j), c in self.terms.items()}, self.k)

    def flip(self):
        """f(1/w, 1/z), using (1 - 1/(zw))^-k = (-zw)^k (1-zw)^-k."""
        k = self.k
        sign = ONE if k % 2 == 0 else -ONE
        return OmegaFunction._raw(
            {(k - j, k - i): c * sign for (i, j), c in self.terms.items()}, k)

    def dilate(self, gamma):
        """f(gamma z, w/gamma)."""
        g = _coef(gamma)
        return OmegaFunction._raw({(i, j): c * g ** (i - j) for (i, j), c in self.terms.items()}, self.k)

    def conj_coeffs(self):
        return OmegaFunction._raw({key: c.conjugate() for key, c in self.terms.items()}, self.k)

    # evaluation
    def evaluate(self, p):
        return evaluate(self, p)

    def __call__(self, z, w):
        return evaluate(self, (z, w))

    def homogeneity_degree(self):
        return homogeneity_degree(self)

    # serialization
    def to_json(self):
        return {"numerator": [[i, j, str(c.re), str(c.im)] for (i, j), c in _ordered(self.terms)],
                "k": self.k}

    @classmethod
    def from_json(cls, data):
        terms = {(int(i), int(j)): _G(Fraction(re), Fraction(im)) for i, j, re, im in data["numerator"]}
        return cls(terms, int(data["k"]))


# ---------------------------------------------------------------- operations

def arithmetic(op, f, g=None):
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "neg":
        return -f
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


def wirtinger_derivative(f, slot, order):
    if order < 0:
        raise ValueError("order must be >= 0")
    return f.diff(slot, order)


def pullback_transform(f, kind, arg=None):
    """Pull f back along flip, swap, dilation(gamma) or a class-preserving Moebius map."""
    if kind == "flip":
        return f.flip()
    if kind == "swap":
        return f.swap()
    if kind == "dilation":
        return f.dilate(arg)
    if kind == "moebius":
        return moebius_pullback(f, arg)
    raise ValueError(f"unknown pullback kind {kind!r}")


def moebius_pullback(f, T):
    """f o T for T diagonal or antidiagonal (with or without flip)."""
    if T.is_diagonal:
        g = f.dilate(_coef(T.a) / _coef(T.d))
    elif T.is_antidiagonal:
        # psi(z) = gamma/z with gamma = b/c: T = rho_gamma o inversion
        gamma = _coef(T.b) / _coef(T.c)
        g = f.dilate(gamma).flip().swap()
    else:
        raise NotClassPreserving("general Moebius pullbacks leave the class; use the jets module")
    # F commutes with T, so f o T o F = (f o T) o F
    return g.flip() if T.flip else g


def _eval_finite(f, z, w):
    if not f.terms:
        return ZERO
    zero_z = z == 0
    zero_w = w == 0
    for i, j in f.terms:
        if i < 0 and zero_z:
            raise PoleAtPoint("z")
        if j < 0 and zero_w:
            raise PoleAtPoint("w")
    s = 1 - z * w
    if f.k and s == 0:
        raise PoleAtPoint("1-zw")
    zp, wp = {}, {}
    total = ZERO
    for (i, j), c in f.terms.items():
        a = zp.get(i)
        if a is None:
            a = zp[i] = z ** i
        b = wp.get(j)
        if b is None:
            b = wp[j] = w ** j
        total = total + c * a * b
    if f.k:
        total = total / s ** f.k
    return total


def evaluate(f, p):
    """Exact value at a rational point, complex double otherwise.

    Points with an infinite slot are evaluated through the flip chart,
    f(p) = (f o F)(F p).  Float inputs are converted to their exact binary
    rationals first, so there is no cancellation error in the sum.
    """
    p = as_point(p)
    exact = all(is_exact(c.num) and is_exact(c.den) for c in (p.z, p.w))
    if not in_domain(p, Domain.OMEGA):
        raise PoleAtPoint("1-zw")
    if p.is_finite:
        g, q = f, p
    else:
        g, q = f.flip(), flip_point(p)
    z, w = to_exact(q.z.value), to_exact(q.w.value)
    try:
        value = _eval_finite(g, z, w)
    except PoleAtPoint:
        if g is f:
            raise
        raise NoFiniteLimit(f"{f} has no finite limit at {p}")
    return value if exact else complex(value)


def homogeneity_degree(f):
    if not f.terms:
        raise ZeroFunction("homogeneity degree of the zero function")
    degrees = {i - j for i, j in f.terms}
    return degrees.pop() if len(degrees) == 1 else None


# ---------------------------------------------------------------- printing

def _ordered(terms):
    return sorted(terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][1], kv[0][0]))


def _monomial_str(i, j):
    parts = []
    for name, e in (("z", i), ("w", j)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _term_str(c, i, j):
    """(sign, body) for one monomial."""
    mono = _monomial_str(i, j)
    if c.is_real():
        sign = "-" if c.re < 0 else "+"
        mag = abs(c.re)
        if not mono:
            return sign, str(mag)
        if mag == 1:
            return sign, mono
        return sign, f"{mag}*{mono}"
    cs = f"({c})"
    return "+", cs if not mono else f"{cs}*{mono}"


def _poly_str(terms):
    if not terms:
        return "0"
    out = []
    for n, ((i, j), c) in enumerate(_ordered(terms)):
        sign, body = _term_str(c, i, j)
        if n == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(sign + body)
    return "".join(out)


def format_function(f):
    """Canonical text: the numerator with all (1-zw) factors pulled out."""
    if not f.terms:
        return "0"
    e, q = f.factor_metric()
    body = _poly_str(q.terms)
    multi = len(q.terms) > 1
    if e == 0:
        return body
    metric = "(1-z*w)" if abs(e) == 1 else f"(1-z*w)^{abs(e)}"
    if e > 0:
        if q.terms == {(0, 0): ONE}:
            return metric
        if q.terms == {(0, 0): -ONE}:
            return "-" + metric
        return f"({body})*{metric}" if multi else f"{body}*{metric}"
    return f"({body})/{metric}" if multi else f"{body}/{metric}"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)(i?)|([zwi])|([-+*/^()]))")


def _tokenize(text):
    pos, tokens = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(f"unexpected character {text[start]!r}", start, text)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        num, imag, name, op = m.groups()
        if num is not None:
            value = Fraction(num)
            tokens.append(("num", _G(0, value) if imag else _G(value), start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            rhs = self.factor()
            if op[1] == "*":
                value = value * rhs
            else:
                if not rhs:
                    self.error("division by zero", op)
                value = value / rhs
        return value

    def factor(self):
        if self.peek()[:2] in (("op", "-"), ("op", "+")):
            op = self.take()[1]
            value = self.factor()
            return -value if op == "-" else value
        value = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] in (("op", "-"), ("op", "+")):
                sign = -1 if self.take()[1] == "-" else 1
            tok = self.take()
            if tok[0] != "num" or not tok[1].is_real() or tok[1].re.denominator != 1:
                self.error("exponent must be an integer", tok)
            n = sign * int(tok[1].re)
            if n < 0 and not value:
                self.error("zero raised to a negative power", tok)
            value = value ** n
        return value

    def base(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return OmegaFunction.const(val)
        if kind == "name":
            if val == "z":
                return OmegaFunction.z()
            if val == "w":
                return OmegaFunction.w()
            return OmegaFunction.const(I)
        if tok[:2] == ("op", "("):
            value = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return value
        self.error("expected a number, z, w or '('", tok)


def parse_expression(text):
    return _Parser(text).parse()


def parse_function(x):
    """Accept an OmegaFunction, a scalar, or an expression string."""
    if isinstance(x, OmegaFunction):
        return x
    if isinstance(x, str):
        return parse_expression(x)
    return OmegaFunction.const(x)
