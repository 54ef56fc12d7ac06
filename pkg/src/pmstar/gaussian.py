"""Exact complex numbers with rational real and imaginary parts."""
from fractions import Fraction

_EXACT = (int, Fraction)


def _q(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            self.re, self.im = re.re, re.im + _q(im)
            return
        if isinstance(re, complex):
            self.re, self.im = Fraction(re.real), Fraction(re.imag) + _q(im)
            return
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _make(re, im):
        g = object.__new__(GaussianRational)
        g.re = re
        g.im = im
        return g

    # construction from loose input
    @classmethod
    def of(cls, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, _EXACT):
            return cls._make(Fraction(x), Fraction(0))
        if isinstance(x, (float, complex)):
            return cls(complex(x))
        if isinstance(x, str):
            return parse_gaussian(x)
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        s = _imag_str(self.im)
        sign = "" if s.startswith("-") else "+"
        return f"{self.re}{sign}{s}"

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _EXACT):
            return not self.im and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def is_real(self):
        return not self.im

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return abs(complex(self))

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, o):
        if isinstance(o, GaussianRational):
            return GaussianRational._make(self.re + o.re, self.im + o.im)
        if isinstance(o, _EXACT):
            return GaussianRational._make(self.re + o, self.im)
        if isinstance(o, (float, complex)):
            return complex(self) + o
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, GaussianRational):
            return GaussianRational._make(self.re - o.re, self.im - o.im)
        if isinstance(o, _EXACT):
            return GaussianRational._make(self.re - o, self.im)
        if isinstance(o, (float, complex)):
            return complex(self) - o
        return NotImplemented

    def __rsub__(self, o):
        return (-self).__add__(o)

    def __mul__(self, o):
        if isinstance(o, GaussianRational):
            a, b, c, d = self.re, self.im, o.re, o.im
            if not b:
                if not d:
                    return GaussianRational._make(a * c, b)
                return GaussianRational._make(a * c, a * d)
            if not d:
                return GaussianRational._make(a * c, b * c)
            return GaussianRational._make(a * c - b * d, a * d + b * c)
        if isinstance(o, _EXACT):
            return GaussianRational._make(self.re * o, self.im * o)
        if isinstance(o, (float, complex)):
            return complex(self) * o
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._make(self.re / n, -self.im / n)

    def __truediv__(self, o):
        if isinstance(o, GaussianRational):
            if not o.im:
                if not o.re:
                    raise ZeroDivisionError("GaussianRational division by zero")
                return GaussianRational._make(self.re / o.re, self.im / o.re)
            return self * o.inverse()
        if isinstance(o, _EXACT):
            if not o:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational._make(self.re / o, self.im / o)
        if isinstance(o, (float, complex)):
            return complex(self) / o
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, _EXACT):
            return GaussianRational._make(Fraction(o), Fraction(0)) / self
        if isinstance(o, (float, complex)):
            return o / complex(self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def _imag_str(q):
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{q}*i"


def parse_gaussian(text):
    """Parse 'a', 'a+bi', 'bi' or 'a,b' with rational or decimal parts.

    Anything else (e.g. 'i/10', '(1+i)/20') is read as a constant expression.
    """
    try:
        return _parse_simple(text)
    except ValueError:
        pass
    from .algebra import parse_expression
    f = parse_expression(text)
    if f.k or any(ij != (0, 0) for ij in f.terms):
        raise ValueError(f"not a constant: {text!r}")
    return f.terms.get((0, 0), ZERO)


def _parse_simple(text):
    s = text.strip().replace(" ", "")
    if "," in s:
        a, b = s.split(",", 1)
        return GaussianRational(_q(a), _q(b))
    if not s.endswith("i"):
        return GaussianRational(_q(s))
    body = s[:-1].rstrip("*")
    # split at the last sign that is not part of an exponent
    cut = -1
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            cut = pos
            break
    if cut == -1:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    return GaussianRational(_q(re_part), _q(im_part))


ZERO = GaussianRational._make(Fraction(0), Fraction(0))
ONE = GaussianRational._make(Fraction(1), Fraction(0))
I = GaussianRational._make(Fraction(0), Fraction(1))


def is_exact(x):
    return isinstance(x, (GaussianRational, int, Fraction))


def to_exact(x):
    """Exact value of x; floats convert to their exact binary rationals."""
    return GaussianRational.of(x)


