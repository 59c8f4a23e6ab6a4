"""Dense univariate polynomials, rational functions and exact local
expansions over Q.

Polynomials are coefficient tuples (low degree first, no trailing
zeros, () is the zero polynomial).  Degrees in this package stay small,
so dense arithmetic is the right tool; there is deliberately no
factorization and no root isolation anywhere.
"""

from fractions import Fraction

__all__ = [
    "Poly", "RatFunc", "TruncSeries", "expand_at", "residue_at",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _primitive_int(coeffs):
    """Integer coefficient list (low first) with content 1, same roots."""
    from math import gcd as igcd, lcm

    if not coeffs:
        return []
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for x in ints:
        g = igcd(g, x)
        if g == 1:
            break
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def _pseudo_rem(a, b):
    """Pseudo-remainder of integer coefficient lists, low degree first."""
    r = list(a)
    d = len(b) - 1
    lead = b[-1]
    while len(r) - 1 >= d and any(r):
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < d:
            break
        f = r[-1]
        shift = len(r) - 1 - d
        r = [x * lead for x in r]
        for k, bc in enumerate(b):
            r[shift + k] -= f * bc
        while r and not r[-1]:
            r.pop()
    return r


def _monic_fractions(ints):
    lead = ints[-1]
    return [Fraction(x, lead) for x in ints]


def _trim(coeffs):
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Dense univariate polynomial over Q."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    @staticmethod
    def const(c):
        return Poly((Fraction(c),))

    @staticmethod
    def monomial(n, c=1):
        return Poly((0,) * n + (Fraction(c),))

    x = None  # set below: the identity polynomial t

    @property
    def degree(self):
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        q = [_ZERO] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                f = c / lead
                q[i - d] = f
                for j, oc in enumerate(other.coeffs):
                    rem[i - d + j] -= f * oc
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    def gcd(self, other):
        """Monic gcd via primitive pseudo-remainders over the integers
        (no rational arithmetic in the loop)."""
        a = _primitive_int(self.coeffs)
        b = _primitive_int(other.coeffs)
        if not a:
            return Poly(b and _monic_fractions(b))
        if not b:
            return Poly(_monic_fractions(a))
        if len(a) < len(b):
            a, b = b, a
        while b:
            r = _pseudo_rem(a, b)
            a, b = b, _primitive_int(r)
        return Poly(_monic_fractions(a))

    def shift(self, a):
        """Compose with t -> a + u, returning coefficients in u."""
        a = Fraction(a)
        acc = []
        for c in reversed(self.coeffs):
            # Horner step: acc := acc * (a + u) + c
            new = [_ZERO] * (len(acc) + 1)
            for i, v in enumerate(acc):
                new[i] += v * a
                new[i + 1] += v
            new[0] += c
            acc = new
        return Poly(acc)

    def valuation_at(self, a):
        """Order of vanishing at t = a (None for the zero polynomial)."""
        if self.is_zero():
            return None
        shifted = self.shift(a).coeffs
        for i, c in enumerate(shifted):
            if c:
                return i
        return None

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*t^{i}" if i else f"{c}")
        return "Poly(" + " + ".join(terms) + ")"


Poly.x = Poly((0, 1))


class RatFunc:
    """Quotient of two polynomials, stored reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = Poly.const(1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.coeffs[-1]
            if lead != 1:
                num = num * (1 / lead)
                den = den.monic()
        self.num = num
        self.den = den

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(self.num * other, self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def valuation_at(self, a):
        """Order at t = a; None when the function is zero."""
        if self.is_zero():
            return None
        return self.num.valuation_at(a) - (self.den.valuation_at(a) or 0)

    def valuation_at_infinity(self):
        if self.is_zero():
            return None
        return self.den.degree - self.num.degree

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"


class TruncSeries:
    """Exact Laurent expansion at a center, valid through order N-1.

    Coefficients cover exponents lo..N-1 of (t - center); lo may be
    negative.  Arithmetic tracks the guaranteed window exactly.
    """

    __slots__ = ("center", "lo", "order", "coeffs")

    def __init__(self, center, lo, order, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        # normalize: lo points at the first nonzero coefficient
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            lo += 1
        if not coeffs:
            lo = order
        self.center = Fraction(center)
        self.lo = lo
        self.order = order
        self.coeffs = tuple(coeffs)

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, e):
        if e < self.lo or e >= self.order:
            return _ZERO
        return self.coeffs[e - self.lo]

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and (self.center, self.lo, self.order, self.coeffs)
            == (other.center, other.lo, other.order, other.coeffs)
        )

    def __mul__(self, other):
        if self.center != other.center:
            raise ValueError("series have different centers")
        if self.is_zero() or other.is_zero():
            return TruncSeries(self.center, 0, min(self.order, other.order), ())
        lo = self.lo + other.lo
        order = min(self.lo + other.order, other.lo + self.order)
        out = [_ZERO] * max(0, order - lo)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b and i + j < len(out):
                        out[i + j] += a * b
        return TruncSeries(self.center, lo, order, out)

    def __add__(self, other):
        if self.center != other.center:
            raise ValueError("series have different centers")
        order = min(self.order, other.order)
        lo = min(self.lo, other.lo, order)
        out = [_ZERO] * (order - lo)
        for src in (self, other):
            for i, c in enumerate(src.coeffs):
                e = src.lo + i
                if e < order:
                    out[e - lo] += c
        return TruncSeries(self.center, lo, order, out)

    def __repr__(self):
        terms = [f"{c}*u^{self.lo + i}" for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms) if terms else "0"
        return f"TruncSeries({body} + O(u^{self.order}) at t={self.center})"


def _series_inverse(coeffs, n):
    """Inverse of a unit power series mod u^n (coeffs[0] != 0)."""
    inv0 = 1 / coeffs[0]
    out = [inv0] + [_ZERO] * (n - 1)
    for k in range(1, n):
        s = _ZERO
        for j in range(1, min(k, len(coeffs) - 1) + 1):
            s += coeffs[j] * out[k - j]
        out[k] = -inv0 * s
    return out


def expand_at(f, a, order):
    """Laurent expansion of a rational function at t = a through order-1.

    The returned series has lo equal to the valuation of f at a.  The
    zero function yields the empty series.
    """
    if not isinstance(f, RatFunc):
        f = RatFunc(f)
    a = Fraction(a)
    if f.is_zero():
        return TruncSeries(a, 0, order, ())
    num = f.num.shift(a).coeffs
    den = f.den.shift(a).coeffs
    vn = next(i for i, c in enumerate(num) if c)
    vd = next(i for i, c in enumerate(den) if c)
    lo = vn - vd
    n = order - lo
    if n <= 0:
        return TruncSeries(a, 0, order, ())
    nu = list(num[vn:])
    de = list(den[vd:])
    inv = _series_inverse(de, n)
    out = [_ZERO] * n
    for i, c in enumerate(nu[:n]):
        if c:
            for j in range(n - i):
                if inv[j]:
                    out[i + j] += c * inv[j]
    return TruncSeries(a, lo, order, out)


def residue_at(f, a):
    """Coefficient of (t - a)^-1 in the expansion of f at the finite point a."""
    series = expand_at(f, a, 0)
    return series.coefficient(-1)
