"""Dense univariate polynomials over a pluggable coefficient ring.

A "ring" here is a small adapter object exposing zero/one/coerce and the
arithmetic callbacks.  This keeps one polynomial engine usable over the
rationals, finite fields, real quadratic and biquadratic fields, and over
polynomial rings themselves (which is how the bivariate resultants used by
the curve eliminations are computed: as univariate polynomials whose
coefficients are again polynomials).

Degrees in this project stay below ~25, so storage is dense and the
algorithms are the classical ones.  Resultants use the subresultant PRS to
avoid coefficient blowup; a naive Sylvester determinant (fraction-free
Bareiss) is kept alongside as an independent oracle for low degrees.
"""

from __future__ import annotations

from fractions import Fraction


class QQ:
    """Ring adapter for exact rationals backed by fractions.Fraction."""

    is_field = True
    name = "QQ"

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def coerce(v):
        return Fraction(v)

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def eq(a, b):
        return a == b

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        return 1 / a

    @staticmethod
    def divexact(a, b):
        return a / b


class Poly:
    """Immutable dense polynomial; coeffs[i] multiplies x^i."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        while coeffs and ring.is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_ints(cls, ring, ints):
        return cls(ring, [ring.coerce(c) for c in ints])

    @classmethod
    def const(cls, ring, c):
        return cls(ring, [c])

    @classmethod
    def x(cls, ring):
        return cls(ring, [ring.zero, ring.one])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def lc(self):
        if not self.coeffs:
            return self.ring.zero
        return self.coeffs[-1]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.ring.eq(self.lc(), self.ring.one)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((len(self.coeffs),))

    def __add__(self, other):
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(R, [R.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other):
        R = self.ring
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(R, [R.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return Poly(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        R = self.ring
        if self.is_zero() or other.is_zero():
            return Poly(R, [])
        out = [R.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if R.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = R.add(out[i + j], R.mul(a, b))
        return Poly(R, out)

    def scale(self, c):
        R = self.ring
        return Poly(R, [R.mul(c, a) for a in self.coeffs])

    def shift_x(self, k: int):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.ring, (self.ring.zero,) * k + self.coeffs)

    def __pow__(self, n: int):
        assert n >= 0
        out = Poly.const(self.ring, self.ring.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        inv = self.ring.inv(self.lc())
        return self.scale(inv)

    def divmod(self, other):
        """Quotient and remainder; needs lc(other) invertible in the ring."""
        R = self.ring
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv_lead = R.inv(other.lc())
        q = [R.zero] * max(0, len(self.coeffs) - len(other.coeffs) + 1)
        rem = list(self.coeffs)
        db = other.degree()
        for i in range(len(rem) - 1, db - 1, -1):
            if R.is_zero(rem[i]):
                continue
            c = R.mul(rem[i], inv_lead)
            q[i - db] = c
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = R.sub(rem[i - db + j], R.mul(c, b))
        return Poly(R, q), Poly(R, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def divexact(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def divexact_scalar(self, c):
        R = self.ring
        return Poly(R, [R.divexact(a, c) for a in self.coeffs])

    def derivative(self):
        R = self.ring
        out = []
        for i in range(1, len(self.coeffs)):
            n = R.coerce(i)
            out.append(R.mul(n, self.coeffs[i]))
        return Poly(R, out)

    def evaluate(self, x, ring=None):
        """Horner evaluation; with ring given, coefficients are coerced first."""
        R = ring or self.ring
        acc = R.zero
        for c in reversed(self.coeffs):
            cv = R.coerce(c) if ring is not None else c
            acc = R.add(R.mul(acc, x), cv)
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly(self.ring, [])
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.const(self.ring, c)
        return acc

    def shifted(self, a) -> "Poly":
        """Substitute x -> x + a."""
        x_plus = Poly(self.ring, [a, self.ring.one])
        return self.compose(x_plus)

    def map_coeffs(self, fn, ring=None):
        R = ring or self.ring
        return Poly(R, [fn(c) for c in self.coeffs])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if self.ring.is_zero(c):
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"({c})*x")
            else:
                terms.append(f"({c})*x^{i}")
        return " + ".join(terms)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over a field."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) undefined")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_ext_gcd(f: Poly, g: Poly):
    """Return (d, s, t) with s*f + t*g = d, d monic, over a field."""
    R = f.ring
    zero, one = Poly(R, []), Poly.const(R, R.one)
    r0, r1 = f, g
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        raise ValueError("gcd(0, 0) undefined")
    c = R.inv(r0.lc())
    return r0.scale(c), s0.scale(c), t0.scale(c)


def _pseudo_rem(a: Poly, b: Poly) -> Poly:
    """prem(a, b) = lc(b)^(deg a - deg b + 1) * a  mod  b, fraction-free."""
    R = a.ring
    d = a.degree() - b.degree()
    assert d >= 0
    lb = b.lc()
    rem = a
    for i in range(d, -1, -1):
        if rem.degree() == b.degree() + i:
            top = rem.lc()
            rem = rem.scale(lb) - b.scale(top).shift_x(i)
        else:
            rem = rem.scale(lb)
    assert rem.degree() < b.degree()
    return rem


def resultant(f: Poly, g: Poly):
    """Res(f, g) by the subresultant PRS (Cohen, Alg. 3.3.7).

    Works over any integral domain adapter with exact division.  Zero iff
    the inputs share a root in an algebraic closure.
    """
    R = f.ring
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if f.degree() < g.degree():
        s = -1 if (f.degree() * g.degree()) % 2 else 1
        r = resultant(g, f)
        return R.mul(R.coerce(s), r)
    if g.degree() == 0:
        return _ring_pow(R, g.lc(), f.degree())
    a, b = f, g
    gg = R.one
    h = R.one
    sign = 1
    while True:
        da, db = a.degree(), b.degree()
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        rem = _pseudo_rem(a, b)
        if rem.is_zero():
            return R.zero
        a, b = b, rem.divexact_scalar(R.mul(gg, _ring_pow(R, h, delta)))
        gg = a.lc()
        if delta >= 1:
            h = R.divexact(_ring_pow(R, gg, delta), _ring_pow(R, h, delta - 1))
        if b.degree() == 0:
            da = a.degree()
            out = R.divexact(_ring_pow(R, b.lc(), da), _ring_pow(R, h, da - 1))
            return R.mul(R.coerce(sign), out)


def _ring_pow(R, x, n: int):
    out = R.one
    for _ in range(n):
        out = R.mul(out, x)
    return out


def sylvester_resultant(f: Poly, g: Poly):
    """Resultant as a Sylvester determinant via fraction-free Bareiss.

    Exponential in nothing but kept for degree <= 6; used as a test oracle
    against the PRS implementation.
    """
    R = f.ring
    m, n = f.degree(), g.degree()
    if m < 0 or n < 0:
        raise ValueError("resultant of the zero polynomial")
    if m == 0 and n == 0:
        return R.one
    size = m + n
    mat = [[R.zero] * size for _ in range(size)]
    fs = list(reversed(f.coeffs))
    gs = list(reversed(g.coeffs))
    for i in range(n):
        for j, c in enumerate(fs):
            mat[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(gs):
            mat[n + i][i + j] = c
    # Bareiss elimination
    sign = 1
    prev = R.one
    for k in range(size - 1):
        if R.is_zero(mat[k][k]):
            for r in range(k + 1, size):
                if not R.is_zero(mat[r][k]):
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return R.zero
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = R.sub(R.mul(mat[i][j], mat[k][k]), R.mul(mat[i][k], mat[k][j]))
                mat[i][j] = R.divexact(num, prev)
            mat[i][k] = R.zero
        prev = mat[k][k]
    det = mat[size - 1][size - 1]
    return R.mul(R.coerce(sign), det)


def discriminant(f: Poly):
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    R = f.ring
    n = f.degree()
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    res = resultant(f, f.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return R.mul(R.coerce(sign), R.divexact(res, f.lc()))


def is_squarefree(f: Poly) -> bool:
    return poly_gcd(f, f.derivative()).degree() == 0


class PolyRing:
    """Ring adapter whose elements are Poly over an inner ring.

    Turns the univariate engine into a bivariate one: a Poly over
    PolyRing(QQ) is a polynomial in an outer variable whose coefficients
    are polynomials in an inner variable.
    """

    is_field = False

    def __init__(self, inner):
        self.inner = inner
        self.name = f"{inner.name}[t]"
        self.zero = Poly(inner, [])
        self.one = Poly.const(inner, inner.one)

    def coerce(self, v):
        if isinstance(v, Poly) and v.ring is self.inner:
            return v
        return Poly.const(self.inner, self.inner.coerce(v))

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a.degree() != 0:
            raise ArithmeticError("only constants are invertible")
        return Poly.const(self.inner, self.inner.inv(a.coeffs[0]))

    def divexact(self, a, b):
        if b.degree() == 0:
            return a.divexact_scalar(b.coeffs[0])
        return a.divexact(b)


def rational_roots(f: Poly) -> list[Fraction]:
    """All rational roots of a nonzero Poly over QQ, by the rational root test."""
    from .intutil import factor

    assert f.ring is QQ and not f.is_zero()
    # strip x^k, clear denominators to integer coefficients
    coeffs = list(f.coeffs)
    roots = []
    if coeffs and coeffs[0] == 0:
        roots.append(Fraction(0))
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
    if len(coeffs) <= 1:
        return roots
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n: int) -> list[int]:
        ds = [1]
        for p, e in factor(n).factors:
            ds = [d * p**k for d in ds for k in range(e + 1)]
        return ds

    g = Poly.from_ints(QQ, ints)
    for num in divisors(a0):
        for d in divisors(an):
            for cand in (Fraction(num, d), Fraction(-num, d)):
                if cand not in roots and g.evaluate(cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def lagrange_interpolate(ring, points) -> Poly:
    """Unique Poly of degree < len(points) through (x_i, y_i), field ring."""
    pts = list(points)
    acc = Poly(ring, [])
    for i, (xi, yi) in enumerate(pts):
        num = Poly.const(ring, ring.one)
        den = ring.one
        for j, (xj, _) in enumerate(pts):
            if i == j:
                continue
            num = num * Poly(ring, [ring.neg(xj), ring.one])
            den = ring.mul(den, ring.sub(xi, xj))
        acc = acc + num.scale(ring.mul(yi, ring.inv(den)))
    return acc
