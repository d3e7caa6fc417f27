"""Elliptic curves in long Weierstrass form over exact coefficient rings.

One curve type serves Q, the real quadratic and biquadratic fields, and
the finite fields: coefficients are native exact elements (Fraction,
NFElement, FFElement) and the chord-tangent formulas are written with
plain operators, so nothing here assumes characteristic 0.  On top of
that sit the local tools: Tate's algorithm at a rational prime or a
prime ideal (including the wild cases in residue characteristic 2 and
3), reduction counts, torsion via reduction bounds plus division
polynomials, and bounded point searches.

Local fields enter only through a small context interface (valuation,
residue, lift, uniformizer, residue_field); rational primes are wrapped
in QpContext and prime ideals arrive as PrimeIdealData, so the Tate
loop is written exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import gmpy2
import numpy as np

from .intutil import factor, is_prime
from .poly import Poly, QQ, rational_roots
from .finfield import FFElement, FFRing, ff, poly_roots
from .numfield import (
    NFElement, NFRing, PrimeIdealData, QuadField, splitting_type,
    sqrt_in_field,
)

Rat = Fraction


class EPoint:
    """Affine point (x, y) or the point at infinity."""

    __slots__ = ("x", "y", "infinity")

    def __init__(self, x=None, y=None, infinity=False):
        self.x = x
        self.y = y
        self.infinity = infinity

    @classmethod
    def zero(cls):
        return cls(infinity=True)

    def __eq__(self, other):
        if not isinstance(other, EPoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity and other.infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.infinity:
            return hash("O")
        return hash((repr(self.x), repr(self.y)))

    def __repr__(self):
        return "O" if self.infinity else f"({self.x!r}, {self.y!r})"


class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a ring adapter."""

    __slots__ = ("ring", "a1", "a2", "a3", "a4", "a6")

    def __init__(self, ring, a_invariants):
        self.ring = ring
        a1, a2, a3, a4, a6 = (ring.coerce(a) for a in a_invariants)
        self.a1, self.a2, self.a3, self.a4, self.a6 = a1, a2, a3, a4, a6

    def a_invariants(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    # -- invariants -----------------------------------------------------
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a_invariants()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return (-b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6
                + 9 * b2 * b4 * b6)

    def j_invariant(self):
        c4, _ = self.c_invariants()
        return c4 * c4 * c4 / self.discriminant()

    def is_nonsingular(self):
        return not self.ring.is_zero(self.discriminant())

    # -- point handling -------------------------------------------------
    def point(self, x, y):
        P = EPoint(self.ring.coerce(x), self.ring.coerce(y))
        if not self.contains(P):
            raise ValueError(f"({x}, {y}) is not on the curve")
        return P

    def contains(self, P: EPoint) -> bool:
        if P.infinity:
            return True
        x, y = P.x, P.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = x * x * x + self.a2 * x * x + self.a4 * x + self.a6
        return self.ring.is_zero(lhs - rhs)

    def neg(self, P: EPoint) -> EPoint:
        if P.infinity:
            return P
        return EPoint(P.x, -P.y - self.a1 * P.x - self.a3)

    def add(self, P: EPoint, Q: EPoint) -> EPoint:
        if not (self.contains(P) and self.contains(Q)):
            raise ValueError("point not on the curve")
        if P.infinity:
            return Q
        if Q.infinity:
            return P
        a1, a2, a3, a4, a6 = self.a_invariants()
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if self.ring.is_zero(y1 + y2 + a1 * x2 + a3):
                return EPoint.zero()
            den = 2 * y1 + a1 * x1 + a3
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
            nu = (-(x1 * x1 * x1) + a4 * x1 + 2 * a6 - a3 * y1) / den
        else:
            den = x2 - x1
            lam = (y2 - y1) / den
            nu = (y1 * x2 - y2 * x1) / den
        x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return EPoint(x3, y3)

    def mul(self, n: int, P: EPoint) -> EPoint:
        if n < 0:
            return self.mul(-n, self.neg(P))
        R = EPoint.zero()
        Q = P
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R

    # -- coordinate changes ---------------------------------------------
    def translate(self, r, s, t):
        """Substitute x -> x + r, y -> y + s x + t."""
        R = self.ring
        r, s, t = R.coerce(r), R.coerce(s), R.coerce(t)
        a1, a2, a3, a4, a6 = self.a_invariants()
        n1 = a1 + 2 * s
        n2 = a2 - s * a1 + 3 * r - s * s
        n3 = a3 + r * a1 + 2 * t
        n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1
        return WeierstrassCurve(R, (n1, n2, n3, n4, n6))

    def rescale(self, u):
        """Substitute x -> u^2 x, y -> u^3 y; a_i picks up u^i."""
        u = self.ring.coerce(u)
        a1, a2, a3, a4, a6 = self.a_invariants()
        u2 = u * u
        u3 = u2 * u
        return WeierstrassCurve(
            self.ring, (a1 * u, a2 * u2, a3 * u3, a4 * u2 * u2, a6 * u3 * u3))

    def reduce_at(self, ctx):
        """Reduction of an integral model through a local context."""
        return WeierstrassCurve(FFRing(ctx.residue_field),
                                [ctx.residue(a) for a in self.a_invariants()])

    def __repr__(self):
        return f"E[{self.a1!r},{self.a2!r},{self.a3!r},{self.a4!r},{self.a6!r}]"


def ec_add(P: EPoint, Q: EPoint, curve: WeierstrassCurve) -> EPoint:
    """Group law; O is the identity, inputs are checked against the curve."""
    return curve.add(P, Q)


def curve_over_q(a_invariants) -> WeierstrassCurve:
    return WeierstrassCurve(QQ, [Fraction(a) for a in a_invariants])


# ---------------------------------------------------------------------------
# local contexts
# ---------------------------------------------------------------------------

class QpContext:
    """Local data of Q at a rational prime, same surface as PrimeIdealData."""

    def __init__(self, p: int):
        self.p = p
        self.e = 1
        self.f = 1
        self.residue_field = ff(p)
        self.uniformizer = Fraction(p)

    def valuation(self, x) -> int:
        x = Fraction(x)
        if not x:
            raise ValueError("valuation of zero")
        v = 0
        n, d = x.numerator, x.denominator
        while n % self.p == 0:
            n //= self.p
            v += 1
        while d % self.p == 0:
            d //= self.p
            v -= 1
        return v

    def residue(self, x) -> FFElement:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ValueError("pole at this prime")
        Fq = self.residue_field
        return Fq(x.numerator) / Fq(x.denominator)

    def lift(self, t: FFElement):
        return Fraction(t.code)


def local_context(prime):
    if isinstance(prime, PrimeIdealData):
        return prime
    return QpContext(int(prime))


# ---------------------------------------------------------------------------
# Tate's algorithm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TateResult:
    kodaira_type: str
    conductor_exponent: int
    v_min_disc: int
    minimal_model: "WeierstrassCurve"
    reduction: str            # good | multiplicative | additive
    tamagawa: int
    steps: tuple              # audit trail of coordinate moves


def _v(ctx, x):
    """Valuation, with None standing in for v(0) = +infinity."""
    if isinstance(x, (int, Fraction)):
        return None if x == 0 else ctx.valuation(Fraction(x))
    return None if not x else ctx.valuation(x)


def _vge(ctx, x, k) -> bool:
    v = _v(ctx, x)
    return v is None or v >= k


def _slice(ctx, x, k):
    """Residue of x / pi^k; caller guarantees v(x) >= k."""
    return ctx.residue(x / ctx.uniformizer ** k if k else x)


def _kpoly(Fq, coeffs):
    R = FFRing(Fq)
    return Poly(R, [c if isinstance(c, FFElement) else R.coerce(c)
                    for c in coeffs])


def _quad_roots(Fq, a, b, c):
    """Roots in Fq of a Y^2 + b Y + c."""
    return poly_roots(_kpoly(Fq, [c, b, a]))


def _separable_quadratic(Fq, a, b, c) -> bool:
    """Is a Y^2 + b Y + c separable?  (a != 0 assumed.)"""
    if Fq.p == 2:
        return bool(b)
    return bool(b * b - 4 * a * c)


def _quad_double_root(Fq, b, c):
    """The double root of the inseparable-or-repeated Y^2 + b Y + c."""
    if Fq.p == 2:
        r = (-c).sqrt() if c else Fq.zero_elt
        assert r is not None, "char-2 square roots always exist"
        return r
    return -b / Fq(2)


def _singular_point(Ebar: WeierstrassCurve):
    """The singular point of a reduced curve with v(disc) > 0."""
    Fq = Ebar.ring.field
    a1, a2, a3, a4, a6 = Ebar.a_invariants()
    for x in Fq.elements():
        if Fq.p == 2:
            ys = list(Fq.elements())
        else:
            ys = [-(a1 * x + a3) / Fq(2)]
        for y in ys:
            on = y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x
                                                + a4 * x + a6)
            if on:
                continue
            fy = 2 * y + a1 * x + a3
            fx = a1 * y - (3 * x * x + 2 * a2 * x + a4)
            if not fy and not fx:
                return (x, y)
    raise ArithmeticError("reduction is smooth but v(disc) > 0")


def _cubic_multiplicity(Fq, a, b, c):
    """(multiplicity, root) of the worst repeated root of T^3+aT^2+bT+c.

    The discriminant here is the universal formula, valid in every
    characteristic.  A repeated root is Galois-stable, hence lies in
    Fq, and synthetic division separates double from triple.
    """
    disc = (18 * a * b * c - 4 * a * a * a * c + a * a * b * b
            - 4 * b * b * b - 27 * c * c)
    if disc:
        return 1, None
    for r in poly_roots(_kpoly(Fq, [c, b, a, Fq.one_elt])):
        q1 = a + r
        q0 = b + r * q1
        if not (r * r + q1 * r + q0):
            if q1 == -2 * r and q0 == r * r:
                return 3, r
            return 2, r
    raise ArithmeticError("vanishing discriminant but no repeated root")


def _normalise_step6(E, ctx, steps):
    """Reach pi|a1,a2, pi^2|a3,a4, pi^3|a6 by exact translations.

    In residue characteristic 2 the shifts come from square roots
    (Frobenius is bijective); elsewhere from halving.  Divisibilities
    not produced by a shift are forced by the b-invariant conditions
    of the earlier exits, and are asserted rather than assumed.
    """
    Fq = ctx.residue_field
    pi = ctx.uniformizer
    if Fq.p == 2:
        if not _vge(ctx, E.a1, 1):
            raise ArithmeticError("a1 must vanish mod 2 once b2 does")
        sbar = ctx.residue(E.a2).sqrt()
        if sbar:
            s = ctx.lift(sbar)
            E = E.translate(0, s, 0)
            steps.append(("translate", "s", repr(s)))
        if not _vge(ctx, E.a3, 2):
            raise ArithmeticError("v(a3) >= 2 is forced by v(b6) >= 3")
        if not _vge(ctx, E.a6, 3):
            tbar = _slice(ctx, E.a6, 2).sqrt()
            t = pi * ctx.lift(tbar)
            E = E.translate(0, 0, t)
            steps.append(("translate", "t", repr(t)))
    else:
        sbar = -ctx.residue(E.a1) / Fq(2)
        if sbar:
            s = ctx.lift(sbar)
            E = E.translate(0, s, 0)
            steps.append(("translate", "s", repr(s)))
        if not _vge(ctx, E.a2, 1):
            raise ArithmeticError("v(a2) >= 1 is forced by v(b2) >= 1")
        if not _vge(ctx, E.a3, 2):
            tbar = -_slice(ctx, E.a3, 1) / Fq(2)
            t = pi * ctx.lift(tbar)
            E = E.translate(0, 0, t)
            steps.append(("translate", "t", repr(t)))
        if not _vge(ctx, E.a6, 3):
            raise ArithmeticError("v(a6) >= 3 is forced by v(b6) >= 3")
    for a, k, tag in ((E.a1, 1, "a1"), (E.a2, 1, "a2"), (E.a3, 2, "a3"),
                      (E.a4, 2, "a4"), (E.a6, 3, "a6")):
        if not _vge(ctx, a, k):
            raise ArithmeticError(f"normalisation failed at {tag}")
    return E


def _subloop(E, ctx, steps):
    """The chain of quadratics inside the starred-I types."""
    Fq = ctx.residue_field
    pi = ctx.uniformizer
    a2_1 = _slice(ctx, E.a2, 1)
    if not a2_1:
        raise ArithmeticError("starred-I chain requires v(a2) = 1")
    q = 1
    while True:
        b = _slice(ctx, E.a3, q + 1)
        c = -_slice(ctx, E.a6, 2 * q + 2)
        if _separable_quadratic(Fq, Fq.one_elt, b, c):
            n = 2 * q - 1
            tam = 4 if _quad_roots(Fq, Fq.one_elt, b, c) else 2
            return n, tam, E
        eta = _quad_double_root(Fq, b, c)
        if eta:
            t = pi ** (q + 1) * ctx.lift(eta)
            E = E.translate(0, 0, t)
            steps.append(("translate", "t", repr(t)))
        bb = _slice(ctx, E.a4, q + 2)
        cc = _slice(ctx, E.a6, 2 * q + 3)
        if _separable_quadratic(Fq, a2_1, bb, cc):
            n = 2 * q
            tam = 4 if _quad_roots(Fq, a2_1, bb, cc) else 2
            return n, tam, E
        if Fq.p == 2:
            delta = (cc / a2_1).sqrt()
        else:
            delta = -bb / (2 * a2_1)
        if delta:
            r = pi ** (q + 1) * ctx.lift(delta)
            E = E.translate(r, 0, 0)
            steps.append(("translate", "r", repr(r)))
        q += 1


def tate_local(curve: WeierstrassCurve, prime) -> TateResult:
    """Run Tate's algorithm at a rational prime or a PrimeIdealData.

    Returns the Kodaira type, conductor exponent, minimal discriminant
    valuation, the local minimal model reached, the reduction kind and
    the Tamagawa number, plus the audit trail of coordinate moves.
    """
    ctx = local_context(prime)
    Fq = ctx.residue_field
    E = curve
    steps = []

    # clear denominators: a_i -> a_i * pi^(i*k)
    worst = 0
    for i, a in zip((1, 2, 3, 4, 6), E.a_invariants()):
        v = _v(ctx, a)
        if v is not None and v < 0:
            worst = max(worst, (-v + i - 1) // i)
    if worst:
        E = E.rescale(ctx.uniformizer ** worst)
        steps.append(("rescale", worst))

    while True:
        vD = _v(ctx, E.discriminant())
        if vD is None:
            raise ValueError("singular curve")
        if vD == 0:
            return TateResult("I0", 0, 0, E, "good", 1, tuple(steps))

        xb, yb = _singular_point(E.reduce_at(ctx))
        r0, t0 = ctx.lift(xb), ctx.lift(yb)
        if r0 or t0:
            E = E.translate(r0, 0, t0)
            steps.append(("translate", "r", repr(r0), "t", repr(t0)))
        b2, b4, b6, b8 = E.b_invariants()

        if not _vge(ctx, b2, 1):
            n = vD
            split = bool(_quad_roots(Fq, Fq.one_elt, ctx.residue(E.a1),
                                     -ctx.residue(E.a2)))
            c = n if split else (2 if n % 2 == 0 else 1)
            return TateResult(f"I{n}", 1, vD, E, "multiplicative", c,
                              tuple(steps))
        if not _vge(ctx, E.a6, 2):
            return TateResult("II", vD, vD, E, "additive", 1, tuple(steps))
        if not _vge(ctx, b8, 3):
            return TateResult("III", vD - 1, vD, E, "additive", 2,
                              tuple(steps))
        if not _vge(ctx, b6, 3):
            c = 3 if _quad_roots(Fq, Fq.one_elt, _slice(ctx, E.a3, 1),
                                 -_slice(ctx, E.a6, 2)) else 1
            return TateResult("IV", vD - 2, vD, E, "additive", c,
                              tuple(steps))

        E = _normalise_step6(E, ctx, steps)
        pi = ctx.uniformizer
        P_a = _slice(ctx, E.a2, 1)
        P_b = _slice(ctx, E.a4, 2)
        P_c = _slice(ctx, E.a6, 3)
        mult, root = _cubic_multiplicity(Fq, P_a, P_b, P_c)
        if mult == 1:
            nroots = len(poly_roots(_kpoly(Fq, [P_c, P_b, P_a, Fq.one_elt])))
            return TateResult("I0*", vD - 4, vD, E, "additive", 1 + nroots,
                              tuple(steps))
        if root:
            r = pi * ctx.lift(root)
            E = E.translate(r, 0, 0)
            steps.append(("translate", "r", repr(r)))
        if mult == 2:
            n, tam, E = _subloop(E, ctx, steps)
            return TateResult(f"I{n}*", vD - 4 - n, vD, E, "additive", tam,
                              tuple(steps))

        # triple root now at the origin
        a3_2 = _slice(ctx, E.a3, 2)
        a6_4 = _slice(ctx, E.a6, 4)
        if _separable_quadratic(Fq, Fq.one_elt, a3_2, -a6_4):
            c = 3 if _quad_roots(Fq, Fq.one_elt, a3_2, -a6_4) else 1
            return TateResult("IV*", vD - 6, vD, E, "additive", c,
                              tuple(steps))
        eta = _quad_double_root(Fq, a3_2, -a6_4)
        if eta:
            t = pi * pi * ctx.lift(eta)
            E = E.translate(0, 0, t)
            steps.append(("translate", "t", repr(t)))
        if not _vge(ctx, E.a4, 4):
            return TateResult("III*", vD - 7, vD, E, "additive", 2,
                              tuple(steps))
        if not _vge(ctx, E.a6, 6):
            return TateResult("II*", vD - 8, vD, E, "additive", 1,
                              tuple(steps))
        E = E.rescale(1 / pi)
        steps.append(("minimise", 1))


# ---------------------------------------------------------------------------
# reduction counting
# ---------------------------------------------------------------------------

def count_points_ff(E: WeierstrassCurve) -> int:
    """#E(F_q) including O.

    Odd q: complete the square and sum quadratic characters.  Even q:
    each fibre with a1 x + a3 = 0 has one point, the others have two
    or zero according to the Artin-Schreier trace of rhs/(a1 x + a3)^2.
    """
    Fq = E.ring.field
    a1, a2, a3, a4, a6 = E.a_invariants()
    total = 1
    if Fq.p == 2:
        for x in Fq.elements():
            cpoly = a1 * x + a3
            rhs = x * x * x + a2 * x * x + a4 * x + a6
            if not cpoly:
                total += 1
                continue
            w = rhs / (cpoly * cpoly)
            tr = w
            t = w
            for _ in range(Fq.k - 1):
                t = t.frobenius()
                tr = tr + t
            total += 2 if not tr else 0
        return total
    for x in Fq.elements():
        d = (a1 * x + a3) ** 2 + 4 * (x * x * x + a2 * x * x + a4 * x + a6)
        total += 1 + Fq.chi(d.code)
    return total


def reduction_count(curve: WeierstrassCurve, p) -> int:
    """#E over the residue field of a good prime; bad reduction raises."""
    ctx = local_context(p)
    for a in curve.a_invariants():
        if not _vge(ctx, a, 0):
            raise ValueError("model not integral at the prime")
    if _v(ctx, curve.discriminant()) != 0:
        res = tate_local(curve, p)
        if res.reduction != "good":
            raise ValueError(f"bad reduction at {p}")
        curve = res.minimal_model
    return count_points_ff(curve.reduce_at(ctx))


# ---------------------------------------------------------------------------
# division polynomials
# ---------------------------------------------------------------------------

def _psi_tower(curve: WeierstrassCurve, n_max: int):
    """x-parts g_n of the division polynomials up to n_max.

    psi_n = g_n(x) for odd n and g_n(x) * psi_2 for even n, with
    psi_2^2 = F = 4x^3 + b2 x^2 + 2 b4 x + b6; the doubling recurrences
    are rewritten on the g_n, tracking the parity of psi_2 powers.
    """
    R = curve.ring
    b2, b4, b6, b8 = curve.b_invariants()
    c = R.coerce
    F = Poly(R, [b6, 2 * b4, b2, c(4)])
    one = Poly(R, [R.one])
    g = {1: one, 2: one,
         3: Poly(R, [b8, 3 * b6, 3 * b4, b2, c(3)]),
         4: Poly(R, [b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8,
                     10 * b6, 5 * b4, b2, c(2)])}
    for n in range(5, n_max + 1):
        m = n // 2
        if n % 2 == 0:
            t1 = g[m + 2] * g[m - 1] * g[m - 1]
            t2 = g[m - 2] * g[m + 1] * g[m + 1]
            g[n] = (t1 - t2) * g[m]
        else:
            t1 = g[m + 2] * g[m] * g[m] * g[m]
            t2 = g[m - 1] * g[m + 1] * g[m + 1] * g[m + 1]
            if m % 2 == 0:
                g[n] = t1 * F * F - t2
            else:
                g[n] = t1 - t2 * F * F
    return g, F


@dataclass(frozen=True)
class DivisionPolyReport:
    ell: int
    psi: Poly
    roots: tuple
    points: tuple       # base-field points the roots lift to


def division_poly_check(curve: WeierstrassCurve, ell: int) -> DivisionPolyReport:
    """Roots of the ell-division polynomial and which of them lift.

    A root x carries ell-torsion over the base field only if the fibre
    quadratic in y also splits there; the report records both halves.
    """
    if ell not in (2, 3, 5, 7, 11, 13):
        raise ValueError("ell must be a prime at most 13")
    R = curve.ring
    b2, b4, b6, _ = curve.b_invariants()
    if ell == 2:
        psi = Poly(R, [b6, 2 * b4, b2, R.coerce(4)])
    else:
        g, _ = _psi_tower(curve, ell)
        psi = g[ell]
    roots = _field_roots(psi, R)
    pts = []
    for x in roots:
        for y in _lift_x(curve, x):
            P = EPoint(x, y)
            if curve.mul(ell, P).infinity:
                pts.append(P)
    return DivisionPolyReport(ell, psi, tuple(roots), tuple(pts))


def _lift_x(curve: WeierstrassCurve, x):
    """Solutions y of the curve equation at a given base-field x."""
    R = curve.ring
    a1, a2, a3, a4, a6 = curve.a_invariants()
    x = R.coerce(x)
    cpoly = a1 * x + a3
    rhs = x * x * x + a2 * x * x + a4 * x + a6
    d = cpoly * cpoly + 4 * rhs
    if isinstance(R, NFRing):
        w = sqrt_in_field(d)
        if w is None:
            return []
        seen = []
        for y in ((w - cpoly) / 2, (-w - cpoly) / 2):
            if y not in seen:
                seen.append(y)
        return seen
    d = Fraction(d)
    if d < 0:
        return []
    rn, rd = gmpy2.isqrt(d.numerator), gmpy2.isqrt(d.denominator)
    if rn * rn != d.numerator or rd * rd != d.denominator:
        return []
    w = Fraction(int(rn), int(rd))
    return sorted({(w - cpoly) / 2, (-w - cpoly) / 2})


def _field_roots(f: Poly, R):
    """Roots of f over Q or over a quadratic/biquadratic field.

    Rational roots come from the rational root test; quadratic
    irrationalities from the degree-2 factors of the rational
    factorisation, kept when their discriminant is a square in the
    field.  Models with irrational coefficients are out of scope.
    """
    import sympy

    if R is QQ:
        return [] if f.is_zero() else list(rational_roots(f))
    field = R.field
    qq_coeffs = []
    for cf in f.coeffs:
        if isinstance(cf, NFElement):
            try:
                qq_coeffs.append(cf.as_rational())
            except ValueError:
                raise NotImplementedError(
                    "irrational coefficients in root finding") from None
        else:
            qq_coeffs.append(Fraction(cf))
    fq = Poly(QQ, qq_coeffs)
    if fq.is_zero():
        return []
    roots = [field(r) for r in rational_roots(fq)]
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(cf.numerator, cf.denominator) * x ** i
               for i, cf in enumerate(qq_coeffs))
    for fac, _mult in sympy.factor_list(expr)[1]:
        p = sympy.Poly(fac, x)
        if p.degree() != 2:
            continue
        a, b, cc = (Fraction(str(v)) for v in p.all_coeffs())
        w = sqrt_in_field(field(b * b - 4 * a * cc))
        if w is not None:
            for sgn in (1, -1):
                r = (field(-b) + sgn * w) / field(2 * a)
                if r not in roots:
                    roots.append(r)
    return roots


# ---------------------------------------------------------------------------
# torsion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionResult:
    order: int
    invariants: tuple      # () trivial, (n,) cyclic, (n1, n2) with n1 | n2
    points: tuple
    generators: tuple


def torsion_subgroup(curve: WeierstrassCurve) -> TorsionResult:
    """Exact torsion over Q or a real quadratic field.

    Reduction counts at five good primes with prime residue field give
    a multiplicative bound; division polynomials then realise or refute
    each prime power, and the found points are closed under addition.
    """
    R = curve.ring
    over_q = R is QQ
    field = None if over_q else R.field
    disc = curve.discriminant()

    counts = []
    p = 4
    while len(counts) < 5 and p < 2000:
        p = _next_prime(p)
        try:
            if over_q:
                if QpContext(p).valuation(Fraction(disc)) != 0:
                    continue
                counts.append(reduction_count(curve, p))
            else:
                (g, e, f), places = splitting_type(p, field)
                if e != 1 or f != 1:
                    continue
                place = places[0]
                if place.valuation(disc) != 0:
                    continue
                counts.append(count_points_ff(curve.reduce_at(place)))
        except (ValueError, ArithmeticError, NotImplementedError):
            continue
    if len(counts) < 5:
        raise ArithmeticError("not enough usable reduction primes")
    bound = 0
    for cnt in counts:
        bound = gcd(bound, cnt)

    pts = {EPoint.zero()}
    for ell in (2, 3, 5, 7, 11, 13):
        k = 0
        b = bound
        while b % ell == 0:
            b //= ell
            k += 1
        if k == 0:
            continue
        targets = [ell]
        if ell == 2 and k >= 2:
            targets.append(4)
        if ell == 2 and k >= 3:
            targets.append(8)
        if ell == 3 and k >= 2:
            targets.append(9)
        for n in targets:
            if n == 2:
                xs = division_poly_check(curve, 2).roots
            else:
                g, _ = _psi_tower(curve, n)
                xs = _field_roots(g[n], R)
            for x in xs:
                for y in _lift_x(curve, x):
                    pts.add(EPoint(x, y))
    frontier = list(pts)
    while frontier:
        Pn = frontier.pop()
        for Q in list(pts):
            S = curve.add(Pn, Q)
            if S not in pts:
                pts.add(S)
                frontier.append(S)
    order = len(pts)
    exponent = 1
    for P in pts:
        e = _point_order(curve, P, order)
        exponent = exponent * e // gcd(exponent, e)
    if order == 1:
        invariants = ()
    elif exponent == order:
        invariants = (order,)
    else:
        invariants = (order // exponent, exponent)
    gens = _find_generators(curve, pts, invariants)
    ordered = sorted(pts, key=lambda P: (not P.infinity, repr(P)))
    return TorsionResult(order, invariants, tuple(ordered), tuple(gens))


def _point_order(curve, P, cap) -> int:
    if P.infinity:
        return 1
    Q = P
    for n in range(1, cap + 1):
        if Q.infinity:
            return n
        Q = curve.add(Q, P)
    raise ArithmeticError("point order exceeds the group order bound")


def _find_generators(curve, pts, invariants):
    if not invariants:
        return ()
    order = 1
    for n in invariants:
        order *= n
    exponent = invariants[-1]
    gen1 = next(P for P in sorted(pts, key=repr)
                if _point_order(curve, P, order) == exponent)
    if len(invariants) == 1:
        return (gen1,)
    n1 = invariants[0]
    cyclic = set()
    Q = EPoint.zero()
    for _ in range(exponent):
        cyclic.add(Q)
        Q = curve.add(Q, gen1)
    gen2 = next(P for P in sorted(pts, key=repr)
                if _point_order(curve, P, order) == n1 and P not in cyclic)
    return (gen1, gen2)


def _next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


# ---------------------------------------------------------------------------
# point search
# ---------------------------------------------------------------------------

def point_search(curve: WeierstrassCurve, height: int):
    """All points whose x has naive height <= height; O included.

    Over Q the denominator of x on an integral model is a square e^2,
    so x = m/e^2 runs over |m| <= height, e^2 <= height, sieved with a
    vectorised square test and confirmed exactly.  Over a quadratic
    field the candidates are (a + b sqrt(d))/c with |a|, |b|, c up to
    the bound, filtered by quadratic characters at split primes.
    """
    if curve.ring is QQ:
        return _point_search_q(curve, height)
    if isinstance(curve.ring, NFRing) and isinstance(curve.ring.field,
                                                    QuadField):
        return _point_search_quad(curve, height)
    raise NotImplementedError("search supports Q and quadratic fields")


def _y_from_square(curve, x, s):
    """Points with (2y + a1 x + a3) = +-s at the given x."""
    out = []
    for w in {s, -s}:
        y = (w - curve.a1 * x - curve.a3) / 2
        P = EPoint(x, y)
        if curve.contains(P):
            out.append(P)
    return out


def _point_search_q(curve: WeierstrassCurve, H: int):
    b2, b4, b6, _ = curve.b_invariants()
    ints = all(Fraction(t).denominator == 1 for t in (b2, b4, b6))
    found = [EPoint.zero()]
    e = 1
    while e * e <= H:
        e2 = e * e
        if ints:
            B2, B4, B6 = int(b2), int(b4), int(b6)
            peak = (4 * H ** 3 + abs(B2) * H * H * e2
                    + 2 * abs(B4) * H * e2 * e2 + abs(B6) * e2 ** 3)
        if ints and peak < 2 ** 62:
            m = np.arange(-H, H + 1, dtype=np.int64)
            S = (4 * m ** 3 + B2 * m * m * e2 + 2 * B4 * m * (e2 * e2)
                 + B6 * e2 ** 3)
            r = np.sqrt(S.clip(min=0).astype(np.float64)).astype(np.int64)
            sq = (S >= 0) & ((r * r == S) | ((r + 1) ** 2 == S)
                             | ((r - 1) ** 2 == S))
            hits = [int(v) for v in m[sq]]
        else:
            hits = range(-H, H + 1)
        for m0 in hits:
            if gcd(m0, e) != 1:
                continue
            S = (Fraction(4 * m0 ** 3) + b2 * m0 * m0 * e2
                 + 2 * b4 * m0 * e2 * e2 + b6 * e2 ** 3)
            if S < 0 or S.denominator != 1:
                continue
            root = gmpy2.isqrt(S.numerator)
            if root * root != S.numerator:
                continue
            x = Fraction(m0, e2)
            for P in _y_from_square(curve, x, Fraction(int(root), e ** 3)):
                if P not in found:
                    found.append(P)
        e += 1
    found.sort(key=lambda P: (not P.infinity,
                              (P.x.denominator, abs(P.x), P.x < 0, P.y < 0)
                              if not P.infinity else ()))
    return found


def _point_search_quad(curve: WeierstrassCurve, H: int):
    field = curve.ring.field
    d = field.d
    filters = []
    p = 20
    while len(filters) < 3 and p < 3000:
        p = _next_prime(p)
        if d % p == 0:
            continue
        try:
            (g, e, f), places = splitting_type(p, field)
        except NotImplementedError:
            continue
        if g != 2 or f != 1:
            continue
        place = places[0]
        try:
            if place.valuation(curve.discriminant()) != 0:
                continue
            red = [place.residue(a).code for a in curve.a_invariants()]
        except (ValueError, ArithmeticError):
            continue
        root = place.residue(curve.ring.coerce(field.sqrt_gen())).code
        filters.append((p, root, red))

    found = [EPoint.zero()]
    span = np.arange(-H, H + 1, dtype=np.int64)
    A, B = np.meshgrid(span, span, indexing="ij")
    for c in range(1, H + 1):
        mask = np.ones(A.shape, dtype=bool)
        for p, root, red in filters:
            if c % p == 0:
                continue
            chi = np.zeros(p, dtype=bool)
            chi[0] = True
            for v in range(1, p):
                chi[v] = pow(v, (p - 1) // 2, p) == 1
            invc = pow(c, -1, p)
            xr = ((A + root * B) % p) * invc % p
            ra1, ra2, ra3, ra4, ra6 = red
            dd = ((ra1 * xr + ra3) ** 2
                  + 4 * (xr ** 3 + ra2 * xr * xr + ra4 * xr + ra6)) % p
            mask &= chi[dd]
        for i, j in zip(*np.nonzero(mask)):
            a, b = int(span[i]), int(span[j])
            if gcd(gcd(a, b), c) != 1:
                continue
            x = field.from_coords((Fraction(a, c), Fraction(b, c)))
            for y in _lift_x(curve, x):
                P = EPoint(x, y)
                if P not in found:
                    found.append(P)
    return found


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def curve_fixtures():
    """The bundled label table: {label: (curve over Q, conductor)}."""
    import json
    from importlib import resources
    raw = json.loads((resources.files("fltkit") / "data" /
                      "curves.json").read_text())
    out = {}
    for item in raw:
        E = curve_over_q([Fraction(item[k]) for k in
                          ("a1", "a2", "a3", "a4", "a6")])
        out[item["label"]] = (E, int(item["conductor"]))
    return out


def fixture_curve(label: str) -> WeierstrassCurve:
    return curve_fixtures()[label][0]


def conductor_over_q(curve: WeierstrassCurve) -> int:
    """Product over bad primes of p^(local conductor exponent)."""
    disc = Fraction(curve.discriminant())
    bad = set(factor(disc.numerator).primes())
    if disc.denominator != 1:
        bad |= set(factor(disc.denominator).primes())
    N = 1
    for p in sorted(bad):
        N *= p ** tate_local(curve, p).conductor_exponent
    return N
