"""Descent machinery for x^4 + y^4 = 1 over L = Q(sqrt2).

A nontrivial point determines a parameter t with

    x^2 = (1 - t^2)/(1 + t^2),      y^2 = 2t/(1 + t^2).

When t lands in L, one of three genus-one covers acquires an L-point;
both target curves have rank zero over L, so their torsion pins t to a
short list.  When t is quadratic over L with minimal polynomial F, the
two square conditions A^2 = 2t(1 - t^2), B^2 = 2t(1 + t^2) force the
factorisations

    (lam  + mu  z)^2 - 2z(1 - z^2) = F(z)(rho  + 2z)
    (lam' + mu' z)^2 - 2z(1 + z^2) = F(z)(rho' - 2z)

with all coefficients in L.  The spare roots z1 = -rho/2, z2 = rho'/2
of the linear factors land on the torsion t-lists, leaving ten
coefficient systems over L.  They are solved here exactly: one is
consistent and singles out F(z) = z^2 + z + 2, so the only quadratic
parameter field beyond the rational story is L(sqrt(-7)).
"""

from dataclasses import dataclass
from fractions import Fraction

from .elliptic import WeierstrassCurve, _field_roots as field_roots, \
    fixture_curve, torsion_subgroup
from .numfield import NFElement, NFRing, format_element, quad, sqrt_in_field
from .poly import Poly, QQ

__all__ = [
    "OO",
    "QuarticCase",
    "RadicalQuarticField",
    "all_case_verdicts",
    "fermat_point_check",
    "quartic_case_analysis",
    "quartic_parametrization_check",
    "quartic_t_values",
    "verify_parametrization_maps",
]

#: parameter value at infinity on the covers with a rational branch there
OO = "oo"


def _L():
    return quad(2)


# ---------------------------------------------------------------------------
# the three covers and their torsion t-lists
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverRoute:
    """One square condition u^2 = s(t) together with its curve model."""

    name: str
    label: str
    square: tuple          # s(t) coefficients, low degree first
    y_scale: int           # u -> y multiplier entering the model map

    def x_from_t(self, t):
        if self.name == "one-minus-t4":
            return (2 * t + 2) / (1 - t)
        if self.name == "2t-1+t2":
            return 2 * t
        return -2 * t

    def t_from_x(self, x):
        if self.name == "one-minus-t4":
            if x == -2:
                return OO
            return (x - 2) / (x + 2)
        if self.name == "2t-1+t2":
            return x / 2
        return x / -2

    @property
    def t_at_infinity(self):
        # the quartic cover has no rational branch at infinity; its map
        # instead blows up at t = 1
        return 1 if self.name == "one-minus-t4" else OO


ROUTES = (
    CoverRoute("one-minus-t4", "32a1", (1, 0, 0, 0, -1), 4),
    CoverRoute("2t-1+t2", "32a1", (0, 2, 0, 2), 2),
    CoverRoute("2t-1-t2", "64a1", (0, 2, 0, -2), 2),
)


def verify_parametrization_maps():
    """Each route's map is an exact morphism onto its curve model.

    With x(t) as above and y = y_scale * u / denom(t)^2, clearing
    denominators in y^2 = x^3 + a4 x leaves a polynomial identity in t,
    which is checked coefficientwise.  Returns the route names.
    """
    t = Poly.x(QQ)
    one = Poly.const(QQ, Fraction(1))
    checked = []
    for route in ROUTES:
        s = Poly(QQ, [Fraction(c) for c in route.square])
        a4 = Fraction(4) if route.label == "32a1" else Fraction(-4)
        if route.name == "one-minus-t4":
            xn, xd = (t + one).scale(Fraction(2)), one - t
            lhs = s.scale(Fraction(route.y_scale ** 2))
            rhs = (xn ** 3 + (xn * xd * xd).scale(a4)) * xd
        else:
            x = t.scale(Fraction(2 if route.name == "2t-1+t2" else -2))
            lhs = s.scale(Fraction(route.y_scale ** 2))
            rhs = x ** 3 + x.scale(a4)
        if lhs != rhs:
            raise ArithmeticError(f"cover map for {route.name} is not exact")
        checked.append(route.name)
    return checked


def _square_value(route, t):
    acc = t.field.zero()
    for c in reversed(route.square):
        acc = acc * t + c
    return acc


def quartic_t_values(label: str):
    """Parameters t in L cut out by the covers mapping to this curve.

    Computes the curve's torsion over L and pulls every point back
    through the route maps; each finite pullback is verified to round
    back onto the point it came from.
    """
    routes = [r for r in ROUTES if r.label == label]
    if not routes:
        raise ValueError(f"no cover routes target {label!r}")
    K = _L()
    E = WeierstrassCurve(NFRing(K), fixture_curve(label).a_invariants())
    tor = torsion_subgroup(E)
    values = set()
    for route in routes:
        for P in tor.points:
            if P.infinity:
                values.add(route.t_at_infinity if route.t_at_infinity == OO
                           else K(route.t_at_infinity))
                continue
            t = route.t_from_x(P.x)
            if t == OO:
                values.add(OO)
                continue
            if route.x_from_t(t) != P.x:
                raise ArithmeticError("pullback does not invert the map")
            # u^2 = s(t) must reproduce y^2 through the y-component
            u2 = _square_value(route, t)
            if route.name == "one-minus-t4":
                den = (1 - t) ** 2
            else:
                den = K.one()
            if u2 * route.y_scale ** 2 != P.y * P.y * den * den:
                raise ArithmeticError("pullback misses the square condition")
            values.add(t)
    return frozenset(values)


def quartic_parametrization_check(t):
    """(x^2, y^2) at the parameter t, with the defining identity checked.

    Accepts OO for the parameter at infinity.  Rejects t^2 = -1, where
    the chart degenerates.
    """
    if t == OO:
        K = _L()
        return K(-1), K.zero()
    if not isinstance(t, NFElement):
        t = _L()(t)
    K = t.field
    den = 1 + t * t
    if not den:
        raise ValueError("t^2 = -1 is outside the parametrised chart")
    x2 = (1 - t * t) / den
    y2 = (2 * t) / den
    if x2 * x2 + y2 * y2 != K.one():
        raise ArithmeticError("parametrisation identity failed")
    return x2, y2


# ---------------------------------------------------------------------------
# the ten coefficient systems for quadratic t
# ---------------------------------------------------------------------------

def _case_slots(case: int):
    K = _L()
    r = K.sqrt_gen()
    table = {
        1: (K(0), K(0)),
        2: (K(-1), K(1)),
        3: (K(1), K(0)),
        4: (K(-1), K(0)),
        5: (-1 + r, K(0)),
        6: (-1 - r, K(0)),
        7: (K(0), K(1)),
        8: (K(1), K(1)),
        9: (-1 + r, K(1)),
        10: (-1 - r, K(1)),
    }
    return table[case]


_VERDICTS = {
    1: ("reduces", "matches the ground-field analysis"),
    2: ("field", "F(z) = z^2 + z + 2"),
    3: ("contradiction", "lam^2 = -2"),
    4: ("contradiction", "t = 0"),
    5: ("contradiction", "lam^2 = 2(1 - sqrt2) < 0"),
    6: ("contradiction", "lam^2 = 2(1 + sqrt2)"),
    7: ("contradiction", "(mu' - 2)^2 = -2"),
    8: ("contradiction", "-4=0"),
    9: ("contradiction", "(mu' - 2)^2 = -lam^2 (1 + sqrt2)"),
    10: ("contradiction", "lam^2 = (mu' - 2)^2 (1 + sqrt2)"),
}


@dataclass(frozen=True)
class CaseSolution:
    lam: NFElement
    mu: NFElement
    lamp: NFElement
    mup: NFElement
    beta: NFElement
    gamma: NFElement


@dataclass(frozen=True)
class QuarticCase:
    """Outcome of one (z1, z2) slot pair."""

    case: int
    z1: NFElement
    z2: NFElement
    kind: str                  # "reduces" | "contradiction" | "field"
    reason: str
    minimal_poly: tuple | None  # (beta, gamma) with F = z^2 + beta z + gamma
    extension: str | None
    solutions: tuple
    details: tuple


def _system_residuals(rho, rhop, s: CaseSolution):
    return (
        s.mu * s.mu - rho - 2 * s.beta,
        2 * s.lam * s.mu - 2 - s.beta * rho - 2 * s.gamma,
        s.lam * s.lam - s.gamma * rho,
        s.mup * s.mup - rhop + 2 * s.beta,
        2 * s.lamp * s.mup - 2 - s.beta * rhop + 2 * s.gamma,
        s.lamp * s.lamp - s.gamma * rhop,
    )


def _factorisations_hold(rho, rhop, s: CaseSolution) -> bool:
    K = _L()
    R = NFRing(K)
    z = Poly.x(R)
    con = lambda v: Poly.const(R, K(v))
    F = z * z + z.scale(s.beta) + con(s.gamma)
    lhs1 = (z.scale(s.mu) + con(s.lam)) ** 2 - (z - z ** 3).scale(K(2))
    lhs2 = (z.scale(s.mup) + con(s.lamp)) ** 2 - (z + z ** 3).scale(K(2))
    return (lhs1 == F * (z.scale(K(2)) + con(rho))
            and lhs2 == F * (con(rhop) - z.scale(K(2))))


def _admit(rho, rhop, cand: CaseSolution, sols, blocks):
    if any(_system_residuals(rho, rhop, cand)):
        return
    if not (cand.lam or cand.mu):
        blocks.append("A = lam + mu t vanishes, so x y = 0")
        return
    if not (cand.lamp or cand.mup):
        blocks.append("B = lam' + mu' t vanishes, forcing t = 0 outside L")
        return
    disc = cand.beta * cand.beta - 4 * cand.gamma
    if sqrt_in_field(disc) is not None:
        blocks.append(
            f"F(z) = z^2 + ({format_element(cand.beta)}) z + "
            f"({format_element(cand.gamma)}) splits over L")
        return
    if not _factorisations_hold(rho, rhop, cand):
        raise ArithmeticError("admitted solution fails the factorisations")
    if cand not in sols:
        sols.append(cand)


def _solve_slots(z1, z2):
    """Exact solution set of the six-equation system for one slot pair.

    Returns (solutions, blocks, notes): every branch either produces a
    full assignment or records the equation over L that kills it.
    """
    K = _L()
    rho, rhop = -2 * z1, 2 * z2
    sols, blocks, notes = [], [], []

    if not rhop:
        # lam'^2 = 0 and the z-coefficient of the second factorisation
        # pin gamma
        notes.append("z2 = 0 forces lam' = 0 and gamma = 1")
        lamp, gamma = K.zero(), K.one()
        if not rho:
            blocks.append("the first factorisation needs gamma = -1 "
                          "against gamma = 1")
            return sols, blocks, notes
        lam2 = gamma * rho
        w = sqrt_in_field(lam2)
        if w is None:
            blocks.append(f"lam^2 = {format_element(lam2)} has no root in L")
            return sols, blocks, notes
        disc_mu = 4 * rho * (rho * rho - 4)
        sd = sqrt_in_field(disc_mu)
        if sd is None:
            blocks.append("the mu-quadratic has irrational discriminant")
            return sols, blocks, notes
        for lam in {w, -w}:
            for sgn in {sd, -sd}:
                mu = (4 * lam + sgn) / (2 * rho)
                beta = (mu * mu - rho) / 2
                mup2 = -2 * beta
                mw = sqrt_in_field(mup2)
                if mw is None:
                    blocks.append(f"mu'^2 = {format_element(mup2)} has no "
                                  "root in L")
                    continue
                for mup in {mw, -mw}:
                    _admit(rho, rhop, CaseSolution(lam, mu, lamp, mup,
                                                   beta, gamma), sols, blocks)
        return sols, blocks, notes

    if not rho:
        # lam^2 = 0, so the first z-coefficient pins gamma = -1 and the
        # second constant term becomes a square condition
        notes.append("z1 = 0 forces lam = 0 and gamma = -1")
        lamp2 = -rhop
        if sqrt_in_field(lamp2) is None:
            blocks.append(f"lam'^2 = {format_element(lamp2)} has no root in L")
            return sols, blocks, notes
        raise ArithmeticError("unexpected consistent branch at z1 = 0")

    # rho and rho' both nonzero: gamma = lam^2/rho and
    # lam'^2 = (2/rho) lam^2
    notes.append("gamma = lam^2/rho; lam = 0 would let F(z) vanish at 0")
    w2 = 2 / rho
    sw = sqrt_in_field(w2)
    if sw is None:
        blocks.append(f"lam'^2 = ({format_element(w2)}) lam^2 and "
                      f"{format_element(w2)} is not a square in L")
        return sols, blocks, notes
    s2 = rho ** 3 - 4 * rho
    sd = sqrt_in_field(s2)
    if sd is None:
        blocks.append("the mu-quadratic has irrational discriminant")
        return sols, blocks, notes
    R = NFRing(K)
    X = Poly.x(R)
    con = lambda v: Poly.const(R, K(v))
    rinv = rho.inverse()
    for e1 in {sd, -sd}:
        mu_p = (X.scale(K(2)) + con(e1)).scale(rinv)
        beta_p = (mu_p * mu_p - con(rho)).scale(K(Fraction(1, 2)))
        gamma_p = (X * X).scale(rinv)
        mup2_p = con(rhop) - beta_p.scale(K(2))
        rhs5_p = con(2) + beta_p.scale(rhop) - gamma_p.scale(K(2))
        # squaring 2 lam' mu' = rhs5 with lam'^2 = w2 lam^2 gives one
        # polynomial condition on lam; signs are restored afterwards
        eq = (X * X * mup2_p).scale(4 * w2) - rhs5_p * rhs5_p
        for lam in field_roots(eq, R):
            mu = mu_p.evaluate(lam)
            beta = beta_p.evaluate(lam)
            gamma = gamma_p.evaluate(lam)
            mup2 = mup2_p.evaluate(lam)
            mw = sqrt_in_field(mup2)
            if mw is None:
                blocks.append(f"mu'^2 = {format_element(mup2)} has no root "
                              "in L")
                continue
            for mup in {mw, -mw}:
                for lamp in {sw * lam, -(sw * lam)}:
                    cand = CaseSolution(lam, mu, lamp, mup, beta, gamma)
                    if any(_system_residuals(rho, rhop, cand)):
                        continue
                    _admit(rho, rhop, cand, sols, blocks)
    return sols, blocks, notes


def quartic_case_analysis(case: int) -> QuarticCase:
    """Solve one of the ten slot systems and name its outcome."""
    if case not in _VERDICTS:
        raise ValueError("case must be one of 1..10")
    z1, z2 = _case_slots(case)
    sols, blocks, notes = _solve_slots(z1, z2)
    kind, reason = _VERDICTS[case]

    minimal_poly = None
    extension = None
    if sols:
        fs = {(s.beta, s.gamma) for s in sols}
        if len(fs) != 1:
            raise ArithmeticError("inconsistent minimal polynomials across "
                                  "the solution set")
        if kind != "field":
            raise ArithmeticError("derived a consistent system where the "
                                  "tabulated verdict has none")
        beta, gamma = next(iter(fs))
        minimal_poly = (beta, gamma)
        disc = beta * beta - 4 * gamma
        extension = f"L(sqrt({format_element(disc)}))"
    elif kind == "field":
        raise ArithmeticError("tabulated field verdict but the system "
                              "is inconsistent")
    return QuarticCase(case, z1, z2, kind, reason, minimal_poly, extension,
                       tuple(sols), tuple(notes + blocks))


def all_case_verdicts():
    """{case: (kind, reason)} with every derivation rerun."""
    return {n: (qc.kind, qc.reason)
            for n, qc in ((n, quartic_case_analysis(n)) for n in range(1, 11))}


# ---------------------------------------------------------------------------
# exact power-sum checks
# ---------------------------------------------------------------------------

class RadElement:
    """Element of Q[T]/(T^4 - m), coordinates on 1, T, T^2, T^3."""

    __slots__ = ("field", "co")

    def __init__(self, field, co):
        self.field = field
        self.co = tuple(co)

    def __add__(self, other):
        other = self.field(other)
        return RadElement(self.field,
                          tuple(a + b for a, b in zip(self.co, other.co)))

    __radd__ = __add__

    def __neg__(self):
        return RadElement(self.field, tuple(-a for a in self.co))

    def __sub__(self, other):
        return self + (-self.field(other))

    def __mul__(self, other):
        other = self.field(other)
        m = self.field.m
        out = [Fraction(0)] * 4
        for i, a in enumerate(self.co):
            if not a:
                continue
            for j, b in enumerate(other.co):
                k = i + j
                out[k % 4] += a * b * (m if k >= 4 else 1)
        return RadElement(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not needed here")
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, RadElement):
            return self.field is other.field and self.co == other.co
        if isinstance(other, (int, Fraction)):
            return self.co[0] == other and not any(self.co[1:])
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.co))

    def __repr__(self):
        return f"RadElement{self.co}"


class RadicalQuarticField:
    """Q[T]/(T^4 - m); a field whenever T^4 - m is irreducible."""

    def __init__(self, m):
        self.m = Fraction(m)
        if not self.m:
            raise ValueError("m must be nonzero")

    def __call__(self, v):
        if isinstance(v, RadElement):
            if v.field is self:
                return v
            raise ValueError("element of a different field")
        if isinstance(v, (int, Fraction)):
            return RadElement(self, (Fraction(v), Fraction(0), Fraction(0),
                                     Fraction(0)))
        raise TypeError(f"cannot coerce {v!r}")

    def from_coords(self, co):
        co = tuple(Fraction(c) for c in co)
        if len(co) != 4:
            raise ValueError("need 4 coordinates")
        return RadElement(self, co)

    def generator(self):
        return self.from_coords((0, 1, 0, 0))

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def __repr__(self):
        return f"RadicalQuarticField({self.m})"


def fermat_point_check(n: int, field, point) -> bool:
    """Exact test of x^n + y^n = z^n for coordinates in the given field.

    The field argument is any coercer of this package's field objects;
    coordinates that do not coerce raise ValueError.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("exponent must be a positive integer")
    if len(point) != 3:
        raise ValueError("point must be a coordinate triple")
    try:
        x, y, z = (field(c) for c in point)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"coordinate outside the field: {exc}") from exc
    return x ** n + y ** n == z ** n
