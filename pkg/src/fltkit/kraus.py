"""Unit-criterion elimination of reducible prime exponents.

Torsion-bound arithmetic, the totally-positive-unit residue engine over a
catalogued biquadratic field, the power-residue norm tables, and window
scans that fold in the degree-8 torsion-prime fixture.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

from .intutil import is_prime, legendre, prime_divisors, primes_in, sqrt_mod
from .numfield import (
    BiquadField, NFElement, QuadField, field_norm, named_field, quad,
    totally_positive_unit_for_case,
)

__all__ = [
    "EscapeReport",
    "KrausCase",
    "PrimeWindow",
    "S8_TORSION_PRIMES",
    "kraus_check_prime",
    "oesterle_bound",
    "prime_window_report",
    "reducibility_bound",
    "unit_power_residue_primes",
]

# Primes that occur as torsion orders of elliptic curves over some number
# field of degree <= 8: every prime up to 23.  Catalogued value, consumed
# as a fixture; recomputing it is far outside desk scale.
S8_TORSION_PRIMES = frozenset({2, 3, 5, 7, 11, 13, 17, 19, 23})

FIXTURE_NOTE = "torsion-prime fixture; handled by the modular-curve analysis"


def oesterle_bound(d: int) -> int:
    """(1 + 3^(d/2))^2, an upper bound for prime torsion in degree d."""
    if d <= 0 or d % 2:
        raise ValueError("degree must be even and positive")
    return (1 + 3 ** (d // 2)) ** 2


def reducibility_bound(degree: int, class_number: int) -> int:
    """(1 + 3^(6dh))^2: reducible exponents above this are ruled out for a
    totally real Galois field of degree d and class number h."""
    if degree <= 0 or class_number <= 0:
        raise ValueError("degree and class number must be positive")
    return (1 + 3 ** (6 * degree * class_number)) ** 2


def _as_field(field) -> BiquadField:
    return named_field(field) if isinstance(field, str) else field


def _field_tag(K: BiquadField) -> str:
    return f"q{K.d1}q{K.d2}"


def _case_unit_quad(K: BiquadField, case: str) -> NFElement:
    """The catalogued unit, as an element of its own quadratic subfield."""
    u = totally_positive_unit_for_case(K, case)
    d = {"i": K.d1, "ii": K.d2, "iii": K.m}[case]
    keep = {"i": 1, "ii": 2, "iii": 3}[case]
    co = [u.co[0], u.co[keep]]
    if any(u.co[j] for j in (1, 2, 3) if j != keep):
        raise ArithmeticError("catalogued unit strays from its quadratic subfield")
    return quad(d).from_coords(co)


def _integer_norm(x: NFElement) -> int:
    n = field_norm(x)
    if n.denominator != 1:
        raise ArithmeticError("norm of a non-integral element")
    return int(n)


def unit_power_residue_primes(u: NFElement, m: int, plus: bool = False):
    """Rational primes dividing N(u^m - 1); with plus, also of N(u^m + 1).

    The plus variant feeds the residue-degree-2 argument, where the norm
    map squares F_p-rational values.
    """
    if not isinstance(u.field, QuadField):
        raise ValueError("u must lie in a real quadratic field")
    if not 1 <= m <= 4:
        raise ValueError("power m must be between 1 and 4")
    w = u ** m
    if w == 1:
        raise ValueError("u^m = 1 is degenerate")
    out = prime_divisors(_integer_norm(w - 1))
    if plus:
        out |= prime_divisors(_integer_norm(w + 1))
    return out


@dataclass(frozen=True)
class KrausCase:
    """Residue constellation of p: splitting 'a' (g=2, f=2) or 'b' (g=4,
    f=1), subcase by which radicand is the quadratic residue."""

    splitting: str
    subcase: str
    u: NFElement


@dataclass(frozen=True)
class EscapeReport:
    p: int
    case: KrausCase
    surviving_subset_sizes: frozenset
    verdict: str

    @property
    def survives(self) -> bool:
        return self.verdict == "survives"


def _rat_mod(q: Fraction, p: int) -> int:
    return q.numerator * pow(q.denominator, -1, p) % p


def kraus_check_prime(p: int, field="q2q3") -> EscapeReport:
    """Test whether the unit criterion eliminates the prime exponent p.

    The case is read off the Legendre symbols; the catalogued unit (all
    three of them in the split-completely case, which the product
    condition must satisfy jointly) is mapped into F_p under both square
    roots of each radicand, and every admissible subset size m is tried.
    Eliminated means no embedding and no m admit a nonempty subset.
    """
    K = _as_field(field)
    if not is_prime(p) or p < 5:
        raise ValueError("p must be a prime >= 5")
    if (2 * K.d1 * K.d2) % p == 0:
        raise ValueError(f"{p} ramifies in Q(sqrt({K.d1}), sqrt({K.d2}))")

    s1, s2 = legendre(K.d1, p), legendre(K.d2, p)
    if s1 == 1 and s2 == 1:
        splitting, subcases = "b", ("i", "ii", "iii")
    elif s1 == 1:
        splitting, subcases = "a", ("i",)
    elif s2 == 1:
        splitting, subcases = "a", ("ii",)
    else:
        splitting, subcases = "a", ("iii",)

    g = 4 if splitting == "b" else 2
    units = [_case_unit_quad(K, c) for c in subcases]
    surviving = set()

    if splitting == "a":
        (u,) = units
        r = sqrt_mod(u.field.d % p, p)
        a, b = u.co
        for t in (r, p - r):
            img = (_rat_mod(a, p) + _rat_mod(b, p) * t) % p
            # residue degree 2: the norm map squares the image
            for m in range(1, g + 1):
                if pow(img, 2 * m, p) == 1:
                    surviving.add(m)
    else:
        r1 = sqrt_mod(K.d1 % p, p)
        r2 = sqrt_mod(K.d2 % p, p)
        gg = gcd(K.d1, K.d2)
        for t1 in (r1, p - r1):
            for t2 in (r2, p - r2):
                roots = {
                    K.d1: t1,
                    K.d2: t2,
                    K.m: t1 * t2 * pow(gg, -1, p) % p,
                }
                imgs = [
                    (_rat_mod(u.co[0], p)
                     + _rat_mod(u.co[1], p) * roots[u.field.d]) % p
                    for u in units
                ]
                for m in range(1, g + 1):
                    if all(pow(img, m, p) == 1 for img in imgs):
                        surviving.add(m)

    case = KrausCase(splitting, subcases[0], totally_positive_unit_for_case(K, subcases[0]))
    verdict = "survives" if surviving else "eliminated"
    return EscapeReport(p, case, frozenset(surviving), verdict)


@dataclass
class PrimeWindow:
    """Window scan outcome: engine survivors plus fixture torsion primes."""

    field: str
    p_min: int
    p_max: int
    torsion_fixture: frozenset
    exceptions: set
    survivors: set = dc_field(default_factory=set)
    flagged: dict = dc_field(default_factory=dict)


def prime_window_report(field, p_min: int, p_max: int,
                        threads: int = 1) -> PrimeWindow:
    """Scan [p_min, p_max] and collect every prime the argument misses."""
    if p_min < 19:
        raise ValueError("window must start in the semistability regime (p >= 19)")
    K = _as_field(field)
    ps = list(primes_in(p_min, p_max))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(lambda p: kraus_check_prime(p, K), ps))
    else:
        reports = [kraus_check_prime(p, K) for p in ps]
    survivors = {rep.p for rep in reports if rep.survives}
    fixture_hits = {p for p in S8_TORSION_PRIMES if p_min <= p <= p_max}
    return PrimeWindow(
        field=_field_tag(K),
        p_min=p_min,
        p_max=p_max,
        torsion_fixture=S8_TORSION_PRIMES,
        exceptions=survivors | fixture_hits,
        survivors=survivors,
        flagged={p: FIXTURE_NOTE for p in sorted(fixture_hits)},
    )
