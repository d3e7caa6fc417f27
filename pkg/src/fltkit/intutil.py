"""Integer utilities: proven primality, factorization, Legendre symbols.

Everything here is deterministic.  Primality uses the Miller-Rabin test
with the fixed base set that is known to be exact for all n < 3.317e24;
every integer this toolkit ever factors is far below that threshold, so
no probabilistic acceptance sneaks into a verification run.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

# Sufficient witness set for deterministic Miller-Rabin below 3.317e24
# (Sorenson-Webster).  Inputs beyond the threshold are rejected.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 3.317e24."""
    if n < 2:
        return False
    if n >= _MR_LIMIT:
        raise ValueError(f"deterministic base set not valid for n = {n}")
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gmpy2.gcd(abs(x - y), n)
        if d != n:
            return int(d)
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


@dataclass(frozen=True)
class Factorization:
    """Signed factorization n = sign * prod(p^e), primes strictly increasing."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            core = "1"
        else:
            core = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
        return core if self.sign > 0 else "-" + core


def factor(n: int) -> Factorization:
    """Complete factorization with proven prime factors.  n must be nonzero."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    found: dict[int, int] = {}

    def record(p: int) -> None:
        found[p] = found.get(p, 0) + 1

    for p in _SMALL_PRIMES:
        while n % p == 0:
            record(p)
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            record(m)
            continue
        root, exact = gmpy2.iroot(m, 2)
        if exact:
            stack.extend([int(root), int(root)])
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return Factorization(sign, tuple(sorted(found.items())))


def prime_divisors(n: int) -> set[int]:
    return set(factor(n).primes())


def primes_in(lo: int, hi: int):
    """Yield primes p with lo <= p <= hi, increasing."""
    p = max(2, lo)
    while p <= hi:
        if is_prime(p):
            yield p
        p += 1 if p == 2 else 2
        if p % 2 == 0:
            p += 1


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p, via Euler's criterion."""
    assert p > 2 and is_prime(p)
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def isqrt(n: int) -> int:
    return int(gmpy2.isqrt(n))


def is_square(n: int) -> bool:
    return n >= 0 and gmpy2.is_square(n)


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p, or None.  Tonelli-Shanks.

    Returns the even representative's partner deterministically: of the two
    roots r and p-r the smaller one is returned.
    """
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def hensel_sqrt(a: int, p: int, k: int) -> int | None:
    """A square root of a modulo p^k (odd p, a a unit square mod p)."""
    r = sqrt_mod(a % p, p)
    if r is None:
        return None
    pe = p
    for _ in range(k - 1):
        pe2 = pe * p
        # Newton step r -> r - (r^2 - a)/(2r) mod pe2
        inv = pow(2 * r % pe2, -1, pe2)
        r = (r - (r * r - a) * inv) % pe2
        pe = pe2
    return r
