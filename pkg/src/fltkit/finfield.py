"""Finite fields F_{p^k}, k <= 4, with deterministic construction.

The modulus for an extension field is always the lexicographically least
monic irreducible of the right degree (ordering the coefficient tuple
(c_{k-1}, ..., c_0) of x^k + c_{k-1}x^{k-1} + ... + c_0), so every run of
the toolkit builds the same field and reports the same element codes.

Elements are integer codes: the polynomial sum c_i * t^i is stored as the
integer sum c_i * p^i.  Extension fields of size up to 2^16 get discrete
log / Zech logarithm tables, which makes the point-counting loops cheap;
prime fields of any size use direct modular arithmetic and never build
tables (the sampled curve-map checks work modulo primes above 10^6).
"""

from __future__ import annotations

import functools

from . import intutil
from .poly import Poly

TABLE_CAP = 1 << 16
ENUM_CAP = 1 << 32


def _digits(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        code, d = divmod(code, p)
        out.append(d)
    return out


def _poly_mul_mod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Schoolbook product of digit lists, reduced mod the monic modulus."""
    k = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(k):
                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
    out = prod[:k]
    while len(out) < k:
        out.append(0)
    return out


def _is_irreducible(mod: list[int], p: int) -> bool:
    """mod monic, degree k: irreducible over F_p iff x^(p^k) = x and
    gcd(x^(p^(k/d)) - x, mod) = 1 for every prime d | k."""
    k = len(mod) - 1
    if k == 1:
        return True

    def frob_iter(times: int) -> list[int]:
        # x^(p^times) mod `mod` by repeated p-th powering
        cur = [0, 1] + [0] * (k - 2)
        for _ in range(times):
            cur = _poly_powmod(cur, p, mod, p)
        return cur

    xk = frob_iter(k)
    if xk != [0, 1] + [0] * (k - 2):
        return False
    for d in intutil.prime_divisors(k):
        g = _poly_gcd_digits(_sub_x(frob_iter(k // d), p), mod, p)
        if len(g) > 1:
            return False
    return True


def _sub_x(a: list[int], p: int) -> list[int]:
    out = list(a)
    if len(out) < 2:
        out += [0] * (2 - len(out))
    out[1] = (out[1] - 1) % p
    return out


def _poly_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    k = len(mod) - 1
    out = [1] + [0] * (k - 1)
    b = list(base)
    while e:
        if e & 1:
            out = _poly_mul_mod(out, b, mod, p)
        b = _poly_mul_mod(b, b, mod, p)
        e >>= 1
    return out


def _poly_gcd_digits(a: list[int], b: list[int], p: int) -> list[int]:
    def trim(x):
        x = list(x)
        while x and x[-1] == 0:
            x.pop()
        return x

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        r = trim(a)
        while len(r) >= len(b):
            c = r[-1] * inv % p
            off = len(r) - len(b)
            for j in range(len(b)):
                r[off + j] = (r[off + j] - c * b[j]) % p
            r = trim(r)
            if not r:
                break
        a, b = b, r
    return a if a else [0]


def _least_irreducible(p: int, k: int) -> list[int]:
    """Digit list (c0..c_{k-1}, 1) of the lex-least monic irreducible.

    "Least" orders the coefficient tuple (c_{k-1}, ..., c_0), which is the
    natural base-p ordering of the index below.
    """
    if k == 1:
        return [0, 1]
    for idx in range(p**k):
        cand = _digits(idx, p, k) + [1]
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FF:
    """A finite field F_{p^k}; use ff(code) or ff.element(digits) for elements."""

    def __init__(self, p: int, k: int):
        if not intutil.is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus_digits = _least_irreducible(p, k)
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._zech: list[int | None] | None = None
        self._chi: list[int] | None = None
        if k > 1:
            if self.q > TABLE_CAP:
                raise ValueError(f"extension field of size {self.q} exceeds table cap")
            self._build_tables()

    # --- construction -------------------------------------------------

    def _mul_digits(self, a: int, b: int) -> int:
        da = _digits(a, self.p, self.k)
        db = _digits(b, self.p, self.k)
        dm = _poly_mul_mod(da, db, self.modulus_digits, self.p)
        return self._encode(dm)

    def _encode(self, digits: list[int]) -> int:
        code = 0
        for d in reversed(digits):
            code = code * self.p + d
        return code

    def _build_tables(self) -> None:
        q = self.q
        # find a generator of the multiplicative group
        fac = intutil.factor(q - 1).primes()

        def order_ok(g: int) -> bool:
            for ell in fac:
                if self._pow_digits(g, (q - 1) // ell) == 1:
                    return False
            return True

        g = 2
        while not order_ok(g):
            g += 1
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._mul_digits(exp[i - 1], g)
        log = [0] * q
        for i, c in enumerate(exp):
            log[c] = i
        zech: list[int | None] = [None] * (q - 1)
        for n in range(q - 1):
            s = self.add(1, exp[n])
            zech[n] = None if s == 0 else log[s]
        chi = [0] * q
        if self.p != 2:
            for n in range(q - 1):
                chi[exp[n]] = 1 if n % 2 == 0 else -1
        else:
            for c in range(1, q):
                chi[c] = 1
        self._exp, self._log, self._zech, self._chi = exp, log, zech, chi
        self.generator = FFElement(self, exp[1])

    def _pow_digits(self, base: int, e: int) -> int:
        out = 1
        b = base
        while e:
            if e & 1:
                out = self._mul_digits(out, b)
            b = self._mul_digits(b, b)
            e >>= 1
        return out

    # --- raw code arithmetic ------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        e = self._log[a] + self._log[b]
        return self._exp[e % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of 0")
            return 0 if e else 1
        if self.k == 1:
            return pow(a, e % (self.p - 1) if self.p > 2 else e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def chi(self, a: int) -> int:
        """Quadratic character: 0 on 0, else +-1 (always +1 in char 2)."""
        if self.k == 1:
            if a == 0:
                return 0
            if self.p == 2:
                return 1
            return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1
        return self._chi[a]

    def sqrt_code(self, a: int) -> int | None:
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if self.k == 1:
            return intutil.sqrt_mod(a, self.p)
        n = self._log[a]
        if n % 2 == 1:
            return None
        r = self._exp[n // 2]
        return min(r, self.neg(r))

    def norm_code(self, a: int) -> int:
        """Norm down to the prime field, as an integer < p."""
        if self.k == 1:
            return a
        n = self.pow(a, (self.q - 1) // (self.p - 1)) if a else 0
        assert n < self.p
        return n

    def frobenius_code(self, a: int) -> int:
        return self.pow(a, self.p)

    # --- element layer -------------------------------------------------

    def __call__(self, v) -> "FFElement":
        """Embed a plain integer (prime-subfield semantics, not a raw code)."""
        if isinstance(v, FFElement):
            assert v.field == self
            return v
        return FFElement(self, int(v) % self.p)

    def element(self, digits) -> "FFElement":
        ds = [d % self.p for d in digits]
        assert len(ds) <= self.k
        ds += [0] * (self.k - len(ds))
        return FFElement(self, self._encode(ds))

    def from_int(self, n: int) -> "FFElement":
        return FFElement(self, n % self.p)

    @property
    def zero_elt(self) -> "FFElement":
        return FFElement(self, 0)

    @property
    def one_elt(self) -> "FFElement":
        return FFElement(self, 1)

    def elements(self):
        """All q elements in deterministic (code) order."""
        if self.q > ENUM_CAP:
            raise ValueError("enumeration cap exceeded")
        for code in range(self.q):
            yield FFElement(self, code)

    def modulus_poly(self) -> Poly:
        """The defining modulus as a Poly over the prime field."""
        base = ff(self.p, 1)
        ring = FFRing(base)
        return Poly(ring, [FFElement(base, d) for d in self.modulus_digits])

    def __repr__(self):
        return f"FF({self.p}^{self.k})" if self.k > 1 else f"FF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FF) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("FF", self.p, self.k))


@functools.lru_cache(maxsize=None)
def ff(p: int, k: int = 1) -> FF:
    return FF(p, k)


class FFElement:
    __slots__ = ("field", "code")

    def __init__(self, field: FF, code: int):
        self.field = field
        self.code = code

    def __add__(self, other):
        other = self.field(other)
        return FFElement(self.field, self.field.add(self.code, other.code))

    __radd__ = __add__

    def __sub__(self, other):
        other = self.field(other)
        return FFElement(self.field, self.field.sub(self.code, other.code))

    def __rsub__(self, other):
        return self.field(other) - self

    def __neg__(self):
        return FFElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        other = self.field(other)
        return FFElement(self.field, self.field.mul(self.code, other.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.field(other)
        return FFElement(self.field, self.field.mul(self.code, self.field.inv(other.code)))

    def __rtruediv__(self, other):
        return self.field(other) / self

    def __pow__(self, e: int):
        return FFElement(self.field, self.field.pow(self.code, e))

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.code))

    def __bool__(self):
        return self.code != 0

    def is_square(self) -> bool:
        return self.field.chi(self.code) >= 0

    def sqrt(self) -> "FFElement | None":
        r = self.field.sqrt_code(self.code)
        return None if r is None else FFElement(self.field, r)

    def norm_to_prime(self) -> "FFElement":
        return FFElement(ff(self.field.p, 1), self.field.norm_code(self.code))

    def frobenius(self) -> "FFElement":
        return FFElement(self.field, self.field.frobenius_code(self.code))

    def digits(self) -> list[int]:
        return _digits(self.code, self.field.p, self.field.k)

    def __repr__(self):
        return f"{self.field}#{self.code}"


class FFRing:
    """Poly coefficient-ring adapter over an FF instance."""

    is_field = True

    def __init__(self, field: FF):
        self.field = field
        self.name = repr(field)
        self.zero = FFElement(field, 0)
        self.one = FFElement(field, 1)

    def coerce(self, v):
        if isinstance(v, FFElement):
            if v.field == self.field:
                return v
            if v.field.k == 1 and v.field.p == self.field.p:
                return FFElement(self.field, v.code)
            raise TypeError("cross-field coercion")
        from fractions import Fraction

        if isinstance(v, Fraction):
            num = self.field(v.numerator)
            if v.denominator == 1:
                return num
            return num / self.field(v.denominator)
        return self.field(v)

    def is_zero(self, a):
        return a.code == 0

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
        return FFElement(self.field, self.field.inv(a.code))

    def divexact(self, a, b):
        return a / b


def poly_roots(f: Poly) -> list[FFElement]:
    """Roots in the coefficient field of a nonzero Poly over an FFRing.

    Brute enumeration for table-sized fields, quadratic formula otherwise
    (large prime fields only ever see degree <= 2 root finding here).
    """
    ring: FFRing = f.ring
    field = ring.field
    assert not f.is_zero()
    if field.q <= TABLE_CAP:
        return [x for x in field.elements() if f.evaluate(x).code == 0]
    deg = f.degree()
    if deg == 0:
        return []
    if deg == 1:
        b, a = f.coeffs[0], f.coeffs[1]
        return [-b / a]
    if deg == 2:
        c, b, a = f.coeffs[0], f.coeffs[1], f.coeffs[2]
        disc = b * b - 4 * a * c
        r = disc.sqrt()
        if r is None:
            return []
        inv2a = 1 / (2 * a)
        roots = [(-b + r) * inv2a, (-b - r) * inv2a]
        return sorted(set(roots), key=lambda e: e.code)
    raise NotImplementedError("degree > 2 root finding in a large field")


def reduce_poly(f: Poly, field: FF) -> Poly:
    """Reduce a Poly over QQ to a Poly over the given finite field."""
    ring = FFRing(field)
    return f.map_coeffs(ring.coerce, ring=ring)
