"""Bounded point searches on genus-2 sextic models.

Exhaustive over x of bounded naive height, used as substitute
evidence where the published arguments invoke Selmer or Chabauty
machinery that is out of scope here.  The search itself is exact:
candidates survive a square-residue sieve at several primes and are
then confirmed with integer arithmetic, so the output is the complete
list of affine points in the box.
"""

from fractions import Fraction
from math import ceil, gcd

import gmpy2
import numpy as np

from .numfield import quad, sqrt_in_field

__all__ = ["SIEVE_PRIMES", "search_quad", "search_rational"]

SIEVE_PRIMES = (11, 13, 17, 19, 23, 29, 31, 37)


def _radius(coeffs) -> float:
    """Bound on |x| outside which f(x) < 0; inf when f opens upward."""
    if coeffs[-1] > 0:
        return float("inf")
    roots = np.roots(list(reversed(coeffs)))
    real = [abs(z.real) for z in roots if abs(z.imag) < 1e-9]
    return (max(real) + 1e-9) if real else 0.0


def _square_table(coeffs, P):
    """tab[e % P][m % P] says whether S(m, e) can be a square mod P."""
    sq = bytearray(P)
    for v in range(P):
        sq[v * v % P] = 1
    tab = np.zeros((P, P), dtype=bool)
    deg = len(coeffs) - 1
    for em in range(P):
        ep = [pow(em, deg - i, P) for i in range(deg + 1)]
        for mm in range(P):
            s = sum(f * pow(mm, i, P) * ep[i] for i, f in enumerate(coeffs))
            tab[em][mm] = sq[s % P]
    return tab


def search_rational(coeffs, height):
    """Affine rational points on y^2 = f(x) with deg f = 6.

    x runs over m/e in lowest terms with |m|, e <= height; for each
    surviving candidate the homogenised value S = e^6 f(m/e) is tested
    as an exact integer square, y = sqrt(S)/e^3.
    """
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) != 7 or coeffs[6] == 0:
        raise ValueError("expected a degree-6 model")
    H = int(height)
    if H < 1:
        raise ValueError("height bound must be positive")
    tabs = [(P, _square_table(coeffs, P)) for P in SIEVE_PRIMES]
    R = _radius(coeffs)
    found = []
    for e in range(1, H + 1):
        lim = H if R == float("inf") else min(H, ceil(R * e))
        m = np.arange(-lim, lim + 1)
        mask = np.ones(m.shape, dtype=bool)
        for P, tab in tabs:
            mask &= tab[e % P][m % P]
        for m0 in m[mask]:
            m0 = int(m0)
            if gcd(m0, e) != 1:
                continue
            S = sum(f * m0 ** i * e ** (6 - i)
                    for i, f in enumerate(coeffs))
            if S < 0:
                continue
            r = int(gmpy2.isqrt(S))
            if r * r != S:
                continue
            x = Fraction(m0, e)
            y = Fraction(r, e ** 3)
            found.append((x, y))
            if y:
                found.append((x, -y))
    found.sort(key=lambda pt: (pt[0].denominator, abs(pt[0]),
                               pt[0] < 0, pt[1] < 0))
    return found


def _quad_tables(coeffs, d, P, root):
    """tab[e][m][n] for the residues of f((m + n sqrt d)/e) mod P.

    root is a square root of d mod P, so the field embeds in F_P two
    ways; a square must land on a square residue under both.
    """
    sq = bytearray(P)
    for v in range(P):
        sq[v * v % P] = 1
    tab = np.zeros((P, P, P), dtype=bool)
    deg = len(coeffs) - 1
    for em in range(P):
        ep = [pow(em, deg - i, P) for i in range(deg + 1)]
        for mm in range(P):
            for nn in range(P):
                ok = True
                for r in (root, P - root):
                    xr = (mm + r * nn) % P
                    s = sum(f * pow(xr, i, P) * ep[i]
                            for i, f in enumerate(coeffs))
                    if not sq[s % P]:
                        ok = False
                        break
                tab[em][mm][nn] = ok
    return tab


def search_quad(coeffs, d, box):
    """Affine points on y^2 = f(x) over Q(sqrt d), deg f = 6.

    x runs over (m + n sqrt d)/e with |m|, |n|, e bounded by the box
    side.  Candidates must keep f nonnegative under both real
    embeddings, survive square sieves at split primes, and pass an
    exact square test in the field.
    """
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) != 7 or coeffs[6] == 0:
        raise ValueError("expected a degree-6 model")
    B = int(box)
    if B < 1:
        raise ValueError("box side must be positive")
    field = quad(d)
    rt = float(d) ** 0.5
    R = _radius(coeffs)
    tabs = []
    for P in SIEVE_PRIMES:
        if d % P == 0:
            continue
        root = next((r for r in range(1, P) if r * r % P == d % P), None)
        if root is None:
            continue
        tabs.append((P, _quad_tables(coeffs, d, P, root)))
        if len(tabs) == 4:
            break
    found = []
    cpoly = list(enumerate(coeffs))
    for e in range(1, B + 1):
        mlim = B if R == float("inf") else min(B, ceil(R * e))
        nlim = B if R == float("inf") else min(B, ceil(R * e / rt))
        m = np.arange(-mlim, mlim + 1)
        n = np.arange(-nlim, nlim + 1)
        M, N = np.meshgrid(m, n, indexing="ij")
        # both embeddings inside the nonnegativity radius
        if R != float("inf"):
            E1 = np.abs(M + rt * N)
            E2 = np.abs(M - rt * N)
            mask = (E1 <= R * e + 1.0) & (E2 <= R * e + 1.0)
        else:
            mask = np.ones(M.shape, dtype=bool)
        for P, tab in tabs:
            if e % P == 0:
                continue
            mask &= tab[e % P][M % P, N % P]
        for i, j in zip(*np.nonzero(mask)):
            m0, n0 = int(M[i, j]), int(N[i, j])
            if gcd(gcd(m0, n0), e) != 1:
                continue
            x = field.from_coords((Fraction(m0, e), Fraction(n0, e)))
            w = sum(c * x ** i for i, c in cpoly)
            y = sqrt_in_field(w)
            if y is None:
                continue
            found.append((x, y))
            if y:
                found.append((x, -y))
    return found
