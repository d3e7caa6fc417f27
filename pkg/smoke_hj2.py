import random
import sys
import time
from fractions import Fraction

sys.path.insert(0, "src")

import fltkit.hyperjac as hj
from fltkit.hyperjac import (
    CoverMap, GroupStructure, cantor_mul, divisor_order, fiber_section_check,
    hyper_fixture, lpolynomial, pullback_class, random_divisor,
    subgroup_closure, verify_group_structure,
)
from fltkit.poly import Poly, QQ

nonic = hyper_fixture("nonic")
x023 = hyper_fixture("x023")

print("== L-polynomials of the nonic ==")
t0 = time.time()
L5 = lpolynomial(nonic, 5)
print("  F5:", L5.coeffs, "L(1) =", L5.evaluate(1), f"[{time.time()-t0:.2f}s]")
assert L5.evaluate(1) == 756

t0 = time.time()
L13 = lpolynomial(nonic, 13)
print("  F13: L(1) =", L13.evaluate(1), f"[{time.time()-t0:.2f}s]")
assert L13.evaluate(1) == 42997

t0 = time.time()
L13b = lpolynomial(nonic, 13, threads=4)
assert L13b.coeffs == L13.coeffs
print(f"  F13 threads=4 agrees [{time.time()-t0:.2f}s]")

assert L5.functional_equation_ok() and L13.functional_equation_ok()
print("  root gaps:", L5.reciprocal_root_gap(), L13.reciprocal_root_gap())

print("== verify_group_structure ==")
for curve, p, claimed, want in [
    (x023, 47, (11, 209), "refuted"),
    (x023, 47, (2299,), "verified"),
    (x023, 71, (3839,), "verified"),
    (nonic, 5, (6, 126), "verified"),
    (nonic, 13, (42997,), "verified"),
    (x023, 47, (2300,), "refuted"),
]:
    t0 = time.time()
    rep = verify_group_structure(curve, p, GroupStructure(claimed))
    ok = "ok" if rep.verdict == want else "MISMATCH want " + want
    print(f"  {p} {claimed} -> {rep.verdict} ({ok}) [{time.time()-t0:.1f}s]")
    print("    notes:", rep.notes)
    if rep.witnesses:
        print("    witnesses at:", sorted(rep.witnesses))
    assert rep.verdict == want

rep = verify_group_structure(nonic, 5, GroupStructure((6, 126)), witness_tries=1)
print("  tiny witness_tries ->", rep.verdict, "|", rep.notes)
assert rep.verdict == "inconclusive"

print("== pullback ==")
rhs = Poly(QQ, [Fraction(2), Fraction(0), Fraction(0), Fraction(1)])
cov = CoverMap(nonic, rhs, Fraction(-2))
D0 = pullback_class(cov, (Fraction(-1), Fraction(1)), 5)
print("  D0 =", D0)
o = divisor_order(D0, 756)
print("  order(D0) =", o)
assert o == 6

assert fiber_section_check(cov, (Fraction(-1), Fraction(1)), 5) is True
print("  fiber section check: True")

try:
    pullback_class(cov, (Fraction(-1), Fraction(2)), 5)
    raise SystemExit("expected ValueError for non-point")
except ValueError as e:
    print("  non-point rejected:", e)

try:
    pullback_class(cov, (Fraction(1, 5), Fraction(1)), 5)
    raise SystemExit("expected ValueError for 5-adic denominator")
except ValueError as e:
    print("  bad denominator rejected:", e)

rng = random.Random(7)
gens = [cantor_mul(3, random_divisor(nonic, 5, rng=rng)) for _ in range(8)]
cl = subgroup_closure(gens)
print("  |3J(F5)| closure:", len(cl))
assert len(cl) == 84
assert D0 not in cl
print("  D0 nonzero in J/3J: ok")

print("== extension-order consistency at 47 ==")
L47 = lpolynomial(x023, 47)
o2 = L47.jacobian_order(2)
print("  |J(F_47^2)| =", o2, "L(1)*L(-1) =", L47.evaluate(1) * L47.evaluate(-1))
assert o2 == L47.evaluate(1) * L47.evaluate(-1)
rng = random.Random(11)
t0 = time.time()
for _ in range(5):
    D = random_divisor(x023, 47, 2, rng=rng)
    dord = divisor_order(D, o2)
    assert o2 % dord == 0
print(f"  5 random classes over F_47^2 annihilated [{time.time()-t0:.1f}s]")

print("ALL SMOKE OK")
