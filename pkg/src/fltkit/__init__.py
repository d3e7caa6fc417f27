"""Exact verification toolkit for the degree-4 Fermat computations.

The package recomputes, from first principles, the desk-scale number
theory behind a Fermat-equation analysis over real biquadratic fields:
finite field tables, prime splitting, elliptic curve local data and
torsion, hyperelliptic Jacobian orders, unit-congruence sieves, and the
case-by-case quartic descent, all exposed as a claim registry with a
reporting command line.
"""

__version__ = "0.1.0"
