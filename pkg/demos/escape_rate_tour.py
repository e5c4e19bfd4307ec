#!/usr/bin/env python3
"""A tour of the archimedean escape rate G(z) = lim p^(-k) log+ |phi_p^k(z)|.

G is the canonical local height of phi_p at the archimedean place: it
vanishes exactly on the filled Julia set, scales by p under the map, and
behaves like log|z| - log(p)/(p-1) near infinity.  Each stop below
exercises one of those facts with certified numerics.
"""

import gmpy2
from gmpy2 import mpc, mpfr

from padicdyn import (
    escape_radius,
    functional_equation_check,
    green_function,
    in_filled_julia,
)

p = 2

print("preperiodic rationals are bounded (1 -> 0 -> 0, and 3 is fixed):")
for z in (0, 1, 3):
    g = green_function(z, p)
    print(f"  G({z}) = {float(g.value)}  [{g.status}]")

print("\nthe closed unit disc maps into itself, so the circle certifies instantly:")
with gmpy2.context(precision=128):
    s, c = gmpy2.sin_cos(2 * gmpy2.const_pi() / 7)
    g = green_function(mpc(c, s), p)
print(f"  G(e^(2 pi i/7)) = {float(g.value)} after {g.iterations_used} iterations")

print(f"\nescape radius (p+1)^(1/(p-1)) = {float(escape_radius(p)):.6f}:")
for z in (2, 4):
    print(f"  z = {z}: in filled Julia set -> {in_filled_julia(z, p)}")

print("\nnear infinity G(z) ~ log|z| - log(p)/(p-1):")
with gmpy2.context(precision=128):
    for exp in (4, 8, 12):
        z = mpfr(10) ** exp
        g = green_function(z, p)
        dev = float(abs(g.value - gmpy2.log(z) + gmpy2.log(mpfr(p)) / (p - 1)))
        print(f"  |z| = 1e{exp:<3d} deviation {dev:.2e}, truncation bound {float(g.tail_bound):.2e}")

print("\nscaling under the map, G(phi(z)) = p G(z), as a relative deviation:")
for z in (10, 3.5):
    print(f"  z = {z}: {float(functional_equation_check(z, p)):.2e}")
