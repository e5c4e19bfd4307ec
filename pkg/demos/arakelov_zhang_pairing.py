#!/usr/bin/env python3
"""Two independent routes to the pairing of x^2 and (x^p - x)/p.

The Arakelov-Zhang pairing of the squaring map and phi_p equals
log(p)/(p-1), and the package computes it both ways the cross-integral
can be read:

  pullback      - average log+ |.| over deeper and deeper backward orbits
                  of a generic base point (equidistribution does the work);
  decomposition - evaluate the integrals exactly: the mismatch constant at
                  infinity plus a unit-circle average of the escape rate
                  that vanishes sample by sample.

The two estimates below converge to each other and to the closed form.
"""

from padicdyn import az_decomposition_estimate, az_pullback_estimate, height_limit

for p in (2, 3):
    print(f"\np = {p}: target log(p)/(p-1) = {height_limit(p):.15f}")
    exact = az_decomposition_estimate(p, 64)
    print(f"  decomposition: {exact.estimate:.15f}   (abs error {exact.abs_error:.1e})")
    for key, note in exact.certificates.items():
        print(f"    {key}: {note}")
    print("  pullback at growing depth (default generic base point):")
    for n in (4, 7, 10):
        est = az_pullback_estimate(p, n)
        print(f"    n = {n:>2}: {est.estimate:.12f}   (abs error {est.abs_error:.1e})")
