#!/usr/bin/env python3
"""Averaged Weil heights of the roots of phi_p^n(x) = 1 climbing to log(p)/(p-1).

The roots of phi_p^n(x) = 1 for phi_p(x) = (x^p - x)/p are algebraic
integers (their monic model F_n has integer coefficients) whose p-adic
embeddings all land in Z_p, so the entire height lives at the archimedean
place.  This demo expands the complex backward orbit of 1 level by level
and watches the averaged height rise toward the limit, staying under the
uniform bound log(p+1)/(p-1) the whole way.
"""

from padicdyn import height_limit, height_sequence, uniform_bound

for p, n_max in ((2, 12), (3, 7)):
    limit = height_limit(p)
    bound = uniform_bound(p)
    print(f"\np = {p}:  limit log(p)/(p-1) = {limit:.12f}, bound log(p+1)/(p-1) = {bound:.12f}")
    print(f"{'n':>3} {'roots':>6} {'avg height':>18} {'limit - avg':>14} {'residual':>10}")
    reports = height_sequence(p, n_max)
    for r in reports:
        print(
            f"{r.n:>3} {r.root_count:>6} {r.avg_height:>18.12f} "
            f"{limit - r.avg_height:>14.3e} {r.max_residual:>10.1e}"
        )
    print(f"certificates: {reports[-1].integral_certificate}; {reports[-1].padic_certificate}")

print(
    "\nThe gap to the limit shrinks by a factor of ~p per level: the averaged\n"
    "height of the full root multiset equals log M(F_n)/p^n, and the orbit\n"
    "leaves never enter the open unit disc, pinning M(F_n) = p^((p^n-1)/(p-1))."
)
