"""Archimedean dynamics of phi_p(x) = (x^p - x)/p over C.

Three capabilities live here, all at configurable MPFR/MPC precision:

* fiber solving and breadth-first backward orbits: the depth-n preimage
  tree of a target point, p^n leaves, each a numerical root of
  phi_p^n(x) = target, re-verified by forward iteration;

* the escape-rate function G(z) = lim p^(-k) log+ |phi_p^k(z)|, the
  archimedean canonical local height of the map.  Once an orbit point w
  clears a large radius, log |phi_p(w)| = p log |w| - log p + log |1 - w^(1-p)|
  telescopes into

      G(z) = p^(-k) (log |w_k| - log(p)/(p-1) + p^(-1) log |1 - w_k^(1-p)|)

  with truncation error below the magnitude of the next telescoping term,
  which is reported alongside the value;

* filled-Julia membership.  Boundedness is certified two ways: the closed
  unit disc maps into itself (|x^p - x|/p <= 2/p <= 1), which is rigorous
  and instant, and orbits that stay below the escape radius
  (p+1)^(1/(p-1)) for the whole iteration budget are declared bounded
  because no bounded orbit can ever exceed that radius.  Orbits caught
  between the escape radius and the large radius when the budget runs out
  are reported as failures rather than guessed at; this happens only for
  points numerically indistinguishable from the Julia boundary.

Fibers are solved by simultaneous (Durand-Kerner) iteration.  Each fiber
is a degree-p equation x^p - x - p c = 0, so conditioning stays local to
the tree node: depth 14 at p = 2 is routine where direct root-finding on
the degree-16384 model would be fragile.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .arithmetic import is_prime
from .errors import (
    DEFAULT_MANTISSA_BITS,
    DEFAULT_ORBIT_CAP,
    InvalidParameterError,
    NumericalFailureError,
    ResourceLimitError,
)

MIN_MANTISSA_BITS = 53

#: multiplicative hover margin applied to the escape radius
ESCAPE_MARGIN = 2.0 ** -20

DEFAULT_RADIUS_BIG = 1e6
DEFAULT_GREEN_ITERATIONS = 256

BOUNDED = "bounded-certified"
ESCAPED = "escaped-certified"


def _require_bits(bits: int) -> None:
    if bits < MIN_MANTISSA_BITS:
        raise InvalidParameterError(f"mantissa bits must be >= {MIN_MANTISSA_BITS}, got {bits}")


def _context(bits: int):
    _require_bits(bits)
    return gmpy2.context(precision=bits)


def to_big_complex(value, bits: int = DEFAULT_MANTISSA_BITS) -> mpc:
    """Convert ints, floats, Fractions, complex, or (re, im) pairs to mpc."""
    with _context(bits):
        if isinstance(value, tuple):
            re, im = value
            return mpc(_to_real(re), _to_real(im))
        if isinstance(value, (int, float, Fraction)):
            return mpc(_to_real(value), 0)
        z = mpc(value)
        if not gmpy2.is_finite(z):
            raise InvalidParameterError("complex values must be finite")
        return z


def _to_real(x) -> mpfr:
    if isinstance(x, Fraction):
        return mpfr(x.numerator) / mpfr(x.denominator)
    return mpfr(x)


def phi_value(z: mpc, p: int) -> mpc:
    """(z^p - z)/p at the caller's working precision."""
    return (z ** p - z) / p


def escape_radius(p: int, bits: int = DEFAULT_MANTISSA_BITS) -> mpfr:
    """(p+1)^(1/(p-1)): every orbit that exceeds this radius escapes."""
    with _context(bits):
        return gmpy2.exp(gmpy2.log(mpfr(p + 1)) / (p - 1))


def _initial_guesses(c: mpc, p: int) -> list[mpc]:
    # perturbed p-th roots of unity scaled to the Cauchy root bound
    radius = 1 + max(mpfr(1), p * abs(c))
    pi2 = 2 * gmpy2.const_pi()
    out = []
    for k in range(p):
        s, co = gmpy2.sin_cos(pi2 * k / p + mpfr("0.4"))
        out.append(mpc(radius * co, radius * s))
    return out


def _durand_kerner(c: mpc, p: int, tol: mpfr, itcap: int) -> tuple[list[mpc], bool]:
    pc = p * c
    xs = _initial_guesses(c, p)
    step_floor = mpfr(2) ** (2 - gmpy2.get_context().precision)
    for _ in range(itcap):
        max_step = mpfr(0)
        for j in range(p):
            x = xs[j]
            den = mpc(1)
            for k in range(p):
                if k != j:
                    den *= x - xs[k]
            if den == 0:
                xs[j] = x + mpfr("1e-3") * (1 + abs(x))
                max_step = mpfr("inf")
                continue
            g = x ** p - x - pc
            step = g / den
            xs[j] = x - step
            max_step = max(max_step, abs(step))
        if max_step <= step_floor * (1 + max(abs(x) for x in xs)):
            break
    residual = max(abs(x ** p - x - pc) for x in xs)
    return xs, residual <= tol


def solve_fiber(c, p: int, bits: int = DEFAULT_MANTISSA_BITS, tol=None) -> list[mpc]:
    """The p roots of x^p - x - p c = 0, sorted by (real, imaginary).

    Simultaneous iteration from perturbed roots of unity; residuals are
    checked against `tol` (default 2^(16-bits), absolute).  On
    non-convergence the solve is retried once at doubled precision and the
    results rounded back; persistent failure raises.
    """
    if not is_prime(p):
        raise InvalidParameterError(f"p must be prime, got {p!r}")
    _require_bits(bits)
    itcap = 64 + 8 * p
    with _context(bits):
        c0 = +to_big_complex(c, bits)
        tol0 = mpfr(2) ** (16 - bits) if tol is None else mpfr(tol)
        if tol0 <= 0:
            raise InvalidParameterError("tolerance must be positive")
        roots, ok = _durand_kerner(c0, p, tol0, itcap)
    if not ok:
        # single precision-doubling escalation
        with _context(2 * bits):
            roots, ok = _durand_kerner(+c0, p, tol0, 2 * itcap)
        if not ok:
            raise NumericalFailureError(
                f"fiber solve over c={c0} did not reach residual {tol0} even at {2*bits} bits"
            )
        with _context(bits):
            roots = [+r for r in roots]
    roots.sort(key=lambda z: (z.real, z.imag))
    return roots


@dataclass(frozen=True)
class ComplexOrbit:
    """Depth-n archimedean fiber tree: p^n numerical preimages of `target`.

    Entries are (value, address) pairs sorted by (real, imaginary) value;
    the address records, per level, the index of the chosen root within
    its fiber's canonical ordering.  residuals[i] is |phi_p^n(leaf_i) -
    target| recomputed by forward iteration, never trusted from the
    solver.
    """

    p: int
    depth: int
    target: mpc
    bits: int
    entries: tuple = field(repr=False)
    residuals: tuple = field(repr=False)

    @property
    def leaves(self) -> list[mpc]:
        return [z for z, _ in self.entries]

    @property
    def addresses(self) -> list[str]:
        return [a for _, a in self.entries]

    @property
    def max_residual(self) -> mpfr:
        return max(self.residuals)


def _digit(p: int, i: int) -> str:
    return str(i) if p <= 10 else f"{i}."


def _verified_orbit(p, depth, target, bits, entries) -> ComplexOrbit:
    with _context(bits):
        annotated = []
        for z, address in entries:
            w = z
            for _ in range(depth):
                w = phi_value(w, p)
            annotated.append((z, address, abs(w - target)))
        annotated.sort(key=lambda e: (e[0].real, e[0].imag))
        acceptance = mpfr(2) ** -(bits // 2)
        worst = max(r for _, _, r in annotated)
    if worst > acceptance:
        raise NumericalFailureError(
            f"orbit residual {worst} exceeds acceptance threshold {acceptance}; raise bits"
        )
    return ComplexOrbit(
        p,
        depth,
        target,
        bits,
        tuple((z, a) for z, a, _ in annotated),
        tuple(r for _, _, r in annotated),
    )


def backward_orbit_complex(
    p: int,
    n: int,
    target=1,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
) -> ComplexOrbit:
    """Breadth-first expansion of the depth-n complex backward orbit."""
    if not is_prime(p):
        raise InvalidParameterError(f"p must be prime, got {p!r}")
    if n < 1:
        raise InvalidParameterError("orbit depth n must be >= 1")
    if p ** n > orbit_cap:
        raise ResourceLimitError(f"orbit size p^n = {p**n} exceeds the orbit cap {orbit_cap}")
    _require_bits(bits)
    t = to_big_complex(target, bits)
    entries = [(t, "")]
    for _ in range(n):
        nxt = []
        for value, address in entries:
            for i, root in enumerate(solve_fiber(value, p, bits)):
                nxt.append((root, address + _digit(p, i)))
        entries = nxt
    return _verified_orbit(p, n, t, bits, entries)


def extend_backward_orbit(orbit: ComplexOrbit, *, orbit_cap: int = DEFAULT_ORBIT_CAP) -> ComplexOrbit:
    """One more level of the fiber tree, reusing the existing leaves."""
    p = orbit.p
    if p ** (orbit.depth + 1) > orbit_cap:
        raise ResourceLimitError(
            f"orbit size p^n = {p ** (orbit.depth + 1)} exceeds the orbit cap {orbit_cap}"
        )
    nxt = []
    for value, address in orbit.entries:
        for i, root in enumerate(solve_fiber(value, p, orbit.bits)):
            nxt.append((root, address + _digit(p, i)))
    return _verified_orbit(p, orbit.depth + 1, orbit.target, orbit.bits, nxt)


@dataclass(frozen=True)
class GreenValue:
    """Escape-rate value with its certification status.

    value is exactly 0 iff status is bounded-certified; for escaped orbits
    tail_bound bounds the truncation error of the telescoped value (the
    magnitude of the first omitted series term).
    """

    value: mpfr
    status: str
    iterations_used: int
    tail_bound: mpfr

    def __post_init__(self):
        if (self.status == BOUNDED) != (self.value == 0):
            raise InvalidParameterError("value must be 0 exactly for bounded orbits")


def green_function(
    z,
    p: int,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    radius_big: float = DEFAULT_RADIUS_BIG,
    max_iterations: int = DEFAULT_GREEN_ITERATIONS,
) -> GreenValue:
    """The archimedean escape rate G(z) = lim p^(-k) log+ |phi_p^k(z)|.

    Escaping orbits get the telescoped closed form once they clear
    `radius_big`; orbits that never leave the (margin-padded) escape
    radius within the budget are bounded-certified.  An orbit still stuck
    between the two radii after one budget escalation raises a numerical
    failure — such points sit on the measure-zero escape threshold.
    """
    if not is_prime(p):
        raise InvalidParameterError(f"p must be prime, got {p!r}")
    with _context(bits):
        w = +to_big_complex(z, bits)
        r_escape = escape_radius(p, bits) * (1 + mpfr(ESCAPE_MARGIN))
        log_p_term = gmpy2.log(mpfr(p)) / (p - 1)
        budget = max_iterations
        escalated = False
        ever_escaped = False
        k = 0
        while True:
            radius = abs(w)
            if radius > radius_big:
                scale = mpfr(p) ** (-k)
                correction = gmpy2.log(abs(1 - w ** (1 - p))) / p
                value = scale * (gmpy2.log(radius) - log_p_term + correction)
                w_next = phi_value(w, p)
                tail = scale * abs(gmpy2.log(abs(1 - w_next ** (1 - p)))) / p ** 2
                return GreenValue(value, ESCAPED, k, tail)
            if radius <= 1:
                # the closed unit disc is forward invariant: |x^p - x|/p <= 2/p
                return GreenValue(mpfr(0), BOUNDED, k, mpfr(0))
            if radius > r_escape:
                ever_escaped = True
            if k >= budget:
                if not ever_escaped:
                    return GreenValue(mpfr(0), BOUNDED, k, mpfr(0))
                if not escalated:
                    budget *= 2
                    escalated = True
                else:
                    raise NumericalFailureError(
                        f"orbit of {w} hovers between the escape radius and "
                        f"{radius_big} after {budget} iterations"
                    )
            w = phi_value(w, p)
            k += 1


def in_filled_julia(z, p: int, bits: int = DEFAULT_MANTISSA_BITS) -> bool:
    """True iff the forward orbit is bounded-certified (escape rate zero)."""
    return green_function(z, p, bits).status == BOUNDED


def functional_equation_check(z, p: int, bits: int = DEFAULT_MANTISSA_BITS) -> mpfr:
    """Relative deviation |G(phi_p(z)) - p G(z)| / max(1, p G(z)).

    Only meaningful on escaping orbits; bounded z is rejected since both
    sides vanish identically there.
    """
    with _context(bits):
        z0 = +to_big_complex(z, bits)
        gz = green_function(z0, p, bits)
        if gz.status != ESCAPED:
            raise InvalidParameterError(
                "functional-equation check needs an escaping point (G > 0)"
            )
        gphi = green_function(phi_value(z0, p), p, bits)
        lhs = abs(gphi.value - p * gz.value)
        return lhs / max(mpfr(1), p * gz.value)
