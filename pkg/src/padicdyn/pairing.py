"""Numerical Arakelov-Zhang pairing of the squaring map and (x^p - x)/p.

The pairing of two maps can be written as a sum over places of
cross-integrals: one map's local canonical height integrated against the
other map's canonical measure.  For the pair (squaring, phi_p) over Q the
two available routes are

* pullback: integrate log+ |.| (the squaring map's local height) against
  the canonical measure of phi_p, sampled by backward-orbit leaves of a
  generic base point.  The estimate is the plain average of log+ |leaf|
  and converges by pullback equidistribution as the depth grows.

* decomposition: the exact evaluation.  The archimedean cross-integral
  reduces to f(infinity) = log(p)/(p-1) — the mismatch at infinity
  between log|x| and the escape rate of phi_p — plus the average of the
  escape rate over the unit circle (Haar samples of the squaring map's
  measure), which vanishes identically because the circle sits inside the
  filled Julia set of phi_p.  The p-adic cross-integral vanishes because
  both log+ |x|_p and the p-adic local height are zero on Z_p, which
  carries the measure; both vanishing statements are recorded as
  certificates rather than integrated numerically.

Both routes target the same constant log(p)/(p-1): the pairing is
symmetric in its two integral expressions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from .arithmetic import is_prime
from .complexdyn import (
    BOUNDED,
    _context,
    backward_orbit_complex,
    escape_radius,
    green_function,
    phi_value,
    to_big_complex,
)
from .errors import (
    DEFAULT_MANTISSA_BITS,
    DEFAULT_ORBIT_CAP,
    InvalidParameterError,
    NumericalFailureError,
)
from .heights import height_limit

#: fixed generic base point for pullback runs (reproducible by default)
DEFAULT_BASE_POINT = (Fraction(41, 100), Fraction(37, 100))

PULLBACK = "pullback"
DECOMPOSITION = "decomposition"


@dataclass(frozen=True)
class PairingReport:
    p: int
    method: str
    estimate: float
    target: float
    abs_error: float
    parameters: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.estimate < 0:
            raise InvalidParameterError("pairing estimates are nonnegative")


@dataclass(frozen=True)
class MeasureSample:
    """Point cloud approximating a canonical measure at the archimedean place."""

    kind: str
    points: tuple

    def __len__(self):
        return len(self.points)


def unit_circle_sample(count: int, bits: int = DEFAULT_MANTISSA_BITS) -> MeasureSample:
    """count equispaced points on the unit circle (Haar samples for squaring)."""
    if count < 1:
        raise InvalidParameterError("sample count must be >= 1")
    with _context(bits):
        pi2 = 2 * gmpy2.const_pi()
        pts = []
        for j in range(count):
            s, c = gmpy2.sin_cos(pi2 * j / count)
            pts.append(mpc(c, s))
        return MeasureSample("unit-circle", tuple(pts))


def orbit_sample(p: int, n: int, base_point=None, bits: int = DEFAULT_MANTISSA_BITS) -> MeasureSample:
    """Backward-orbit leaves of a base point (canonical-measure samples for phi_p)."""
    z0 = to_big_complex(DEFAULT_BASE_POINT if base_point is None else base_point, bits)
    orbit = backward_orbit_complex(p, n, z0, bits)
    return MeasureSample("backward-orbit", tuple(orbit.leaves))


def az_pullback_estimate(
    p: int,
    n: int,
    base_point=None,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
) -> PairingReport:
    """Average of log+ |leaf| over the depth-n backward orbit of the base point.

    With base point 1 this is numerically the same quantity as the
    averaged root height; a generic base point estimates the pairing.
    """
    z0 = to_big_complex(DEFAULT_BASE_POINT if base_point is None else base_point, bits)
    orbit = backward_orbit_complex(p, n, z0, bits, orbit_cap=orbit_cap)
    with _context(bits):
        total = mpfr(0)
        for z in orbit.leaves:
            r = abs(z)
            if r > 1:
                total += gmpy2.log(r)
        estimate = float(total / len(orbit.leaves))
    target = height_limit(p)
    return PairingReport(
        p=p,
        method=PULLBACK,
        estimate=estimate,
        target=target,
        abs_error=abs(estimate - target),
        parameters={
            "n": n,
            "base_point": _format_point(z0),
            "bits": bits,
            "max_residual": float(orbit.max_residual),
        },
    )


def circle_average_green(p: int, count: int, bits: int = DEFAULT_MANTISSA_BITS) -> float:
    """Average escape rate over unit-circle samples; exactly 0, every sample
    bounded-certified (|x^p - x|/p <= 2/p <= 1 traps the circle)."""
    sample = unit_circle_sample(count, bits)
    with _context(bits):
        total = mpfr(0)
        for z in sample.points:
            g = green_function(z, p, bits)
            if g.status != BOUNDED:
                raise NumericalFailureError(
                    f"unit-circle sample {z} failed to certify as bounded"
                )
            total += g.value
        return float(total / count)


def az_decomposition_estimate(
    p: int,
    count: int = 64,
    bits: int = DEFAULT_MANTISSA_BITS,
) -> PairingReport:
    """Pairing via the exact integral decomposition.

    estimate = f(infinity) + circle average of the escape rate - 0, where
    f(infinity) = log(p)/(p-1) is the closed-form limit of
    log|x| - G(x) at infinity, and the two subtracted integrals vanish
    by certificate (see the report's certificates field).
    """
    if not is_prime(p):
        raise InvalidParameterError(f"p must be prime, got {p!r}")
    circle = circle_average_green(p, count, bits)
    with _context(bits):
        f_inf = gmpy2.log(mpfr(p)) / (p - 1)
        estimate = float(f_inf + mpfr(circle))
    target = height_limit(p)
    return PairingReport(
        p=p,
        method=DECOMPOSITION,
        estimate=estimate,
        target=target,
        abs_error=abs(estimate - target),
        parameters={"samples": count, "bits": bits},
        certificates={
            "f_infinity": "log(p)/(p-1), closed form from the leading coefficient 1/p",
            "circle_average": f"{circle!r} from {count} bounded-certified samples",
            "orbit_integral": "0: the escape rate vanishes on the filled Julia set, "
            "which carries the canonical measure",
            "padic_integral": "0: log+|x|_p and the p-adic local height vanish on Z_p, "
            "which carries the p-adic canonical measure",
        },
    )


def potential_consistency(
    p: int,
    n: int,
    w,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
) -> float:
    """|orbit average of log|w - leaf|  -  (G(w) + log(p)/(p-1))|.

    The backward orbit of 1 samples the equilibrium measure, whose
    potential at an exterior point w is the escape rate shifted by the
    Robin constant log(p)/(p-1); the deviation shrinks as depth grows.
    """
    with _context(bits):
        w0 = +to_big_complex(w, bits)
        if abs(w0) <= escape_radius(p, bits) + 1:
            raise InvalidParameterError(
                "potential check needs |w| > escape radius + 1, well outside the filled Julia set"
            )
        orbit = backward_orbit_complex(p, n, 1, bits, orbit_cap=orbit_cap)
        total = mpfr(0)
        for z in orbit.leaves:
            total += gmpy2.log(abs(w0 - z))
        lhs = total / len(orbit.leaves)
        g = green_function(w0, p, bits)
        rhs = g.value + gmpy2.log(mpfr(p)) / (p - 1)
        return float(abs(lhs - rhs))


def _format_point(z: mpc) -> str:
    return f"{z.real}+{z.imag}i"
