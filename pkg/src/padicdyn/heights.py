"""Averaged Weil heights of the roots of phi_p^n(x) = 1.

For monic integral F with root multiset R, the height sum over all places
collapses to the archimedean term

    h_bar = (1/deg F) * sum_{beta in R} log+ |beta|,

because every finite-place contribution vanishes: the roots are algebraic
integers (F monic with integer coefficients) and at p itself the whole
backward orbit of 1 lies in Z_p.  Both facts are cheap to certify per
(p, n) and the report carries the status of each certificate.

The average is taken over the full degree-p^n root multiset rather than a
single Galois orbit — splitting the multiset into irreducible factors
would require integer polynomial factorization and changes nothing about
the limit, since the whole multiset equidistributes the same way.  The
averaged heights increase to log(p)/(p-1), staying below the elementary
bound log(p+1)/(p-1) at every depth.

log M(F) = log|lead| + sum log+ |roots| (the Mahler measure) gives an
independent cross-check: rooting the monic model F_n directly must
reproduce p^n * h_bar without ever touching the fiber tree.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath
from gmpy2 import mpfr

from .arithmetic import IntPoly, denominator_exponent, integral_model, is_prime
from .complexdyn import ComplexOrbit, _context, backward_orbit_complex, extend_backward_orbit
from .errors import (
    DEFAULT_MANTISSA_BITS,
    DEFAULT_ORBIT_CAP,
    InvalidParameterError,
    NumericalFailureError,
    ResourceLimitError,
)
from .padic import backward_orbit_padic, verify_total_splitting

#: largest degree for which the exact integer model is constructed per report
DEFAULT_CERTIFICATE_CAP = 2 ** 12

#: largest degree accepted by the direct root-finding Mahler path
DEFAULT_MAHLER_DEGREE_CAP = 2 ** 12


def height_limit(p: int) -> float:
    """log(p)/(p-1), the limit of the averaged heights."""
    with _context(DEFAULT_MANTISSA_BITS):
        return float(gmpy2.log(mpfr(p)) / (p - 1))


def uniform_bound(p: int) -> float:
    """log(p+1)/(p-1), the elementary uniform height bound."""
    with _context(DEFAULT_MANTISSA_BITS):
        return float(gmpy2.log(mpfr(p + 1)) / (p - 1))


@dataclass(frozen=True)
class HeightReport:
    p: int
    n: int
    root_count: int
    avg_height: float
    bound: float
    limit: float
    max_residual: float
    elapsed_ms: int
    integral_certificate: str
    padic_certificate: str

    def __post_init__(self):
        if self.avg_height < 0 or self.root_count != self.p ** self.n:
            raise InvalidParameterError("inconsistent height report")


@lru_cache(maxsize=None)
def _integral_certificate(p: int, n: int, cap: int) -> str:
    if p ** n > cap:
        return f"skipped: degree p^n = {p**n} exceeds certificate cap {cap}"
    f = integral_model(p, n)
    e = denominator_exponent(p, n)
    if not f.is_monic or f.degree != p ** n or f.coeffs[0] != -(p ** e):
        return "FAILED: integral model is not the expected monic polynomial"
    return f"verified: monic integral, degree {p**n}, constant term -{p}^{e}"


@lru_cache(maxsize=None)
def _padic_certificate(p: int, n: int, cap: int) -> str:
    if p ** n > cap:
        return f"skipped: orbit size p^n = {p**n} exceeds orbit cap {cap}"
    report = verify_total_splitting(backward_orbit_padic(p, n, orbit_cap=cap))
    if not report.passed:
        return "FAILED: p-adic orbit did not certify total splitting"
    return (
        f"verified: {report.count} roots in Z_p, distinct mod "
        f"{p}^{report.distinctness_exponent}"
    )


def _averaged_log_plus(orbit: ComplexOrbit) -> float:
    with _context(orbit.bits):
        total = mpfr(0)
        for z in orbit.leaves:
            r = abs(z)
            if r > 1:
                total += gmpy2.log(r)
        return float(total / len(orbit.leaves))


def _report_from_orbit(orbit: ComplexOrbit, elapsed_ms: int, certificate_cap: int, orbit_cap: int) -> HeightReport:
    p, n = orbit.p, orbit.depth
    return HeightReport(
        p=p,
        n=n,
        root_count=p ** n,
        avg_height=_averaged_log_plus(orbit),
        bound=uniform_bound(p),
        limit=height_limit(p),
        max_residual=float(orbit.max_residual),
        elapsed_ms=elapsed_ms,
        integral_certificate=_integral_certificate(p, n, certificate_cap),
        padic_certificate=_padic_certificate(p, n, orbit_cap),
    )


def average_height(
    p: int,
    n: int,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    certificate_cap: int = DEFAULT_CERTIFICATE_CAP,
) -> HeightReport:
    """Averaged height of the depth-n root multiset, from archimedean data.

    The finite places contribute nothing; the two certificates recorded in
    the report (monic integrality of the exact model, total p-adic
    splitting of the orbit) are what justify dropping them.
    """
    t0 = time.perf_counter()
    orbit = backward_orbit_complex(p, n, 1, bits, orbit_cap=orbit_cap)
    elapsed = int((time.perf_counter() - t0) * 1000)
    return _report_from_orbit(orbit, elapsed, certificate_cap, orbit_cap)


def height_sequence(
    p: int,
    n_max: int,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    certificate_cap: int = DEFAULT_CERTIFICATE_CAP,
) -> list[HeightReport]:
    """Reports for n = 1..n_max, expanding one shared incremental tree."""
    if n_max < 1:
        raise InvalidParameterError("n_max must be >= 1")
    reports = []
    orbit = None
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        if orbit is None:
            orbit = backward_orbit_complex(p, 1, 1, bits, orbit_cap=orbit_cap)
        else:
            orbit = extend_backward_orbit(orbit, orbit_cap=orbit_cap)
        elapsed = int((time.perf_counter() - t0) * 1000)
        reports.append(_report_from_orbit(orbit, elapsed, certificate_cap, orbit_cap))
    return reports


def mahler_measure(
    f: IntPoly,
    bits: int = DEFAULT_MANTISSA_BITS,
    *,
    degree_cap: int = DEFAULT_MAHLER_DEGREE_CAP,
) -> mpfr:
    """M(f) = |lead| * prod of |roots| outside the unit circle.

    Roots come from simultaneous iteration on f itself (mpmath's solver),
    so this path is independent of the fiber tree and serves as its
    oracle.  Degree is capped: past a few thousand the direct solve is the
    fragile route, which is exactly why the tree exists.
    """
    if f.degree < 0:
        raise InvalidParameterError("Mahler measure of the zero polynomial is undefined")
    if f.degree > degree_cap:
        raise ResourceLimitError(f"degree {f.degree} exceeds the Mahler degree cap {degree_cap}")
    lead = abs(f.coeffs[-1])
    if f.degree == 0:
        with _context(bits):
            return mpfr(lead)
    dps = max(50, int(bits * 0.302) + 20)
    try:
        with mpmath.workdps(dps):
            roots = mpmath.polyroots(
                list(reversed(f.coeffs)), maxsteps=500, extraprec=2 * bits
            )
            log_m = mpmath.log(lead)
            for r in roots:
                m = abs(r)
                if m > 1:
                    log_m += mpmath.log(m)
            encoded = mpmath.nstr(log_m, int(dps * 0.9), strip_zeros=False)
    except mpmath.libmp.NoConvergence as exc:
        raise NumericalFailureError(f"root finding did not converge: {exc}") from exc
    with _context(bits):
        return gmpy2.exp(mpfr(encoded))


@dataclass(frozen=True)
class PreperiodicityResult:
    """Outcome of exact forward iteration with cycle detection."""

    p: int
    start: Fraction
    status: str
    value: float | None
    orbit: tuple

    @property
    def preperiodic(self) -> bool:
        return self.status == "preperiodic"


def canonical_height_of_one(
    p: int,
    start=1,
    *,
    step_cap: int = 64,
    bit_cap: int = 2 ** 20,
) -> PreperiodicityResult:
    """Canonical height certificate by exact rational forward iteration.

    A revisited value proves preperiodicity, hence canonical height 0
    (for the default start this is the orbit 1 -> 0 -> 0).  Hitting the
    step cap or the coefficient-size cap yields the status
    'not preperiodic at cap' — not an error, just an honest non-answer.
    """
    if not is_prime(p):
        raise InvalidParameterError(f"p must be prime, got {p!r}")
    x = Fraction(start)
    seen = {}
    orbit = []
    for step in range(step_cap + 1):
        if x in seen:
            return PreperiodicityResult(p, Fraction(start), "preperiodic", 0.0, tuple(orbit))
        if x.numerator.bit_length() > bit_cap or x.denominator.bit_length() > bit_cap:
            break
        seen[x] = step
        orbit.append(x)
        x = (x ** p - x) / p
    return PreperiodicityResult(p, Fraction(start), "not preperiodic at cap", None, tuple(orbit))
