"""Arithmetic in Z/p^K and the p-adic backward orbit of 1 under (x^p - x)/p.

For any target beta in Z_p the fiber equation

    g(x) = x^p - x - p*beta = 0

has |g(a)|_p <= 1/p and |g'(a)|_p = 1 for every residue a in {0, ..., p-1}
(Fermat's little theorem plus the strong triangle inequality), so Hensel's
lemma gives exactly one root congruent to each residue: the map is a
surjective p-to-1 self-map of Z_p.  Expanding fibers n times below the
constant 1 therefore produces p^n distinct roots of phi_p^n(x) = 1 inside
Z_p — the splitting that makes these numbers totally p-adic — and every
root has |x|_p <= 1 by construction.

Precision bookkeeping: values carry a fixed working modulus p^K plus a
count of trusted base-p digits.  Hensel lifting preserves the trusted-digit
count of the target (the unit derivative means a fiber root is as accurate
as p*beta, and we conservatively do not claim the extra digit gained from
the factor p).  The forward map costs exactly one digit per application —
an exact division by p — which is why verifying a depth-n orbit needs
K > n plus a safety margin.

Distinctness of the enumerated roots is certified modulo p^(trusted
digits).  The rigorous certificate is really the residue address tree: two
leaves whose address strings differ already differ modulo p at the tree
level where the addresses first split, so address-distinctness is exact
and the mantissa comparison only cross-checks it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arithmetic import is_prime
from .errors import (
    DEFAULT_ORBIT_CAP,
    InternalError,
    InvalidParameterError,
    PrecisionViolationError,
    ResourceLimitError,
)

DEFAULT_PRECISION_MARGIN = 16
DEFAULT_BASE_DIGITS = 64


@dataclass(frozen=True)
class PadicNumber:
    """Element of Z/p^K with a count of trusted low-order base-p digits."""

    p: int
    modulus_exponent: int
    mantissa: int
    effective_precision: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidParameterError(f"p must be prime, got {self.p!r}")
        if self.modulus_exponent < 1:
            raise InvalidParameterError("modulus exponent K must be >= 1")
        if not 0 <= self.mantissa < self.p ** self.modulus_exponent:
            raise InvalidParameterError("mantissa must lie in [0, p^K)")
        if not 1 <= self.effective_precision <= self.modulus_exponent:
            raise PrecisionViolationError(
                f"effective precision {self.effective_precision} outside [1, K={self.modulus_exponent}]"
            )

    @property
    def modulus(self) -> int:
        return self.p ** self.modulus_exponent

    def is_unit(self) -> bool:
        return self.mantissa % self.p != 0

    def digits(self) -> str:
        """Mantissa in base p, most significant digit first."""
        ds = []
        m = self.mantissa
        for _ in range(self.modulus_exponent):
            m, r = divmod(m, self.p)
            ds.append(r)
        ds.reverse()
        if self.p <= 10:
            return "".join(str(d) for d in ds)
        return ".".join(str(d) for d in ds)

    def __repr__(self):
        return (
            f"PadicNumber(p={self.p}, K={self.modulus_exponent}, "
            f"mantissa={self.mantissa}, eff={self.effective_precision})"
        )


def padic_from_int(p: int, modulus_exponent: int, value: int, effective_precision: int | None = None) -> PadicNumber:
    """Embed an integer into Z/p^K, trusted to all K digits by default."""
    mod = p ** modulus_exponent
    if effective_precision is None:
        effective_precision = modulus_exponent
    return PadicNumber(p, modulus_exponent, value % mod, effective_precision)


def _check_compatible(a: PadicNumber, b: PadicNumber) -> None:
    if a.p != b.p or a.modulus_exponent != b.modulus_exponent:
        raise InvalidParameterError(
            "operands must share p and the working modulus exponent K"
        )


def padic_add(a: PadicNumber, b: PadicNumber) -> PadicNumber:
    _check_compatible(a, b)
    eff = min(a.effective_precision, b.effective_precision)
    return PadicNumber(a.p, a.modulus_exponent, (a.mantissa + b.mantissa) % a.modulus, eff)


def padic_mul(a: PadicNumber, b: PadicNumber) -> PadicNumber:
    _check_compatible(a, b)
    eff = min(a.effective_precision, b.effective_precision)
    return PadicNumber(a.p, a.modulus_exponent, (a.mantissa * b.mantissa) % a.modulus, eff)


def padic_div_unit(a: PadicNumber, b: PadicNumber) -> PadicNumber:
    """a / b for a unit b; division by a unit preserves trusted digits."""
    _check_compatible(a, b)
    if not b.is_unit():
        raise PrecisionViolationError(
            f"divisor {b.mantissa} is not a unit (divisible by p={b.p})"
        )
    eff = min(a.effective_precision, b.effective_precision)
    inv = pow(b.mantissa, -1, a.modulus)
    return PadicNumber(a.p, a.modulus_exponent, (a.mantissa * inv) % a.modulus, eff)


def _lift_fiber_root(p: int, mod: int, exponent: int, rhs: int, residue: int) -> int:
    """Newton-lift the root of x^p - x - rhs = 0 (mod p^K) congruent to residue.

    |g'|_p = 1 makes the iteration quadratically convergent: trusted digits
    double per step, so ceil(log2 K) + 2 steps always suffice.
    """
    x = residue
    for _ in range(exponent.bit_length() + 2):
        g = (pow(x, p, mod) - x - rhs) % mod
        if g == 0:
            return x
        gprime = (p * pow(x, p - 1, mod) - 1) % mod
        x = (x - g * pow(gprime, -1, mod)) % mod
    if (pow(x, p, mod) - x - rhs) % mod != 0:
        raise InternalError(
            "Hensel iteration failed to converge despite unit derivative"
        )
    return x


def padic_preimages(beta: PadicNumber) -> list[PadicNumber]:
    """The p fiber roots of (x^p - x)/p = beta, one per residue class mod p.

    Returned in residue order 0, ..., p-1.  Each root r satisfies
    r^p - r - p*beta = 0 to the full working modulus, and inherits beta's
    trusted-digit count.
    """
    if beta.effective_precision < 2:
        raise PrecisionViolationError(
            "preimage target needs at least 2 trusted digits"
        )
    p, K, mod = beta.p, beta.modulus_exponent, beta.modulus
    rhs = (p * beta.mantissa) % mod
    eff = beta.effective_precision
    return [
        PadicNumber(p, K, _lift_fiber_root(p, mod, K, rhs, a), eff)
        for a in range(p)
    ]


def phi_forward(x: PadicNumber) -> PadicNumber:
    """Apply (x^p - x)/p; the exact division by p costs one digit of both
    the working modulus and the trusted-digit count."""
    if x.modulus_exponent < 2 or x.effective_precision < 2:
        raise PrecisionViolationError(
            "applying the map would leave no trusted digits; raise K"
        )
    p, mod = x.p, x.modulus
    y = (pow(x.mantissa, p, mod) - x.mantissa) % mod
    if y % p != 0:
        raise InternalError("x^p - x must be divisible by p")
    return PadicNumber(
        p,
        x.modulus_exponent - 1,
        (y // p) % (mod // p),
        x.effective_precision - 1,
    )


@dataclass(frozen=True)
class PadicOrbit:
    """Depth-n fiber tree below 1: the p^n roots of phi_p^n(x) = 1 in Z/p^K.

    Each leaf is paired with its address, the string of residue choices
    (one base-p digit per level, root level first).  residual_valuations[i]
    is the p-adic valuation of phi_p^n(leaf_i) - 1, capped at the surviving
    modulus exponent K - n.
    """

    p: int
    depth: int
    modulus_exponent: int
    entries: tuple = field(repr=False)
    residual_valuations: tuple = field(repr=False)

    @property
    def surviving_exponent(self) -> int:
        return self.modulus_exponent - self.depth

    @property
    def leaves(self) -> list[PadicNumber]:
        return [x for x, _ in self.entries]

    @property
    def addresses(self) -> list[str]:
        return [a for _, a in self.entries]


def backward_orbit_padic(
    p: int,
    n: int,
    digits: int | None = None,
    *,
    orbit_cap: int = DEFAULT_ORBIT_CAP,
    margin: int = DEFAULT_PRECISION_MARGIN,
) -> PadicOrbit:
    """Breadth-first expansion of the p^n p-adic preimages of 1.

    `digits` is the working modulus exponent K (default 64 + n).  Forward
    verification consumes one digit per level, so K must exceed n by the
    safety margin; asking for less raises a precision error up front.
    """
    if not is_prime(p):
        raise InvalidParameterError(f"p must be prime, got {p!r}")
    if n < 1:
        raise InvalidParameterError("orbit depth n must be >= 1")
    if p ** n > orbit_cap:
        raise ResourceLimitError(f"orbit size p^n = {p**n} exceeds the orbit cap {orbit_cap}")
    K = DEFAULT_BASE_DIGITS + n if digits is None else digits
    if K < n + margin:
        raise PrecisionViolationError(
            f"K = {K} leaves fewer than {margin} trusted digits after {n} "
            f"forward checks; raise K to at least {n + margin}"
        )

    level = [(padic_from_int(p, K, 1), "")]
    for _ in range(n):
        nxt = []
        for value, address in level:
            for a, root in enumerate(padic_preimages(value)):
                nxt.append((root, address + _digit_char(p, a)))
        level = nxt

    level.sort(key=lambda pair: pair[1])

    surviving = K - n
    target = 1 % p ** surviving
    vals = []
    for leaf, _ in level:
        x = leaf
        for _ in range(n):
            x = phi_forward(x)
        residual = (x.mantissa - target) % (p ** surviving)
        vals.append(_valuation(residual, p, surviving))

    return PadicOrbit(p, n, K, tuple(level), tuple(vals))


def _digit_char(p: int, a: int) -> str:
    return str(a) if p <= 10 else f"{a}."


def _valuation(residual: int, p: int, cap: int) -> int:
    if residual == 0:
        return cap
    v = 0
    while residual % p == 0:
        residual //= p
        v += 1
    return v


@dataclass(frozen=True)
class SplittingReport:
    """Outcome of the total-splitting verification (failures are reported,
    never raised)."""

    p: int
    depth: int
    count: int
    expected_count: int
    distinct: bool
    distinctness_exponent: int | None
    max_residual_deficit: int

    @property
    def count_ok(self) -> bool:
        return self.count == self.expected_count

    @property
    def passed(self) -> bool:
        return self.count_ok and self.distinct and self.max_residual_deficit == 0


def verify_total_splitting(orbit: PadicOrbit) -> SplittingReport:
    """Certify that the orbit realizes the full p^n-fold splitting over Z_p.

    Checks the leaf count, pairwise distinctness of mantissas at the
    minimum trusted precision, and that every forward-verified residual
    vanished at the surviving modulus.  distinctness_exponent is the
    smallest m with all leaves distinct mod p^m (None when even the full
    trusted modulus fails to separate them).
    """
    p = orbit.p
    leaves = orbit.leaves
    count = len(leaves)
    expected = p ** orbit.depth

    min_eff = min(x.effective_precision for x in leaves)
    mantissas = [x.mantissa for x in leaves]
    distinct = len(set(m % p ** min_eff for m in mantissas)) == count

    exponent = None
    if distinct:
        lo, hi = 1, min_eff
        while lo < hi:
            mid = (lo + hi) // 2
            if len(set(m % p ** mid for m in mantissas)) == count:
                hi = mid
            else:
                lo = mid + 1
        exponent = lo

    surviving = orbit.surviving_exponent
    deficit = max(surviving - v for v in orbit.residual_valuations)
    return SplittingReport(
        p=p,
        depth=orbit.depth,
        count=count,
        expected_count=expected,
        distinct=distinct,
        distinctness_exponent=exponent,
        max_residual_deficit=max(0, deficit),
    )


def orbit_rows(orbit: PadicOrbit) -> list[tuple[str, str, int]]:
    """CSV-ready rows (address, mantissa-in-base-p, effective_precision)."""
    return [
        (address, leaf.digits(), leaf.effective_precision)
        for leaf, address in orbit.entries
    ]
