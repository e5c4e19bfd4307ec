"""Exact polynomial layer for the maps phi_p(x) = (x^p - x)/p.

Everything here is exact: rational coefficients are `fractions.Fraction`
(always in canonical form, positive denominator), integer coefficients are
Python ints.  The module builds phi_p, its n-fold iterates, and the monic
integer model

    F_n = p^(e_n) * (phi_p^n(x) - 1),   e_n = (p^n - 1)/(p - 1),

whose monic integrality is what makes every finite place drop out of the
height sum for the roots of phi_p^n(x) = 1.

Polynomials are dense, stored low-to-high; F_n is dense, so sparse
structures would buy nothing.  Iterates beyond the degree cap are refused
with a clean error: the exact model is a small-n oracle, the scalable
routes live in the p-adic and complex modules.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt

import gmpy2

from .errors import (
    DEFAULT_COEFF_BIT_CAP,
    DEFAULT_DEGREE_CAP,
    InvalidParameterError,
    ResourceLimitError,
)

#: Exact rational scalar type used throughout the exact layer.
ExactRational = Fraction


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (inputs here are tiny)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    r = isqrt(n)
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def _normalized(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class RationalPoly:
    """Dense univariate polynomial with exact rational coefficients.

    Coefficients are indexed by degree, low to high, with no trailing
    zeros; the zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _normalized([Fraction(c) for c in coeffs])

    @classmethod
    def identity(cls) -> "RationalPoly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise InvalidParameterError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, RationalPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPoly({list(self.coeffs)!r})"

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly(out)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly([-c for c in self.coeffs])

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return RationalPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return RationalPoly(out)

    def scale(self, c) -> "RationalPoly":
        c = Fraction(c)
        return RationalPoly([c * a for a in self.coeffs])

    def __call__(self, x):
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "RationalPoly") -> "RationalPoly":
        """self(inner(x)), by Horner with a polynomial argument."""
        acc = RationalPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + RationalPoly((c,))
        return acc


class IntPoly:
    """Dense univariate polynomial with integer coefficients, low to high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _normalized([int(c) for c in coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)!r})"

    def __call__(self, x):
        if isinstance(x, int):
            acc = 0
        else:
            x = Fraction(x)
            acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_rational(self) -> RationalPoly:
        return RationalPoly(self.coeffs)


# ---------------------------------------------------------------------------
# Fast integer polynomial products (Kronecker substitution)
#
# The coefficients of F_n reach p^(e_n), so the schoolbook double loop is the
# bottleneck long before the big-int multiplies are.  Packing each polynomial
# into a single integer at a byte-aligned stride turns one polynomial product
# into one GMP multiply plus linear (un)packing.
# ---------------------------------------------------------------------------

_SCHOOLBOOK_LIMIT = 32


def _pack(coeffs: list, stride: int) -> int:
    buf = bytearray(len(coeffs) * stride)
    for i, c in enumerate(coeffs):
        if c:
            nbytes = (c.bit_length() + 7) // 8
            off = i * stride
            buf[off:off + nbytes] = c.to_bytes(nbytes, "little")
    return int.from_bytes(buf, "little")


def _unpack(packed: int, stride: int, count: int) -> list:
    buf = packed.to_bytes(count * stride + stride, "little")
    return [
        int.from_bytes(buf[i * stride:(i + 1) * stride], "little")
        for i in range(count)
    ]


def _mul_nonneg(a: list, b: list, stride: int, out_len: int) -> list:
    if not any(a) or not any(b):
        return [0] * out_len
    prod = int(gmpy2.mpz(_pack(a, stride)) * gmpy2.mpz(_pack(b, stride)))
    return _unpack(prod, stride, out_len)


def _int_mul(a: list, b: list) -> list:
    """Product of two signed integer coefficient lists."""
    if not a or not b:
        return []
    out_len = len(a) + len(b) - 1
    if min(len(a), len(b)) <= _SCHOOLBOOK_LIMIT:
        out = [0] * out_len
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    # stride must hold any convolution coefficient of the split parts
    bits = (
        max(abs(c).bit_length() for c in a)
        + max(abs(c).bit_length() for c in b)
        + min(len(a), len(b)).bit_length()
        + 1
    )
    stride = (bits + 7) // 8
    ap = [c if c > 0 else 0 for c in a]
    an = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bn = [-c if c < 0 else 0 for c in b]
    pos = _mul_nonneg(ap, bp, stride, out_len)
    neg = _mul_nonneg(ap, bn, stride, out_len)
    pos2 = _mul_nonneg(an, bn, stride, out_len)
    neg2 = _mul_nonneg(an, bp, stride, out_len)
    return [pos[i] + pos2[i] - neg[i] - neg2[i] for i in range(out_len)]


def _int_pow(a: list, k: int) -> list:
    result = [1]
    base = a
    while k:
        if k & 1:
            result = _int_mul(result, base)
        k >>= 1
        if k:
            base = _int_mul(base, base)
    return result


# ---------------------------------------------------------------------------
# The maps and their models
# ---------------------------------------------------------------------------


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidParameterError(f"p must be a prime >= 2, got {p!r}")


def phi_step_poly(p: int) -> RationalPoly:
    """The degree-p polynomial (x^p - x)/p."""
    _require_prime(p)
    coeffs = [Fraction(0)] * (p + 1)
    coeffs[p] = Fraction(1, p)
    coeffs[1] = Fraction(-1, p)
    return RationalPoly(coeffs)


def iterate_poly(f: RationalPoly, n: int, *, degree_cap: int = DEFAULT_DEGREE_CAP) -> RationalPoly:
    """n-fold composition f(f(...f(x)...)); n = 0 gives the identity x."""
    if not isinstance(n, int) or n < 0:
        raise InvalidParameterError(f"iteration count must be a nonnegative integer, got {n!r}")
    d = f.degree
    if d >= 2:
        projected = 1
        for _ in range(n):
            projected *= d
            if projected > degree_cap:
                raise ResourceLimitError(
                    f"degree {d}^{n} of the iterate exceeds the degree cap {degree_cap}"
                )
    result = RationalPoly.identity()
    for _ in range(n):
        result = f.compose(result)
    return result


def denominator_exponent(p: int, n: int) -> int:
    """e_n = (p^n - 1)/(p - 1), the exact power of p clearing phi_p^n."""
    return (p ** n - 1) // (p - 1)


@lru_cache(maxsize=None)
def _integral_model(p: int, n: int) -> IntPoly:
    # G_k = p^(e_k) * phi_p^k stays integral: G_{k+1} = G_k^p - p^((p-1) e_k) G_k
    g = [0, 1]
    e = 0
    for _ in range(n):
        shift = p ** ((p - 1) * e)
        gp = _int_pow(g, p)
        for i, c in enumerate(g):
            gp[i] -= shift * c
        g = gp
        e = p * e + 1
    g[0] -= p ** e
    return IntPoly(g)


def integral_model(
    p: int,
    n: int,
    *,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    coeff_bit_cap: int = DEFAULT_COEFF_BIT_CAP,
) -> IntPoly:
    """The monic integer polynomial F_n = p^(e_n) (phi_p^n(x) - 1).

    F_n is monic of degree p^n with constant term -p^(e_n) (forced by
    phi_p(0) = 0), so its roots — the depth-n backward orbit of 1 — are
    algebraic integers.
    """
    _require_prime(p)
    if not isinstance(n, int) or n < 1:
        raise InvalidParameterError(f"n must be a positive integer, got {n!r}")
    if p ** n > degree_cap:
        raise ResourceLimitError(f"degree p^n = {p**n} exceeds the degree cap {degree_cap}")
    const_bits = int(denominator_exponent(p, n) * gmpy2.log2(p)) + 1
    if const_bits > coeff_bit_cap:
        raise ResourceLimitError(
            f"constant term needs ~{const_bits} bits, exceeding the coefficient cap "
            f"{coeff_bit_cap} bits"
        )
    return _integral_model(p, n)


def eval_poly(f, x):
    """Exact Horner evaluation of a RationalPoly or IntPoly at a rational x."""
    if isinstance(f, IntPoly) and isinstance(x, int):
        return f(x)
    acc = Fraction(0)
    x = Fraction(x)
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc
