"""Totally p-adic numbers from the dynamics of phi_p(x) = (x^p - x)/p.

The depth-n backward orbit of 1 under phi_p consists of p^n distinct
algebraic numbers that are totally p-adic, with averaged Weil heights
increasing to log(p)/(p-1) — the Arakelov-Zhang pairing of the squaring
map and phi_p.  This package constructs the orbits exactly (rational
polynomial models), p-adically (Hensel fiber trees in Z/p^K), and over C
(arbitrary-precision fiber trees), and cross-checks the height limit
through independent routes.
"""

from .arithmetic import (
    ExactRational,
    IntPoly,
    RationalPoly,
    denominator_exponent,
    eval_poly,
    integral_model,
    is_prime,
    iterate_poly,
    phi_step_poly,
)
from .complexdyn import (
    BOUNDED,
    ESCAPED,
    ComplexOrbit,
    GreenValue,
    backward_orbit_complex,
    escape_radius,
    extend_backward_orbit,
    functional_equation_check,
    green_function,
    in_filled_julia,
    phi_value,
    solve_fiber,
    to_big_complex,
)
from .errors import (
    InternalError,
    InvalidParameterError,
    NumericalFailureError,
    PadicDynError,
    PrecisionViolationError,
    ResourceLimitError,
)
from .heights import (
    HeightReport,
    PreperiodicityResult,
    average_height,
    canonical_height_of_one,
    height_limit,
    height_sequence,
    mahler_measure,
    uniform_bound,
)
from .padic import (
    PadicNumber,
    PadicOrbit,
    SplittingReport,
    backward_orbit_padic,
    padic_add,
    padic_div_unit,
    padic_from_int,
    padic_mul,
    padic_preimages,
    phi_forward,
    verify_total_splitting,
)
from .pairing import (
    MeasureSample,
    PairingReport,
    az_decomposition_estimate,
    az_pullback_estimate,
    circle_average_green,
    orbit_sample,
    potential_consistency,
    unit_circle_sample,
)

__version__ = "0.1.0"
