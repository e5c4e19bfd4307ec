"""Command-line front end: every computation as a reproducible experiment.

Each subcommand validates its configuration, runs one library operation,
and emits a machine-readable report (JSON, CSV, or an aligned table) on
stdout or into --output.  Reports echo the parsed configuration back for
provenance, and --no-timing strips elapsed fields so that identical
configurations produce byte-identical output.

Exit status: 0 success; 2 invalid configuration (bad parameters or a
documented cap exceeded); 3 numerical or precision failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from .arithmetic import integral_model, is_prime
from .complexdyn import backward_orbit_complex, green_function, to_big_complex
from .errors import (
    DEFAULT_COEFF_BIT_CAP,
    DEFAULT_DEGREE_CAP,
    DEFAULT_MANTISSA_BITS,
    DEFAULT_ORBIT_CAP,
    InternalError,
    InvalidParameterError,
    NumericalFailureError,
    PadicDynError,
    PrecisionViolationError,
    ResourceLimitError,
)
from .heights import height_sequence
from .padic import backward_orbit_padic, orbit_rows, verify_total_splitting
from .pairing import az_decomposition_estimate, az_pullback_estimate

BITS_ENV_VAR = "PADICDYN_BITS"

HEIGHTS_CSV_HEADER = "n,avg_height,bound,limit,abs_error"
PADIC_CSV_HEADER = "address,mantissa_base_p,effective_precision"
ORBIT_CSV_HEADER = "address,re,im,residual"
MODEL_CSV_HEADER = "degree,coefficient"


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameterError(f"not an exact rational: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicdyn",
        description=(
            "Backward-orbit heights, p-adic splitting certificates, escape "
            "rates, and Arakelov-Zhang pairing estimates for (x^p - x)/p."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, base_point_help=None):
        sp.add_argument("--p", type=_positive_int, required=True, help="the prime p")
        sp.add_argument(
            "--bits",
            type=_positive_int,
            default=None,
            help=f"mantissa bits (default {DEFAULT_MANTISSA_BITS}, or ${BITS_ENV_VAR})",
        )
        sp.add_argument("--format", choices=("json", "csv", "table"), default="table")
        sp.add_argument("--output", default=None, help="write the report to this path")
        sp.add_argument("--no-timing", action="store_true", help="omit elapsed fields")
        sp.add_argument(
            "--threads",
            type=_positive_int,
            default=None,
            help="cap worker threads (execution is deterministic regardless)",
        )
        sp.add_argument("--orbit-cap", type=_positive_int, default=DEFAULT_ORBIT_CAP)
        if base_point_help:
            sp.add_argument("--base-re", type=_rational, default=None, help=base_point_help)
            sp.add_argument("--base-im", type=_rational, default=None, help=base_point_help)

    sp = sub.add_parser("heights", help="averaged heights of the roots of phi_p^n(x) = 1")
    common(sp)
    sp.add_argument("--n-max", type=_positive_int, required=True, help="deepest level n")

    sp = sub.add_parser("padic", help="p-adic backward orbit and splitting certificate")
    common(sp)
    sp.add_argument("--n", type=_positive_int, required=True, help="orbit depth")
    sp.add_argument("--digits", type=_positive_int, default=None, help="working base-p digits K")

    sp = sub.add_parser("orbit", help="complex backward-orbit leaves for external plotting")
    common(sp, base_point_help="orbit target (exact rational component, default 1)")
    sp.add_argument("--n", type=_positive_int, required=True, help="orbit depth")

    sp = sub.add_parser("green", help="escape rate (canonical local height) at one point")
    common(sp, base_point_help="evaluation point component (exact rational)")

    sp = sub.add_parser("pairing", help="Arakelov-Zhang pairing estimate")
    common(sp, base_point_help="pullback base point component (exact rational)")
    sp.add_argument("--method", choices=("pullback", "decomposition"), default="pullback")
    sp.add_argument("--n", type=_positive_int, default=8, help="pullback orbit depth")
    sp.add_argument("--samples", type=_positive_int, default=64, help="unit-circle sample count")

    sp = sub.add_parser("model", help="coefficients of the monic integer model F_n")
    common(sp)
    sp.add_argument("--n", type=_positive_int, required=True, help="iterate index")
    sp.add_argument("--degree-cap", type=_positive_int, default=DEFAULT_DEGREE_CAP)
    sp.add_argument("--coeff-bit-cap", type=_positive_int, default=DEFAULT_COEFF_BIT_CAP)

    return parser


def _resolve_bits(args) -> int:
    if args.bits is not None:
        return args.bits
    env = os.environ.get(BITS_ENV_VAR)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidParameterError(f"${BITS_ENV_VAR} must be an integer, got {env!r}") from exc
    return DEFAULT_MANTISSA_BITS


def _config_echo(args, bits: int) -> dict:
    config = {"command": args.command, "p": args.p, "bits": bits, "format": args.format}
    for key in ("n", "n_max", "digits", "samples", "method", "threads", "orbit_cap"):
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    for key in ("base_re", "base_im"):
        value = getattr(args, key, None)
        if value is not None:
            config[key] = str(value)
    return config


def _base_point(args, default=(Fraction(1), Fraction(0))):
    """Point from --base-re/--base-im; a missing component is 0.  With
    neither flag the subcommand default applies (None = the library's own
    generic default, e.g. the pullback base point)."""
    if args.base_re is None and args.base_im is None:
        return default
    re = args.base_re if args.base_re is not None else Fraction(0)
    im = args.base_im if args.base_im is not None else Fraction(0)
    return (re, im)


def _require_prime_arg(p: int) -> None:
    if not is_prime(p):
        raise InvalidParameterError(f"--p must be prime, got {p}")


# --- subcommand runners, each returning (payload dict, csv lines, table lines)


def _run_heights(args, bits, config, timing):
    reports = height_sequence(args.p, args.n_max, bits, orbit_cap=args.orbit_cap)
    payload_reports = []
    csv_lines = [HEIGHTS_CSV_HEADER]
    table = [f"{'n':>3} {'avg_height':>20} {'bound':>12} {'limit':>12} {'abs_error':>12}"]
    for r in reports:
        item = {
            "p": r.p,
            "n": r.n,
            "count": r.root_count,
            "avg_height": r.avg_height,
            "bound": r.bound,
            "limit": r.limit,
            "max_residual": r.max_residual,
            "integral_certificate": r.integral_certificate,
            "padic_certificate": r.padic_certificate,
        }
        if timing:
            item["elapsed_ms"] = r.elapsed_ms
        payload_reports.append(item)
        err = abs(r.avg_height - r.limit)
        csv_lines.append(f"{r.n},{r.avg_height!r},{r.bound!r},{r.limit!r},{err!r}")
        table.append(
            f"{r.n:>3} {r.avg_height:>20.15f} {r.bound:>12.8f} {r.limit:>12.8f} {err:>12.3e}"
        )
    return {"config": config, "reports": payload_reports}, csv_lines, table


def _run_padic(args, bits, config, timing):
    t0 = time.perf_counter()
    orbit = backward_orbit_padic(args.p, args.n, args.digits, orbit_cap=args.orbit_cap)
    report = verify_total_splitting(orbit)
    elapsed = int((time.perf_counter() - t0) * 1000)
    payload = {
        "config": config,
        "count": report.count,
        "expected_count": report.expected_count,
        "distinct": report.distinct,
        "distinctness_modulus_exponent": report.distinctness_exponent,
        "max_residual_deficit": report.max_residual_deficit,
        "surviving_digits": orbit.surviving_exponent,
        "passed": report.passed,
    }
    if timing:
        payload["elapsed_ms"] = elapsed
    csv_lines = [PADIC_CSV_HEADER]
    csv_lines += [f"{addr},{digits},{eff}" for addr, digits, eff in orbit_rows(orbit)]
    table = [
        f"p = {args.p}, depth n = {args.n}, working digits K = {orbit.modulus_exponent}",
        f"leaves: {report.count} (expected {report.expected_count})",
        f"pairwise distinct: {report.distinct} "
        f"(separated mod {args.p}^{report.distinctness_exponent})",
        f"forward residual deficit: {report.max_residual_deficit} "
        f"(all leaves return to 1 at {orbit.surviving_exponent} digits)",
        f"certificate: {'PASS' if report.passed else 'FAIL'}",
    ]
    return payload, csv_lines, table


def _run_orbit(args, bits, config, timing):
    target = _base_point(args)
    t0 = time.perf_counter()
    orbit = backward_orbit_complex(args.p, args.n, target, bits, orbit_cap=args.orbit_cap)
    elapsed = int((time.perf_counter() - t0) * 1000)
    leaves = [
        {"address": addr, "re": str(z.real), "im": str(z.imag), "residual": str(res)}
        for (z, addr), res in zip(orbit.entries, orbit.residuals)
    ]
    payload = {
        "config": config,
        "count": len(leaves),
        "max_residual": float(orbit.max_residual),
        "leaves": leaves,
    }
    if timing:
        payload["elapsed_ms"] = elapsed
    csv_lines = [ORBIT_CSV_HEADER]
    csv_lines += [f"{d['address']},{d['re']},{d['im']},{d['residual']}" for d in leaves]
    table = [f"{len(leaves)} leaves, max residual {float(orbit.max_residual):.3e}"]
    table += [f"  {d['address']}  {d['re']}  {d['im']}" for d in leaves[:32]]
    if len(leaves) > 32:
        table.append(f"  ... {len(leaves) - 32} more (use --format csv for all)")
    return payload, csv_lines, table


def _run_green(args, bits, config, timing):
    point = _base_point(args)
    t0 = time.perf_counter()
    g = green_function(to_big_complex(point, bits), args.p, bits)
    elapsed = int((time.perf_counter() - t0) * 1000)
    payload = {
        "config": config,
        "value": float(g.value),
        "status": g.status,
        "iterations_used": g.iterations_used,
        "tail_bound": float(g.tail_bound),
    }
    if timing:
        payload["elapsed_ms"] = elapsed
    csv_lines = ["value,status,iterations_used,tail_bound"]
    csv_lines.append(f"{float(g.value)!r},{g.status},{g.iterations_used},{float(g.tail_bound)!r}")
    table = [
        f"G({point[0]} + {point[1]} i) = {float(g.value)!r}",
        f"status: {g.status} after {g.iterations_used} iterations",
        f"truncation bound: {float(g.tail_bound):.3e}",
    ]
    return payload, csv_lines, table


def _run_pairing(args, bits, config, timing):
    t0 = time.perf_counter()
    if args.method == "pullback":
        report = az_pullback_estimate(
            args.p, args.n, _base_point(args, default=None), bits, orbit_cap=args.orbit_cap
        )
    else:
        report = az_decomposition_estimate(args.p, args.samples, bits)
    elapsed = int((time.perf_counter() - t0) * 1000)
    payload = {
        "config": config,
        "p": report.p,
        "method": report.method,
        "estimate": report.estimate,
        "target": report.target,
        "abs_error": report.abs_error,
        "parameters": report.parameters,
        "certificates": report.certificates,
    }
    if timing:
        payload["elapsed_ms"] = elapsed
    csv_lines = ["method,estimate,target,abs_error"]
    csv_lines.append(f"{report.method},{report.estimate!r},{report.target!r},{report.abs_error!r}")
    table = [
        f"<squaring, phi_{report.p}> ~ {report.estimate!r}  ({report.method})",
        f"target log(p)/(p-1) = {report.target!r}",
        f"absolute error: {report.abs_error:.3e}",
    ]
    return payload, csv_lines, table


def _run_model(args, bits, config, timing):
    t0 = time.perf_counter()
    f = integral_model(args.p, args.n, degree_cap=args.degree_cap, coeff_bit_cap=args.coeff_bit_cap)
    elapsed = int((time.perf_counter() - t0) * 1000)
    payload = {
        "config": config,
        "p": args.p,
        "n": args.n,
        "degree": f.degree,
        "coefficients": list(f.coeffs),
    }
    if timing:
        payload["elapsed_ms"] = elapsed
    csv_lines = [MODEL_CSV_HEADER]
    csv_lines += [f"{k},{c}" for k, c in enumerate(f.coeffs)]
    table = [f"F_{args.n} for p = {args.p}: degree {f.degree}, monic = {f.is_monic}"]
    table += [f"  x^{k}: {c}" for k, c in enumerate(f.coeffs)]
    return payload, csv_lines, table


_RUNNERS = {
    "heights": _run_heights,
    "padic": _run_padic,
    "orbit": _run_orbit,
    "green": _run_green,
    "pairing": _run_pairing,
    "model": _run_model,
}


def _emit(args, payload: dict, csv_lines: list, table_lines: list) -> None:
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        comments = [f"# {k}={v}" for k, v in sorted(payload["config"].items())]
        text = "\n".join(comments + csv_lines) + "\n"
    else:
        text = "\n".join(table_lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _require_prime_arg(args.p)
        bits = _resolve_bits(args)
        config = _config_echo(args, bits)
        payload, csv_lines, table_lines = _RUNNERS[args.command](
            args, bits, config, timing=not args.no_timing
        )
        _emit(args, payload, csv_lines, table_lines)
        return 0
    except (InvalidParameterError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PrecisionViolationError, NumericalFailureError, InternalError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 3
    except PadicDynError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
