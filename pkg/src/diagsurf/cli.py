"""Command line front end.

Subcommands mirror the library: exact cubic densities and their Euler
product, closed-form and search-based local tests, height-ordered empirical
counts, quartic Monte Carlo densities, and the transversality experiment.
JSON goes to stdout (or --out); CSV tables to --csv; progress and timing to
stderr.  Exit codes: 0 success, 2 argument error, 3 internal consistency
failure.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import density, enumeration, quartic, report, sieve
from .cubic import cubic_els, cubic_soluble_at, normalize_cubic
from .density import ConsistencyError


class CliError(Exception):
    """Bad arguments or unusable input; maps to exit code 2."""


def _parse_coeffs(text: str) -> tuple[int, int, int, int]:
    try:
        parts = [int(t) for t in text.split(",")]
    except ValueError as e:
        raise CliError(f"coefficients must be integers: {e}") from None
    if len(parts) != 4:
        raise CliError("need exactly four comma-separated coefficients")
    return (parts[0], parts[1], parts[2], parts[3])


def _require_prime(p: int) -> int:
    if p < 2:
        raise CliError(f"{p} is not prime")
    q = 2
    while q * q <= p:
        if p % q == 0:
            raise CliError(f"{p} is not prime")
        q += 1
    return p


def _cmd_cubic_exact_density(args) -> dict:
    p = _require_prime(args.prime)
    d = density.sigma_p_cubic(p)
    return report.density_report(
        "cubic.exact-density",
        {"prime": p},
        {"sigma_p": report.rational(d.value), "sigma_p_float": d.float_value},
    )


def _cmd_cubic_euler_product(args) -> dict:
    if args.limit < 3:
        raise CliError("--limit must be >= 3")
    rep = density.euler_product_cubic(args.limit)
    return report.density_report(
        "cubic.euler-product",
        {"limit": rep.limit},
        {
            "product": rep.partial_product,
            "n_factors": rep.n_factors,
            "tail_indicator": rep.tail_indicator,
            "crude_tail_bound": rep.crude_tail_bound,
        },
    )


def _cmd_cubic_local_test(args) -> dict:
    p = _require_prime(args.prime)
    a = _parse_coeffs(args.coeffs)
    if any(x == 0 for x in a):
        raise CliError("coefficients must be nonzero for a local test")
    nc = normalize_cubic(a, p)
    return report.density_report(
        "cubic.local-test",
        {"coeffs": list(a), "prime": p},
        {
            "soluble": cubic_soluble_at(a, p),
            "valuation_class": nc.klass.name,
        },
    )


def _cmd_cubic_global_test(args) -> dict:
    a = _parse_coeffs(args.coeffs)
    els, failing = cubic_els(a)
    return report.density_report(
        "cubic.global-test",
        {"coeffs": list(a)},
        {"everywhere_locally_soluble": els, "failing_primes": failing},
    )


def _cmd_cubic_empirical(args) -> dict:
    if args.height < 1:
        raise CliError("--height must be >= 1")
    r = enumeration.empirical_sigma("cubic", args.height, threads=args.threads)
    prediction = density.euler_product_cubic(10**5).partial_product
    return report.density_report(
        "cubic.empirical",
        {"height": r.height},
        {
            "total_points": r.total,
            "soluble_points": r.soluble,
            "cone_points": r.cones,
            "fraction": r.fraction,
            "predicted_limit": prediction,
            "prediction_truncation": 10**5,
        },
    )


def _cmd_quartic_mc_density(args) -> dict:
    p = _require_prime(args.prime)
    if args.samples < 1000:
        raise CliError("--samples must be >= 1000")
    est = quartic.mc_sigma_p_quartic(p, args.samples, args.seed)
    results = {
        "soluble_fraction": est.soluble_fraction,
        "stderr": est.stderr,
        "undecided_fraction": est.undecided_fraction,
        "precision_schedule": est.precision_schedule,
    }
    if est.undecided_fraction >= 1e-4:
        results["degraded"] = True
    return report.density_report(
        "quartic.mc-density",
        {"prime": p, "samples": est.samples},
        results,
        seed=est.seed,
    )


def _cmd_quartic_local_test(args) -> dict:
    p = _require_prime(args.prime)
    a = _parse_coeffs(args.coeffs)
    if any(x == 0 for x in a):
        raise CliError("coefficients must be nonzero for a local test")
    return report.density_report(
        "quartic.local-test",
        {"coeffs": list(a), "prime": p},
        {"soluble": quartic.quartic_soluble_at(a, p)},
    )


def _cmd_quartic_empirical(args) -> dict:
    if args.height < 1:
        raise CliError("--height must be >= 1")
    r = enumeration.empirical_sigma("quartic", args.height, threads=args.threads)
    computed = quartic.sigma_infty_quartic()
    return report.density_report(
        "quartic.empirical",
        {"height": r.height},
        {
            "total_points": r.total,
            "soluble_points": r.soluble,
            "cone_points": r.cones,
            "fraction": r.fraction,
            "sigma_infty_computed": report.rational(computed),
            "sigma_infty_reference": report.rational(quartic.SIGMA_INFTY_REFERENCE),
            "note": (
                "the computed archimedean factor (mixed-sign volume 7/8) and the"
                " reference value 3/4 disagree; both are reported"
            ),
        },
    )


def _cmd_quartic_sigma_infty(args) -> dict:
    computed = quartic.sigma_infty_quartic()
    return report.density_report(
        "quartic.sigma-infty",
        {},
        {
            "computed": report.rational(computed),
            "computed_float": float(computed),
            "reference": report.rational(quartic.SIGMA_INFTY_REFERENCE),
            "reference_float": float(quartic.SIGMA_INFTY_REFERENCE),
            "agrees": computed == quartic.SIGMA_INFTY_REFERENCE,
        },
    )


def _cmd_sieve_transversality(args) -> tuple[dict, str]:
    try:
        heights = tuple(int(t) for t in args.heights.split(","))
    except ValueError as e:
        raise CliError(f"--heights must be integers: {e}") from None
    if args.min_prime < 2:
        raise CliError("--min-prime must be >= 2")
    try:
        f = sieve.parse_form(args.f) if args.f else sieve.COORDINATE_PRODUCT
        g = sieve.parse_form(args.g) if args.g else sieve.COORDINATE_SUM
        config = sieve.SieveConfig(
            min_prime=args.min_prime, f=f, g=g, heights=heights
        )
    except ValueError as e:
        raise CliError(str(e)) from None
    table = sieve.failure_counts(config, threads=args.threads)
    rows_json = [
        {
            "height": r.height,
            "total": r.total,
            "failures": r.failures,
            "fraction": r.fraction,
            "fraction_times_logB": r.fraction_times_log_height,
        }
        for r in table.rows
    ]
    rep = report.density_report(
        "sieve.transversality",
        {
            "heights": list(heights),
            "min_prime": args.min_prime,
            "f": config.f.expr,
            "g": config.g.expr,
        },
        {"rows": rows_json, "fitted_c_over_logB": table.fitted_constant},
    )
    csv_text = report.to_csv(
        ["B", "total", "failures", "fraction", "fraction_times_logB"],
        [
            [r.height, r.total, r.failures, repr(r.fraction), repr(r.fraction_times_log_height)]
            for r in table.rows
        ],
    )
    return rep, csv_text


def _add_common(p: argparse.ArgumentParser, root: bool = False) -> None:
    """Global flags, accepted both before and after the subcommand."""
    d = (lambda v: v) if root else (lambda v: argparse.SUPPRESS)
    p.add_argument("--out", default=d(None), help="write the JSON report here instead of stdout")
    p.add_argument("--csv", default=d(None), help="write the CSV table here (where applicable)")
    p.add_argument("--threads", type=int, default=d(None), help="worker thread cap")
    p.add_argument("--seed", type=int, default=d(0), help="seed for sampling commands")
    p.add_argument(
        "--json",
        action="store_true",
        default=d(True),
        help="emit JSON (default; flag kept for compatibility)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagsurf",
        description="Local solubility densities for diagonal cubic and quartic surfaces",
    )
    _add_common(parser, root=True)
    sub = parser.add_subparsers(dest="family", required=True)

    cubic = sub.add_parser("cubic", help="diagonal cubic surfaces")
    csub = cubic.add_subparsers(dest="command", required=True)
    c = csub.add_parser("exact-density", help="exact sigma_p as a rational")
    _add_common(c)
    c.add_argument("--prime", type=int, required=True)
    c.set_defaults(run=_cmd_cubic_exact_density)
    c = csub.add_parser("euler-product", help="product of sigma_p up to a bound")
    _add_common(c)
    c.add_argument("--limit", type=int, required=True)
    c.set_defaults(run=_cmd_cubic_euler_product)
    c = csub.add_parser("local-test", help="closed-form Q_p solubility test")
    _add_common(c)
    c.add_argument("--coeffs", required=True)
    c.add_argument("--prime", type=int, required=True)
    c.set_defaults(run=_cmd_cubic_local_test)
    c = csub.add_parser("global-test", help="everywhere-locally-soluble test")
    _add_common(c)
    c.add_argument("--coeffs", required=True)
    c.set_defaults(run=_cmd_cubic_global_test)
    c = csub.add_parser("empirical", help="height-ordered empirical density")
    _add_common(c)
    c.add_argument("--height", type=int, required=True)
    c.set_defaults(run=_cmd_cubic_empirical)

    quartic_p = sub.add_parser("quartic", help="diagonal quartic surfaces")
    qsub = quartic_p.add_subparsers(dest="command", required=True)
    q = qsub.add_parser("mc-density", help="Monte Carlo sigma_p estimate")
    _add_common(q)
    q.add_argument("--prime", type=int, required=True)
    q.add_argument("--samples", type=int, required=True)
    q.set_defaults(run=_cmd_quartic_mc_density)
    q = qsub.add_parser("local-test", help="search-based Q_p solubility test")
    _add_common(q)
    q.add_argument("--coeffs", required=True)
    q.add_argument("--prime", type=int, required=True)
    q.set_defaults(run=_cmd_quartic_local_test)
    q = qsub.add_parser("empirical", help="height-ordered empirical density")
    _add_common(q)
    q.add_argument("--height", type=int, required=True)
    q.set_defaults(run=_cmd_quartic_empirical)
    q = qsub.add_parser("sigma-infty", help="archimedean density, both values")
    _add_common(q)
    q.set_defaults(run=_cmd_quartic_sigma_infty)

    sieve_p = sub.add_parser("sieve", help="transversality experiment")
    ssub = sieve_p.add_subparsers(dest="command", required=True)
    s = ssub.add_parser("transversality", help="failure counts without a transverse prime")
    _add_common(s)
    s.add_argument("--heights", required=True, help="comma separated ascending bounds")
    s.add_argument("--min-prime", type=int, required=True)
    s.add_argument("--f", default=None, help="homogeneous form (default X0*X1*X2*X3)")
    s.add_argument("--g", default=None, help="homogeneous form (default X0+X1+X2+X3)")
    s.set_defaults(run=_cmd_sieve_transversality)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        out = args.run(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ConsistencyError as e:
        print(f"internal consistency failure: {e}", file=sys.stderr)
        return 3
    except quartic.UndecidedError as e:
        print(f"aborted: point search left a sample undecided: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if isinstance(out, tuple):
        rep, csv_text = out
    else:
        rep, csv_text = out, None
    text = report.to_json(rep)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if csv_text is not None and args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
    print(f"elapsed {time.monotonic() - t0:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
