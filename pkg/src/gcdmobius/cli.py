"""Command line front end.

Subcommands: sum, scan, meansquare, check, constants. File artifacts (CSV or
JSON) are byte-identical across runs for the same arguments at --threads 1;
the sum subcommand reports wall time, which naturally varies.

Exit codes: 0 ok, 2 bad configuration or usage, 3 argument outside supported
range, 4 broken internal invariant (including check-suite failures).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import mpmath as mp
import numpy as np

from . import analysis, constants, divisor, sieve, summatory
from .errors import ConfigError, InvariantError, RangeError

DIGITS_ENV = "GCDMOBIUS_DIGITS"
_CHECK_SEED = 1729


def _env_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return constants.DEFAULT_DIGITS
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcdmobius",
        description="Exact summatory functions of the Mobius function over gcds.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help=f"working precision in decimal digits (default {DIGITS_ENV} or "
                             f"{constants.DEFAULT_DIGITS})")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for the exact integer stages (default 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sum = sub.add_parser("sum", parents=[common],
                           help="summatory value, main term, and error at one point")
    p_sum.add_argument("--g", choices=["mu", "absmu"], default="mu")
    p_sum.add_argument("--x", type=float, required=True)

    p_scan = sub.add_parser("scan", parents=[common],
                            help="error-term scan over a logarithmic grid")
    p_scan.add_argument("--from", dest="x_min", type=float, required=True)
    p_scan.add_argument("--to", dest="x_max", type=float, required=True)
    p_scan.add_argument("--per-decade", dest="per_decade", type=int, default=20)
    p_scan.add_argument("--out", required=True)
    p_scan.add_argument("--format", choices=["csv", "json"], default="csv")

    p_ms = sub.add_parser("meansquare", parents=[common],
                          help="cumulative mean square of the error term")
    p_ms.add_argument("--T", dest="t_value", type=float, required=True)
    p_ms.add_argument("--out", required=True)
    p_ms.add_argument("--format", choices=["csv", "json"], default="csv")

    p_check = sub.add_parser("check", parents=[common],
                             help="run the internal cross-check suites")
    p_check.add_argument("--max-x", dest="max_x", type=int, default=5000)

    sub.add_parser("constants", parents=[common],
                   help="print the analytic constant bundle")
    return parser


def _resolve_digits(args) -> int:
    digits = args.digits if args.digits is not None else _env_digits()
    if not constants.DIGITS_MIN <= digits <= constants.DIGITS_MAX:
        raise ConfigError(
            f"digits must lie in [{constants.DIGITS_MIN}, {constants.DIGITS_MAX}], got {digits}")
    if args.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {args.threads}")
    return digits


def _round12(v: float) -> float:
    return float(f"{float(v):.12g}")


def _jsonable(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    if isinstance(v, float):
        return _round12(v)
    return v


def _write_json_rows(rows, path) -> None:
    payload = [{k: _jsonable(v) for k, v in row.items()} for row in rows]
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, allow_nan=False)
        fh.write("\n")


def _cmd_sum(args) -> int:
    digits = _resolve_digits(args)
    bundle = constants.get_default_bundle(digits)
    runner = (summatory.fast_mu_summatory if args.g == "mu"
              else summatory.fast_abs_mu_summatory)
    t0 = time.perf_counter()
    if args.g == "mu":
        res = runner(args.x, constants=bundle, threads=args.threads)
    else:
        res = runner(args.x, constants=bundle)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    out = {
        "x": float(args.x),
        "S": int(res.s_value),
        "M": _round12(res.main_term),
        "E": _round12(res.error),
        "method": res.method.value,
        "wall_ms": round(wall_ms, 3),
    }
    print(json.dumps(out))
    return 0


def _cmd_scan(args) -> int:
    digits = _resolve_digits(args)
    bundle = constants.get_default_bundle(digits)
    grid = analysis.GridSpec(args.x_min, args.x_max, args.per_decade)
    scan = analysis.scan_errors(grid, constants=bundle, threads=args.threads)
    if args.format == "csv":
        analysis.write_scan_csv(scan, args.out)
    else:
        _write_json_rows(analysis.scan_rows(scan), args.out)
    print(f"wrote {len(scan.points)} rows -> {args.out}")
    return 0


def _cmd_meansquare(args) -> int:
    digits = _resolve_digits(args)
    bundle = constants.get_default_bundle(digits)
    res = analysis.mean_square(args.t_value, constants=bundle)
    if args.format == "csv":
        analysis.write_meansquare_csv(res, args.out)
    else:
        _write_json_rows(analysis.meansquare_rows(res), args.out)
    print(f"wrote {len(res.samples)} rows -> {args.out} "
          f"(I={_round12(res.integral)}, intervals={res.interval_count})")
    return 0


def _cmd_constants(args) -> int:
    digits = _resolve_digits(args)
    bundle = constants.get_default_bundle(digits)
    with mp.workdps(digits + 10):
        out = {
            name: mp.nstr(getattr(bundle, name), digits)
            for name in ("gamma", "zeta2", "zeta4", "zeta2_prime", "zeta4_prime",
                         "inv_zeta2_sq", "b_series_limit", "mu_shift", "sqfree_shift")
        }
    out["precision_digits"] = bundle.precision_digits
    print(json.dumps(out, indent=2))
    return 0


# ---------------------------------------------------------------------------
# check suites: each returns (ok, detail) and must stay cheap enough to run
# on every invocation

def _suite_sieve_tables(rng) -> tuple:
    limit = 20000
    ss = sieve.build_sieve_set(limit)
    direct = sieve.mu_star_mu_closed_form(limit)
    conv = sieve.dirichlet_convolve(ss.mobius, ss.mobius)
    if not np.array_equal(direct.values, conv.values):
        return False, "mu*mu closed form disagrees with direct convolution"
    unit = sieve.dirichlet_convolve(ss.mobius, sieve.sieve_ones(limit))
    expected = np.zeros(limit + 1, dtype=np.int32)
    expected[1] = 1
    if not np.array_equal(unit.values, expected):
        return False, "sum of mu over divisors is not the unit function"
    if not np.array_equal(ss.mu_squared.values, ss.mobius.values.astype(np.int64) ** 2):
        return False, "mu^2 table is not the square of the mu table"
    return True, f"limit={limit}"


def _suite_divisor_oracle(rng) -> tuple:
    for x in range(1, 2001):
        naive = divisor.divisor_sum_naive(x)
        hyper = divisor.divisor_sum_hyperbola(x)
        if naive != hyper:
            return False, f"naive {naive} != hyperbola {hyper} at x={x}"
    for _ in range(50):
        x = rng.randint(10 ** 5, 10 ** 7)
        if divisor.divisor_sum_naive(x) != divisor.divisor_sum_hyperbola(x):
            return False, f"naive != hyperbola at x={x}"
    ss = sieve.build_sieve_set(5000)
    for _ in range(200):
        x = rng.randint(2, 5000)
        step = divisor.divisor_sum_hyperbola(x) - divisor.divisor_sum_hyperbola(x - 1)
        if step != int(ss.tau.values[x]):
            return False, f"D(x) - D(x-1) != tau(x) at x={x}"
    return True, "exhaustive to 2000, 50 random to 1e7, telescoping"


def _suite_gcd_term_identity(rng) -> tuple:
    small = sieve.build_sieve_set(2000, extra_tau=(3,))
    for g in (summatory.GKind.MU, summatory.GKind.ABS_MU):
        for n in range(1, 1001):
            a = summatory.tuple_gcd_term(g, 2, n)
            b = summatory.tuple_gcd_term_identity(g, 2, n, small)
            if a != b:
                return False, f"k=2 g={g.value} mismatch at n={n}: {a} != {b}"
        for n in range(1, 201):
            a = summatory.tuple_gcd_term(g, 3, n)
            b = summatory.tuple_gcd_term_identity(g, 3, n, small)
            if a != b:
                return False, f"k=3 g={g.value} mismatch at n={n}: {a} != {b}"
    return True, "k=2 to n=1000, k=3 to n=200, both weights"


def _suite_summatory_oracle(rng, max_x: int, bundle) -> tuple:
    tab = sieve.build_sieve_set(max(64, summatory.isqrt(max_x) + 1))
    for g in (summatory.GKind.MU, summatory.GKind.ABS_MU):
        prefix = summatory.brute_summatory_prefix(g, max_x)
        fast = (summatory.fast_mu_summatory if g is summatory.GKind.MU
                else summatory.fast_abs_mu_summatory)
        for x in range(1, max_x + 1):
            got = fast(x, tables=tab, constants=bundle).s_value
            if got != int(prefix[x]):
                return False, f"g={g.value} fast {got} != brute {int(prefix[x])} at x={x}"
    big = sieve.build_sieve_set(1000)
    for _ in range(5):
        x = rng.randint(10 ** 3, 10 ** 5)
        y = summatory.isqrt(x)
        pair = summatory.mu_mu_partial_sums(y, big)
        with mp.workdps(bundle.precision_digits + 10):
            lead = float(x * (mp.log(x) + 2 * bundle.gamma - 1))
        recon = lead * pair.a_value - 2 * x * pair.b_value + \
            summatory.delta_weighted_sum(x, y, big, bundle)
        truth = summatory.fast_mu_summatory(x, tables=big, constants=bundle).s_value
        if abs(recon - truth) > 1e-6 * max(abs(truth), 1.0):
            return False, f"decomposition off at x={x}: {recon} vs {truth}"
    return True, f"fast == brute to x={max_x} (both weights), decomposition spot checks"


def _suite_constants_bundle(bundle) -> tuple:
    digits = bundle.precision_digits
    with mp.workdps(digits + 10):
        tol = mp.mpf(10) ** (-(digits - 2))
        if abs(bundle.zeta2 - mp.pi ** 2 / 6) > tol * bundle.zeta2:
            return False, "zeta(2) disagrees with pi^2/6"
        if abs(bundle.zeta4 - mp.pi ** 4 / 90) > tol * bundle.zeta4:
            return False, "zeta(4) disagrees with pi^4/90"
        shift = 2 * bundle.gamma - 1 - 4 * bundle.zeta2_prime / bundle.zeta2
        if abs(shift - bundle.mu_shift) > tol:
            return False, "mu_shift fails its defining relation"
        if not (bundle.zeta2_prime < 0 and bundle.zeta4_prime < 0):
            return False, "zeta derivative signs are wrong"
    return True, f"digits={digits}"


def _cmd_check(args) -> int:
    import random

    digits = _resolve_digits(args)
    if not 10 <= args.max_x <= 10 ** 5:
        raise ConfigError(f"--max-x must lie in [10, 100000], got {args.max_x}")
    bundle = constants.get_default_bundle(digits)
    rng = random.Random(_CHECK_SEED)
    suites = [
        ("sieve-tables", lambda: _suite_sieve_tables(rng)),
        ("divisor-oracle", lambda: _suite_divisor_oracle(rng)),
        ("gcd-term-identity", lambda: _suite_gcd_term_identity(rng)),
        ("summatory-oracle", lambda: _suite_summatory_oracle(rng, args.max_x, bundle)),
        ("constants-bundle", lambda: _suite_constants_bundle(bundle)),
    ]
    failures = 0
    for name, run in suites:
        ok, detail = run()
        tag = "PASS" if ok else "FAIL"
        print(f"[{tag}] {name}: {detail}")
        if not ok:
            failures += 1
    return 0 if failures == 0 else 4


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "sum": _cmd_sum,
        "scan": _cmd_scan,
        "meansquare": _cmd_meansquare,
        "check": _cmd_check,
        "constants": _cmd_constants,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RangeError as exc:
        print(f"range error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
