"""Global views of the error term: scans, mean squares, series checks, fits.

The mean-square integral of the error E(t) = S_mu(floor(t)) - c*t*(ln t + K)
is evaluated in closed form. On [n, n+1) the sum is frozen at S_n, so with
P(t) = integral of t(ln t + K) and Q(t) = integral of t^2 ( In t + K)^2,

    integral of E^2 over [a, b) = S_n^2 (b-a) - 2 S_n c (P(b)-P(a)) + c^2 (Q(b)-Q(a)),

using the fixed antiderivatives

    int t ln t dt     = t^2/2 ln t - t^2/4
    int t^2 ln t dt   = t^3/3 ln t - t^3/9
    int t^2 ln^2 t dt = t^3/3 ln^2 t - (2/9) t^3 ln t + (2/27) t^3.

The three pieces cancel down to E^2, shedding up to 8 leading digits near
t = 10^6, so the interval algebra runs in extended (80-bit) precision; the
surviving contributions are nonnegative, which keeps their accumulation
well-conditioned at any length.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .constants import ConstantBundle, compute_zeta, get_default_bundle
from .errors import ConfigError, RangeError
from .intmath import isqrt
from .sieve import SieveSet, build_sieve_set
from .summatory import FAST_CAP, _fast_mu_svalue, _mu_main_term_hp, mu_gcd_term_table

__all__ = [
    "SCAN_CAP",
    "MEAN_SQUARE_CAP",
    "GridSpec",
    "ScanPoint",
    "ErrorScan",
    "MeanSquareResult",
    "scan_errors",
    "mean_square",
    "dirichlet_series_check",
    "fit_exponent",
    "write_scan_csv",
    "write_meansquare_csv",
    "scan_rows",
    "meansquare_rows",
]

SCAN_CAP = 10 ** 12
MEAN_SQUARE_CAP = 10 ** 7
SERIES_CAP = 10 ** 6

_LD = np.longdouble


@dataclass(frozen=True)
class GridSpec:
    """Logarithmic evaluation grid; scans sample at floor(10^e) + 1/2."""

    x_min: float
    x_max: float
    points_per_decade: int

    def __post_init__(self):
        if not (self.x_min > 0 and self.x_max > 0 and self.x_min <= self.x_max):
            raise ConfigError("grid bounds must be positive and ordered")
        if not 1 <= self.points_per_decade <= 200:
            raise ConfigError("points_per_decade must lie in [1, 200]")
        if self.x_max > SCAN_CAP:
            raise RangeError(f"scan grids support x_max <= {SCAN_CAP}")


@dataclass(frozen=True)
class ScanPoint:
    x: float
    e: float
    ratio_sqrt: float
    ratio_quarter: float


@dataclass(frozen=True)
class ErrorScan:
    grid: GridSpec
    points: list


@dataclass(frozen=True)
class MeanSquareResult:
    t_value: float
    integral: float
    interval_count: int
    fitted_exponent: float
    samples: list = field(default_factory=list)


def scan_errors(grid: GridSpec, tables: SieveSet | None = None,
                constants: ConstantBundle | None = None, threads: int = 1) -> ErrorScan:
    """E_mu at half-integers above a log-spaced integer grid, with the
    normalizations e / (sqrt(x) ln^2 x) and e / x^(1/4).

    The exact integer stage optionally fans out across threads; the
    high-precision main-term stage stays serial (the precision context is
    process-global), so results are identical at any thread count.
    """
    lo = math.log10(grid.x_min)
    hi = math.log10(grid.x_max)
    npts = int(round((hi - lo) * grid.points_per_decade)) + 1
    xs = np.unique(np.floor(10.0 ** np.linspace(lo, hi, npts)).astype(np.int64))
    xs = xs[xs >= 1]
    if tables is None:
        tables = build_sieve_set(max(isqrt(int(xs[-1])), 1))
    c = constants if constants is not None else get_default_bundle()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            svals = list(pool.map(lambda X: _fast_mu_svalue(int(X), tables), xs))
    else:
        svals = [_fast_mu_svalue(int(X), tables) for X in xs]
    points = []
    with mp.workdps(c.precision_digits + 10):
        for X, s in zip(xs, svals):
            xh = float(X) + 0.5
            e = float(s - _mu_main_term_hp(xh, c))
            points.append(ScanPoint(
                x=xh,
                e=e,
                ratio_sqrt=e / (math.sqrt(xh) * math.log(xh) ** 2),
                ratio_quarter=e / xh ** 0.25,
            ))
    return ErrorScan(grid=grid, points=points)


def _p_antideriv(t, k):
    # integral of t (ln t + k): t^2/2 ln t - t^2/4 + k t^2/2
    t2 = t * t
    return t2 / 2 * np.log(t) - t2 / 4 + k * t2 / 2


def _q_antideriv(t, k):
    # integral of t^2 (ln t + k)^2, assembled from the fixed antiderivative set
    t3 = t * t * t
    ln = np.log(t)
    base = t3 / 3 * ln * ln - _LD(2) / 9 * t3 * ln + _LD(2) / 27 * t3
    mid = t3 / 3 * ln - t3 / 9
    return base + 2 * k * mid + k * k * t3 / 3


def _interval_integral(s_n: int, a, b, c_ld, k_ld):
    """Closed-form integral of E^2 over [a, b) with S frozen at s_n."""
    a = _LD(a)
    b = _LD(b)
    s0 = _LD(s_n)
    dp = _p_antideriv(b, k_ld) - _p_antideriv(a, k_ld)
    dq = _q_antideriv(b, k_ld) - _q_antideriv(a, k_ld)
    return s0 * s0 * (b - a) - 2 * s0 * c_ld * dp + c_ld * c_ld * dq


def _to_longdouble(v: mp.mpf):
    return _LD(mp.nstr(v, 27))


def mean_square(T, tables: SieveSet | None = None,
                constants: ConstantBundle | None = None) -> MeanSquareResult:
    """I(T) = integral of E_mu^2 over [1, T], exactly in structure.

    Cumulative values at each power of ten are kept as samples; the fitted
    exponent is the log-log slope over those samples (nan below 3 samples).
    """
    if T < 2:
        raise RangeError("mean_square requires T >= 2")
    if T > MEAN_SQUARE_CAP:
        raise RangeError(f"mean_square supports T <= {MEAN_SQUARE_CAP}")
    K = math.floor(T)
    if tables is None:
        tables = build_sieve_set(max(K, 2))
    c = constants if constants is not None else get_default_bundle()
    prefix = np.cumsum(mu_gcd_term_table(K, tables))  # prefix[n] = S(n)
    c_ld = _to_longdouble(c.inv_zeta2_sq)
    k_ld = _to_longdouble(c.mu_shift)

    whole = K - 1  # intervals [n, n+1) for n = 1 .. K-1
    contribs = np.empty(whole + 1, dtype=_LD)
    chunk = 1 << 17
    for start in range(1, K, chunk):
        stop = min(start + chunk, K)
        edges = np.arange(start, stop + 1, dtype=_LD)  # one-element overlap
        dp = np.diff(_p_antideriv(edges, k_ld))
        dq = np.diff(_q_antideriv(edges, k_ld))
        s0 = prefix[start:stop].astype(_LD)
        block = s0 * s0 - 2 * c_ld * s0 * dp + c_ld * c_ld * dq
        contribs[start:stop] = block
    contribs[0] = 0
    # the integrand is a square; sub-roundoff negatives are noise, not signal
    np.maximum(contribs, _LD(0), out=contribs)
    cum = np.cumsum(contribs)

    total = cum[whole]
    interval_count = whole
    if T > K:
        last = _interval_integral(int(prefix[K]), K, T, c_ld, k_ld)
        total = total + max(last, _LD(0))
        interval_count += 1

    samples = []
    tc = 10
    while tc <= K:
        samples.append((float(tc), float(cum[tc - 1])))
        tc *= 10
    if not samples or samples[-1][0] != float(T):
        samples.append((float(T), float(total)))
    fexp = fit_exponent(samples) if len(samples) >= 3 else float("nan")
    return MeanSquareResult(
        t_value=float(T),
        integral=float(total),
        interval_count=interval_count,
        fitted_exponent=fexp,
        samples=samples,
    )


def dirichlet_series_check(s, N: int, tables: SieveSet | None = None,
                           constants: ConstantBundle | None = None):
    """Truncated sum of t_mu(n)/n^s against zeta(s)^2 / zeta(2s)^2.

    Returns (lhs, rhs, diff). The left side goes through the identity-route
    term table; the right side through the Euler-Maclaurin backend.
    """
    if s < 1.5:
        raise RangeError("dirichlet_series_check requires s >= 1.5; the tail dominates below")
    N = int(N)
    if not 1 <= N <= SERIES_CAP:
        raise RangeError(f"dirichlet_series_check supports 1 <= N <= {SERIES_CAP}")
    c = constants if constants is not None else get_default_bundle()
    ft = mu_gcd_term_table(N, tables)
    ns = np.arange(1, N + 1, dtype=np.float64)
    lhs = math.fsum(ft[1:].astype(np.float64) * ns ** (-float(s)))
    digits = c.precision_digits
    with mp.workdps(digits + 10):
        rhs = float(compute_zeta(s, digits) ** 2 / compute_zeta(2 * s, digits) ** 2)
    return lhs, rhs, lhs - rhs


def fit_exponent(samples) -> float:
    """Least-squares slope of ln v against ln t over (t, v) samples."""
    pts = list(samples)
    if len(pts) < 3:
        raise ConfigError("fit_exponent needs at least 3 samples")
    ts = np.array([p[0] for p in pts], dtype=np.float64)
    vs = np.array([p[1] for p in pts], dtype=np.float64)
    if not np.all(np.diff(ts) > 0):
        raise ConfigError("fit_exponent requires strictly increasing t")
    if not np.all(vs > 0):
        raise ConfigError("fit_exponent requires positive values")
    slope = np.polyfit(np.log(ts), np.log(vs), 1)[0]
    return float(slope)


def _fmt12(v) -> str:
    return f"{float(v):.12g}"


def scan_rows(scan: ErrorScan) -> list:
    return [
        {"x": p.x, "e": p.e, "ratio_sqrt": p.ratio_sqrt, "ratio_quarter": p.ratio_quarter}
        for p in scan.points
    ]


def meansquare_rows(result: MeanSquareResult) -> list:
    """One row per cumulative sample; the running exponent needs 3 points."""
    rows = []
    for i in range(len(result.samples)):
        head = result.samples[: i + 1]
        exp = fit_exponent(head) if i >= 2 else float("nan")
        t, v = result.samples[i]
        rows.append({"T": t, "I": v, "exponent_so_far": exp})
    return rows


def write_scan_csv(scan: ErrorScan, path) -> None:
    lines = ["x,e,ratio_sqrt,ratio_quarter"]
    for p in scan.points:
        lines.append(",".join(_fmt12(v) for v in (p.x, p.e, p.ratio_sqrt, p.ratio_quarter)))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_meansquare_csv(result: MeanSquareResult, path) -> None:
    lines = ["T,I,exponent_so_far"]
    for row in meansquare_rows(result):
        lines.append(",".join(_fmt12(row[k]) for k in ("T", "I", "exponent_so_far")))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
