"""Summatory functions of g(gcd) over factorization tuples, g in {mu, |mu|}.

The central object is S_g(x) = sum over pairs m*n <= x of g(gcd(m, n)),
equivalently the partial sum of the per-n terms

    t_g(n) = sum over ordered pairs d1*d2 = n of g(gcd(d1, d2)),

with a k-tuple generalization kept at oracle scale for k = 3. Three routes
compute the same exact integers:

  * brute force: enumerate the pairs, one Euclidean gcd each (the oracle);
  * identity route: t_g(n) = sum_{a^k b = n} (mu*g)(a) * tau_k(b), which
    follows from Mobius inversion of the gcd condition;
  * fast route: S_mu(x) = sum_{m <= sqrt(x)} (mu*mu)(m) * D(floor(x/m^2)),
    O(sqrt(x) log x) via the hyperbola evaluator, and its squarefree twin
    S_|mu|(x) = sum_{m <= x^(1/4)} mu(m) * D(floor(x/m^4)).

Main terms: S_mu(x) is approximated by x * (ln x + C) / zeta(2)^2 with
C = 2*gamma - 1 - 4*zeta'(2)/zeta(2), and S_|mu|(x) by x * (ln x + C') / zeta(4)
with C' = 2*gamma - 1 - 4*zeta'(4)/zeta(4). Error terms are the exact sums
minus these, with the cancellation absorbed at bundle precision.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt

import mpmath as mp
import numpy as np

from .constants import ConstantBundle, get_default_bundle
from .divisor import HYPERBOLA_CAP, divisor_sum_hyperbola
from .errors import ConfigError, RangeError
from .intmath import integer_fourth_root
from .sieve import SieveSet, build_sieve_set, sieve_mobius

__all__ = [
    "BRUTE_CAP",
    "FAST_CAP",
    "GKind",
    "Method",
    "SummatoryResult",
    "PartialSumPair",
    "tuple_gcd_term",
    "tuple_gcd_term_identity",
    "brute_summatory",
    "brute_summatory_prefix",
    "mu_gcd_term_table",
    "fast_mu_summatory",
    "fast_abs_mu_summatory",
    "mu_main_term",
    "abs_mu_main_term",
    "mu_mu_partial_sums",
    "mu_error",
    "delta_weighted_sum",
]

BRUTE_CAP = 10 ** 6
FAST_CAP = 10 ** 12
TUPLE_CAP_K2 = 10 ** 6
TUPLE_CAP_K3 = 10 ** 4


class GKind(Enum):
    MU = "mu"
    ABS_MU = "absmu"


class Method(Enum):
    BRUTE_FORCE = "brute-force"
    IDENTITY_ROUTE = "identity-route"
    FAST_ROUTE = "fast-route"


@dataclass(frozen=True)
class SummatoryResult:
    x: float
    s_value: int
    main_term: float
    error: float
    g_kind: GKind
    k: int
    method: Method


@dataclass(frozen=True)
class PartialSumPair:
    """A(y) = sum_{n<=y} (mu*mu)(n)/n^2 and its log-weighted companion
    B(y) = sum_{n<=y} (mu*mu)(n) ln n / n^2."""

    y: float
    a_value: float
    b_value: float


def _mobius_single(n: int) -> int:
    """mu(n) by trial division; the no-table oracle for tiny arguments."""
    if n < 1:
        raise RangeError("mu is defined on positive integers")
    if n == 1:
        return 1
    val = 1
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            val = -val
        d += 1 if d == 2 else 2
    if m > 1:
        val = -val
    return val


def _g_single(g_kind: GKind, n: int) -> int:
    v = _mobius_single(n)
    return abs(v) if g_kind is GKind.ABS_MU else v


def _divisors(n: int) -> list:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def tuple_gcd_term(g_kind: GKind, k: int, n: int) -> int:
    """Per-n term: sum of g(gcd(d_1..d_k)) over ordered k-tuples with
    product n. Enumerates tuples directly; this is the definitional oracle."""
    if n < 1:
        raise RangeError("tuple_gcd_term requires n >= 1")
    if k == 2:
        if n > TUPLE_CAP_K2:
            raise RangeError(f"tuple_gcd_term(k=2) supports n <= {TUPLE_CAP_K2}")
        total = 0
        d = 1
        while d * d <= n:
            if n % d == 0:
                q = n // d
                v = _g_single(g_kind, gcd(d, q))
                total += v if d == q else 2 * v
            d += 1
        return total
    if k == 3:
        if n > TUPLE_CAP_K3:
            raise RangeError(f"tuple_gcd_term(k=3) supports n <= {TUPLE_CAP_K3}")
        total = 0
        for d1 in _divisors(n):
            m = n // d1
            for d2 in _divisors(m):
                total += _g_single(g_kind, gcd(d1, gcd(d2, m // d2)))
        return total
    raise ConfigError("tuple enumeration is implemented for k = 2 and k = 3 only")


def _identity_tables(tables: SieveSet | None, n: int, k: int) -> SieveSet:
    if tables is None:
        tables = build_sieve_set(n, extra_tau=(3,) if k == 3 else ())
    tables.require(n, "tuple_gcd_term_identity")
    return tables


def tuple_gcd_term_identity(g_kind: GKind, k: int, n: int, tables: SieveSet | None = None) -> int:
    """Same value through the sieve identity sum_{a^k b = n} (mu*g)(a) tau_k(b)."""
    if n < 1:
        raise RangeError("tuple_gcd_term_identity requires n >= 1")
    if k not in (2, 3):
        raise ConfigError("identity route is implemented for k = 2 and k = 3 only")
    tables = _identity_tables(tables, n, k)
    coeff = tables.mu_star_mu.values if g_kind is GKind.MU else tables.mu_star_mu_sq.values
    if k == 2:
        tk = tables.tau.values
    else:
        t3 = tables.tau_k.get(3)
        if t3 is None:
            raise ConfigError("sieve set was built without tau_3; pass extra_tau=(3,)")
        tk = t3.values
    total = 0
    a = 1
    while a ** k <= n:
        ak = a ** k
        if n % ak == 0:
            total += int(coeff[a]) * int(tk[n // ak])
        a += 1
    return total


def _g_table(g_kind: GKind, limit: int) -> np.ndarray:
    """g on 1..limit as int64, for vectorized gcd lookups."""
    mob = sieve_mobius(max(limit, 1)).values.astype(np.int64)
    return np.abs(mob) if g_kind is GKind.ABS_MU else mob


def brute_summatory(g_kind: GKind, x, k: int = 2) -> int:
    """S_g(x) by the double loop over m <= x, n <= x/m, one gcd per pair.

    Ground truth for the fast routes. gcd(m, n) divides both factors of a
    pair with m*n <= x, so it never exceeds sqrt(x); only that much of a
    g lookup table is ever touched.
    """
    if k != 2:
        raise ConfigError("brute_summatory enumerates pairs; k must be 2")
    if x < 0:
        raise RangeError("brute_summatory requires x >= 0")
    X = math.floor(x)
    if X > BRUTE_CAP:
        raise RangeError(f"brute_summatory supports floor(x) <= {BRUTE_CAP}")
    if X == 0:
        return 0
    if X <= 128:
        total = 0
        for m in range(1, X + 1):
            for n in range(1, X // m + 1):
                total += _g_single(g_kind, gcd(m, n))
        return total
    gtab = _g_table(g_kind, isqrt(X))
    total = 0
    for m in range(1, X + 1):
        ns = np.arange(1, X // m + 1, dtype=np.int64)
        total += int(gtab[np.gcd(np.int64(m), ns)].sum())
    return total


def brute_summatory_prefix(g_kind: GKind, limit: int) -> np.ndarray:
    """S_g at every integer up to limit in one sweep; index 0 holds 0.

    Same pair enumeration as brute_summatory, folded across the diagonal:
    each unordered pair {m, q} with m < q is hit once with weight 2. One
    Euclidean gcd per pair, batched, then a cumulative sum over n = m*q.
    """
    limit = int(limit)
    if not 1 <= limit <= BRUTE_CAP:
        raise RangeError(f"brute_summatory_prefix supports 1 <= limit <= {BRUTE_CAP}")
    gtab = _g_table(g_kind, isqrt(limit))
    per_n = np.zeros(limit + 1, dtype=np.int64)
    for m in range(1, isqrt(limit) + 1):
        qs = np.arange(m, limit // m + 1, dtype=np.int64)
        vals = 2 * gtab[np.gcd(np.int64(m), qs)]
        vals[0] -= gtab[m]  # the pair (m, m) is ordered only one way
        per_n[m * qs] += vals
    return np.cumsum(per_n)


def mu_gcd_term_table(limit: int, tables: SieveSet | None = None) -> np.ndarray:
    """t_mu(n) for all n <= limit via the identity route, vectorized:
    add (mu*mu)(a) * tau(b) at n = a^2 * b for every a <= sqrt(limit)."""
    limit = int(limit)
    if limit < 1:
        raise RangeError("mu_gcd_term_table requires limit >= 1")
    if tables is None:
        tables = build_sieve_set(limit)
    tables.require(limit, "mu_gcd_term_table")
    mumu = tables.mu_star_mu.values
    tauv = tables.tau.values
    out = np.zeros(limit + 1, dtype=np.int64)
    for a in range(1, isqrt(limit) + 1):
        c = int(mumu[a])
        if c:
            a2 = a * a
            out[a2::a2] += c * tauv[1 : limit // a2 + 1].astype(np.int64)
    return out


def _mu_main_term_hp(x, c: ConstantBundle) -> mp.mpf:
    # ambient precision is the caller's responsibility
    xm = mp.mpf(x)
    return c.inv_zeta2_sq * xm * (mp.log(xm) + c.mu_shift)


def _abs_mu_main_term_hp(x, c: ConstantBundle) -> mp.mpf:
    xm = mp.mpf(x)
    return xm * (mp.log(xm) + c.sqfree_shift) / c.zeta4


def mu_main_term(x, constants: ConstantBundle | None = None) -> float:
    """Smooth approximation x * (ln x + mu_shift) / zeta(2)^2 for x > 1."""
    if x <= 1:
        raise RangeError("mu_main_term requires x > 1")
    c = constants if constants is not None else get_default_bundle()
    with mp.workdps(c.precision_digits + 10):
        return float(_mu_main_term_hp(x, c))


def abs_mu_main_term(x, constants: ConstantBundle | None = None) -> float:
    """Squarefree analogue x * (ln x + sqfree_shift) / zeta(4) for x > 1."""
    if x <= 1:
        raise RangeError("abs_mu_main_term requires x > 1")
    c = constants if constants is not None else get_default_bundle()
    with mp.workdps(c.precision_digits + 10):
        return float(_abs_mu_main_term_hp(x, c))


def _fast_mu_svalue(X: int, tables: SieveSet, threads: int = 1) -> int:
    """Exact S_mu(X) = sum_{m <= sqrt(X)} (mu*mu)(m) * D(X // m^2).

    Small m gets an individual hyperbola evaluation; once X // m^2 drops to
    the table limit the remaining D values come from the precomputed
    divisor prefix, in one vectorized pass.
    """
    r = isqrt(X)
    tables.require(r, "fast_mu_summatory")
    mumu = tables.mu_star_mu.values
    # first m whose quotient X // m^2 is guaranteed inside the prefix table
    m_lo = isqrt(X // (tables.limit + 1)) + 1

    def segment(lo: int, hi: int) -> int:
        part = 0
        for m in range(lo, hi):
            cm = mumu[m]
            if cm:
                part += int(cm) * divisor_sum_hyperbola(X // (m * m))
        return part

    if threads > 1 and m_lo > 2:
        cuts = np.linspace(1, m_lo, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            pieces = pool.map(segment, cuts[:-1], cuts[1:])
            total = sum(pieces)  # exact integers; order cannot matter
    else:
        total = segment(1, m_lo)
    if m_lo <= r:
        ms = np.arange(m_lo, r + 1, dtype=np.int64)
        qs = np.int64(X) // (ms * ms)
        total += int(np.sum(mumu[ms].astype(np.int64) * tables.divisor_prefix[qs]))
    return total


def _check_fast_arg(x) -> int:
    if x < 1:
        raise RangeError("fast summatory routes require x >= 1")
    X = math.floor(x)
    if X > FAST_CAP:
        raise RangeError(f"fast summatory routes support floor(x) <= {FAST_CAP}")
    return int(X)


def fast_mu_summatory(x, tables: SieveSet | None = None,
                      constants: ConstantBundle | None = None,
                      threads: int = 1) -> SummatoryResult:
    """Exact S_mu(floor(x)) with main term and error, O(sqrt(x) log x)."""
    X = _check_fast_arg(x)
    if tables is None:
        tables = build_sieve_set(max(isqrt(X), 1))
    c = constants if constants is not None else get_default_bundle()
    s = _fast_mu_svalue(X, tables, threads=threads)
    with mp.workdps(c.precision_digits + 10):
        main = _mu_main_term_hp(x, c)
        err = float(s - main)
        return SummatoryResult(float(x), s, float(main), err, GKind.MU, 2, Method.FAST_ROUTE)


def fast_abs_mu_summatory(x, tables: SieveSet | None = None,
                          constants: ConstantBundle | None = None) -> SummatoryResult:
    """Exact S_|mu|(floor(x)): only fourth-power-free gcd structure survives,
    so the coefficient sum runs to x^(1/4) with plain Mobius weights."""
    X = _check_fast_arg(x)
    r4 = integer_fourth_root(X)
    if tables is None:
        tables = build_sieve_set(max(r4, 1))
    tables.require(r4, "fast_abs_mu_summatory")
    c = constants if constants is not None else get_default_bundle()
    mob = tables.mobius.values
    s = 0
    for m in range(1, r4 + 1):
        cm = mob[m]
        if cm:
            s += int(cm) * divisor_sum_hyperbola(X // m ** 4)
    with mp.workdps(c.precision_digits + 10):
        main = _abs_mu_main_term_hp(x, c)
        err = float(s - main)
        return SummatoryResult(float(x), s, float(main), err, GKind.ABS_MU, 2, Method.FAST_ROUTE)


def mu_mu_partial_sums(y, tables: SieveSet | None = None) -> PartialSumPair:
    """A(y) and B(y), summed in descending magnitude (ascending n) with
    exact compensated accumulation; convergence targets are in the bundle."""
    if y < 1:
        raise RangeError("mu_mu_partial_sums requires y >= 1")
    Y = math.floor(y)
    if tables is None:
        tables = build_sieve_set(Y)
    tables.require(Y, "mu_mu_partial_sums")
    vals = tables.mu_star_mu.values[1 : Y + 1]
    nz = np.nonzero(vals)[0]
    ns = (nz + 1).astype(np.float64)
    cs = vals[nz].astype(np.float64)
    a = math.fsum(cs / (ns * ns))
    b = math.fsum(cs * np.log(ns) / (ns * ns))
    return PartialSumPair(float(y), a, b)


def mu_error(x, tables: SieveSet | None = None,
             constants: ConstantBundle | None = None) -> float:
    """E_mu(x) = S_mu(floor(x)) - main term, differenced at bundle precision."""
    return fast_mu_summatory(x, tables=tables, constants=constants).error


def delta_weighted_sum(x, Y, tables: SieveSet | None = None,
                       constants: ConstantBundle | None = None) -> float:
    """sum_{l <= Y} (mu*mu)(l) * delta(x / l^2) for 1 <= Y <= sqrt(x).

    The floor inside each divisor sum is taken on the exact rational x/l^2;
    the smooth parts accumulate at bundle precision before the single
    rounding to a double.
    """
    if Y < 1:
        raise RangeError("delta_weighted_sum requires Y >= 1")
    fx = Fraction(x)
    if Fraction(Y) ** 2 > fx:
        raise RangeError("delta_weighted_sum requires Y <= sqrt(x)")
    if fx > HYPERBOLA_CAP:
        raise RangeError(f"delta_weighted_sum supports x <= {HYPERBOLA_CAP}")
    L = math.floor(Y)
    if tables is None:
        tables = build_sieve_set(L)
    tables.require(L, "delta_weighted_sum")
    c = constants if constants is not None else get_default_bundle()
    mumu = tables.mu_star_mu.values
    with mp.workdps(c.precision_digits + 10):
        two_g1 = 2 * c.gamma - 1
        xm = mp.mpf(x)
        terms = []
        for l in range(1, L + 1):
            cl = mumu[l]
            if not cl:
                continue
            ll = l * l
            d = divisor_sum_hyperbola(fx.numerator // (fx.denominator * ll))
            t = xm / ll
            terms.append(int(cl) * (d - t * (mp.log(t) + two_g1)))
        return float(mp.fsum(terms))
