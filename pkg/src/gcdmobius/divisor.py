"""Divisor summatory function D(x), its error term, and the error integral.

D(x) = sum_{n <= x} tau(n) = sum_{n <= x} floor(x/n) counts lattice points
under the hyperbola uv = x. Two independent evaluators are provided: a
direct column-by-column count (the oracle, deliberately capped) and the
O(sqrt(x)) folded form

    D(x) = 2 * sum_{n <= s} floor(x/n) - s^2,   s = floor(sqrt(x)),

both exact in integers. The error term is

    delta(x) = D(floor(x)) - x*(ln x + 2*gamma - 1),

whose running integral over [1, y] concentrates at y/4; the integral is
evaluated in closed form, not by quadrature, so it can serve as an identity
check for the rest of the package.

Floating-point note for the bulk quotient loop: for integers X < 2^48 and
1 <= n <= X, IEEE double division gets floor(X/n) right. If X/n is an
integer it is representable (X < 2^53) and correctly-rounded division
returns it exactly; otherwise X/n sits at distance >= 1/n from the nearest
integers while the rounding error is at most (X/n) * 2^-53 < 2^-5/n. Double
division runs several times faster than 64-bit integer division on current
hardware, which is what makes the exhaustive oracle comparisons affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from math import isqrt

import mpmath as mp
import numpy as np

from .constants import ConstantBundle, get_default_bundle
from .errors import RangeError
from .intmath import triangular

__all__ = [
    "NAIVE_CAP",
    "HYPERBOLA_CAP",
    "DELTA_INTEGRAL_CAP",
    "DivisorMethod",
    "DivisorSumResult",
    "divisor_sum_naive",
    "divisor_sum_hyperbola",
    "delta",
    "delta_integral",
    "divisor_summary",
]

NAIVE_CAP = 10 ** 8
HYPERBOLA_CAP = 10 ** 15
DELTA_INTEGRAL_CAP = 10 ** 7

_FLOAT_DIV_CAP = 1 << 48  # see the module docstring; safety factor 32 vs 2^53
_CHUNK = 1 << 19


class DivisorMethod(Enum):
    NAIVE = "naive"
    HYPERBOLA = "hyperbola"


@dataclass(frozen=True)
class DivisorSumResult:
    x: float
    d_value: int
    delta: float
    method: DivisorMethod


def _floor_arg(x, cap: int, opname: str) -> int:
    if x < 0:
        raise RangeError(f"{opname} requires x >= 0")
    fx = math.floor(x)
    if fx > cap:
        raise RangeError(f"{opname} supports floor(x) <= {cap}, got {fx}")
    return int(fx)


def _quotient_block_sum(X: int, lo: int, hi: int, as_int64: bool) -> int:
    """Exact sum of X // n over lo <= n < hi via chunked double division.

    Requires X < 2^48. as_int64 routes each floored chunk through an int64
    sum; without it chunk sums must stay below 2^53, which only the naive
    caller (X <= 10^8) guarantees by itself.
    """
    xf = np.float64(X)
    size = min(_CHUNK, max(hi - lo, 0))
    base = np.arange(size, dtype=np.float64)
    buf = np.empty(size, dtype=np.float64)
    total = 0
    for start in range(lo, hi, _CHUNK):
        m = min(_CHUNK, hi - start)
        np.add(base[:m], np.float64(start), out=buf[:m])
        np.divide(xf, buf[:m], out=buf[:m])
        np.floor(buf[:m], out=buf[:m])
        if as_int64:
            total += int(buf[:m].astype(np.int64).sum())
        else:
            total += int(buf[:m].sum())
    return total


def divisor_sum_naive(x) -> int:
    """D(floor(x)) by the direct O(x) column loop; the bounded oracle."""
    X = _floor_arg(x, NAIVE_CAP, "divisor_sum_naive")
    if X == 0:
        return 0
    if X <= 4096:
        return sum(X // n for n in range(1, X + 1))
    # chunk sums stay below 2^19 * 10^8 < 2^53, so plain double summation is exact
    return _quotient_block_sum(X, 1, X + 1, as_int64=False)


def divisor_sum_hyperbola(x) -> int:
    """D(floor(x)) in O(sqrt(x)) exact integer work."""
    X = _floor_arg(x, HYPERBOLA_CAP, "divisor_sum_hyperbola")
    if X == 0:
        return 0
    s = isqrt(X)
    if s <= 4096:
        return 2 * sum(X // n for n in range(1, s + 1)) - s * s
    if X < _FLOAT_DIV_CAP:
        folded = _quotient_block_sum(X, 1, s + 1, as_int64=True)
    else:
        # int64 division path; quotients near X no longer fit the double argument
        folded = 0
        for start in range(1, s + 1, _CHUNK):
            m = min(_CHUNK, s + 1 - start)
            ns = np.arange(start, start + m, dtype=np.int64)
            folded += int(np.floor_divide(np.int64(X), ns).sum())
    return 2 * folded - s * s


def delta(x, constants: ConstantBundle | None = None) -> float:
    """Error term D(floor(x)) - x*(ln x + 2*gamma - 1) for real x > 0.

    The subtraction cancels most leading digits at large x, so it is done in
    the bundle's working precision before rounding to a double.
    """
    if x <= 0:
        raise RangeError("delta requires x > 0")
    c = constants if constants is not None else get_default_bundle()
    d = divisor_sum_hyperbola(x)
    with mp.workdps(c.precision_digits + 10):
        t = mp.mpf(x)
        return float(d - t * (mp.log(t) + (2 * c.gamma - 1)))


def _divisor_prefix_total(M: int) -> int:
    """G(M) = sum_{n <= M} D(n), exactly.

    Swapping the summation order counts tau(m) once for each n in [m, M]:
    G(M) = sum_{m <= M} tau(m) * (M + 1 - m) = (M+1) * D(M) - sum_{m <= M} m * tau(m),
    and the weighted sum expands over divisor pairs m = d*e as
    sum_{d*e <= M} d*e = 2 * sum_{d <= s} d * T(M // d) - T(s)^2
    with T(j) = j(j+1)/2 and s = floor(sqrt(M)).
    """
    if M <= 0:
        return 0
    s = isqrt(M)
    weighted = 2 * sum(d * triangular(M // d) for d in range(1, s + 1)) - triangular(s) ** 2
    return (M + 1) * divisor_sum_hyperbola(M) - weighted


def delta_integral(y, constants: ConstantBundle | None = None) -> float:
    """integral of delta(t) dt over [1, y], in closed form.

    D(floor(t)) is a step function, so its integral is G(K-1) plus a partial
    last step, with K = floor(y). The smooth part integrates to
    F(t) = t^2/2 * ln t - t^2/4 + (2*gamma - 1) * t^2/2, evaluated once at
    each endpoint. No quadrature error enters; the only rounding is the
    final cancellation, performed in working precision.
    """
    if y < 1:
        raise RangeError("delta_integral requires y >= 1")
    if y > DELTA_INTEGRAL_CAP:
        raise RangeError(f"delta_integral supports y <= {DELTA_INTEGRAL_CAP}")
    c = constants if constants is not None else get_default_bundle()
    K = math.floor(y)
    steps = _divisor_prefix_total(K - 1)
    d_last = divisor_sum_hyperbola(K)
    with mp.workdps(c.precision_digits + 10):
        ym = mp.mpf(y)
        two_g1 = 2 * c.gamma - 1

        def F(t):
            return t * t / 2 * mp.log(t) - t * t / 4 + two_g1 * t * t / 2

        step_part = steps + d_last * (ym - K)
        return float(step_part - (F(ym) - F(mp.mpf(1))))


def divisor_summary(x, method: DivisorMethod = DivisorMethod.HYPERBOLA,
                    constants: ConstantBundle | None = None) -> DivisorSumResult:
    """Bundle D, delta and the method tag for one argument."""
    if method == DivisorMethod.NAIVE:
        d = divisor_sum_naive(x)
    else:
        d = divisor_sum_hyperbola(x)
    if math.floor(x) == 0:
        return DivisorSumResult(float(x), 0, 0.0, method)
    c = constants if constants is not None else get_default_bundle()
    with mp.workdps(c.precision_digits + 10):
        t = mp.mpf(x)
        dl = float(d - t * (mp.log(t) + (2 * c.gamma - 1)))
    return DivisorSumResult(float(x), d, dl, method)
