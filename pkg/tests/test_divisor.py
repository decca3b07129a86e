import math
import random

import numpy as np
import pytest
import sympy
from scipy.integrate import quad

from gcdmobius.divisor import (
    DELTA_INTEGRAL_CAP,
    HYPERBOLA_CAP,
    NAIVE_CAP,
    DivisorMethod,
    _quotient_block_sum,
    delta,
    delta_integral,
    divisor_sum_hyperbola,
    divisor_sum_naive,
    divisor_summary,
)
from gcdmobius.errors import RangeError


def test_small_values():
    want = {1: 1, 2: 3, 3: 5, 4: 8, 5: 10, 6: 14, 10: 27, 16: 50}
    for x, v in want.items():
        assert divisor_sum_naive(x) == v
        assert divisor_sum_hyperbola(x) == v


def test_real_arguments_floor():
    assert divisor_sum_hyperbola(10.9) == divisor_sum_hyperbola(10)
    assert divisor_sum_naive(0) == 0
    assert divisor_sum_hyperbola(0) == 0


def test_naive_matches_hyperbola_exhaustive():
    for x in range(1, 3001):
        assert divisor_sum_naive(x) == divisor_sum_hyperbola(x), x


def test_naive_matches_hyperbola_random_large():
    rng = random.Random(99)
    for _ in range(20):
        x = rng.randint(10 ** 6, 10 ** 8)
        assert divisor_sum_naive(x) == divisor_sum_hyperbola(x), x


def test_agrees_with_tau_prefix(tables_1m):
    rng = random.Random(7)
    for _ in range(100):
        x = rng.randint(1, 10 ** 6)
        assert divisor_sum_hyperbola(x) == int(tables_1m.divisor_prefix[x])


def test_quotient_block_sum_exact():
    # half-open [lo, hi), matching its docstring
    rng = random.Random(5)
    for X in (999, 10 ** 7 + 3, (1 << 48) - 3):
        lo = rng.randint(1, 10 ** 6)
        hi = lo + 4000
        got = _quotient_block_sum(X, lo, hi, True)
        assert got == sum(X // n for n in range(lo, hi))


def test_hyperbola_branch_seam():
    # the implementation switches from float64 to int64 quotients at 2^48;
    # telescoping with tau across the seam catches any off-by-one in either
    base = (1 << 48) - 3
    vals = [divisor_sum_hyperbola(base + d) for d in range(7)]
    for d in range(1, 7):
        assert vals[d] - vals[d - 1] == sympy.divisor_count(base + d), d


def test_delta_examples(bundle):
    g = float(bundle.gamma)
    d10 = delta(10, bundle)
    assert d10 == pytest.approx(27 - 10 * (math.log(10) + 2 * g - 1), rel=1e-12)
    assert abs(d10 - 2.4298) < 1e-3
    d2 = delta(2, bundle)
    assert d2 == pytest.approx(3 - 2 * (math.log(2) + 2 * g - 1), rel=1e-12)
    assert abs(d2 - 1.3047) < 2e-3
    assert delta(1, bundle) == pytest.approx(1 - (2 * g - 1), rel=1e-12)


def test_summary_reconstruction_within_ulps(bundle):
    g = float(bundle.gamma)
    for x in (10, 1000.5, 12345, 8 * 10 ** 6 + 0.25):
        r = divisor_summary(x, constants=bundle)
        recon = x * (math.log(x) + 2 * g - 1) + r.delta
        assert abs(recon - r.d_value) <= 4 * math.ulp(float(r.d_value)), x
        assert r.method is DivisorMethod.HYPERBOLA
    rn = divisor_summary(100, method=DivisorMethod.NAIVE, constants=bundle)
    assert rn.d_value == divisor_sum_naive(100)
    assert rn.method is DivisorMethod.NAIVE


def test_delta_integral_hand_value(bundle):
    # on [1, 2] the divisor sum is identically 1
    g = float(bundle.gamma)

    def f_smooth(t):
        return t * t / 2 * math.log(t) - t * t / 4 + (2 * g - 1) * t * t / 2

    want = (2 - 1) - (f_smooth(2) - f_smooth(1))
    assert delta_integral(2, bundle) == pytest.approx(want, rel=1e-12)
    assert delta_integral(1, bundle) == 0.0


def test_delta_integral_vs_quadrature(bundle):
    g = float(bundle.gamma)
    for y in (7.5, 30):
        acc = 0.0
        n = 1
        while n < y:
            b = min(n + 1, y)
            d_n = divisor_sum_naive(n)
            acc += quad(lambda t: d_n - t * (math.log(t) + 2 * g - 1), n, b)[0]
            n += 1
        assert delta_integral(y, bundle) == pytest.approx(acc, rel=1e-10, abs=1e-10)


def test_delta_integral_midpoint_oracle(tables_1m, bundle):
    # composite midpoint rule with exact divisor-sum lookups, 100 points per
    # unit interval; the integrand is smooth inside each interval
    y = 10 ** 4
    g = float(bundle.gamma)
    ts = (np.arange(100 * (y - 1)) + 0.5) / 100 + 1
    dvals = tables_1m.divisor_prefix[np.floor(ts).astype(np.int64)]
    approx = float(np.sum(dvals - ts * (np.log(ts) + 2 * g - 1)) / 100)
    assert abs(delta_integral(y, bundle) - approx) < 1e-2


def test_range_errors():
    with pytest.raises(RangeError):
        divisor_sum_naive(NAIVE_CAP + 1)
    with pytest.raises(RangeError):
        divisor_sum_hyperbola(HYPERBOLA_CAP * 10)
    with pytest.raises(RangeError):
        divisor_sum_naive(-1)
    with pytest.raises(RangeError):
        delta(0)
    with pytest.raises(RangeError):
        delta_integral(0.5)
    with pytest.raises(RangeError):
        delta_integral(DELTA_INTEGRAL_CAP + 1)
