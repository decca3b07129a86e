import math
import random

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from gcdmobius.analysis import (
    GridSpec,
    _interval_integral,
    _to_longdouble,
    dirichlet_series_check,
    fit_exponent,
    mean_square,
    meansquare_rows,
    scan_errors,
    write_meansquare_csv,
    write_scan_csv,
)
from gcdmobius.errors import ConfigError, RangeError
from gcdmobius.summatory import mu_error, mu_gcd_term_table


def test_grid_validation():
    GridSpec(10, 10, 1)
    with pytest.raises(ConfigError):
        GridSpec(100, 10, 20)
    with pytest.raises(ConfigError):
        GridSpec(-1, 10, 20)
    with pytest.raises(ConfigError):
        GridSpec(10, 100, 0)
    with pytest.raises(ConfigError):
        GridSpec(10, 100, 201)
    with pytest.raises(RangeError):
        GridSpec(10, 10 ** 13, 20)


def test_single_point_grid(tables_1m, bundle):
    scan = scan_errors(GridSpec(10, 10, 20), tables=tables_1m, constants=bundle)
    assert len(scan.points) == 1
    p = scan.points[0]
    assert p.x == 10.5
    e_ref = mu_error(10.5, tables_1m, bundle)
    assert p.e == pytest.approx(e_ref, abs=1e-12)
    assert p.ratio_sqrt == pytest.approx(p.e / (math.sqrt(10.5) * math.log(10.5) ** 2))
    assert p.ratio_quarter == pytest.approx(p.e / 10.5 ** 0.25)


def test_grid_row_count_and_order(tables_1m, bundle):
    scan = scan_errors(GridSpec(1e3, 1e6, 20), tables=tables_1m, constants=bundle)
    assert len(scan.points) == 61
    xs = [p.x for p in scan.points]
    assert xs == sorted(xs)
    assert len(set(xs)) == 61
    assert xs[0] == 1000.5 and xs[-1] == 1000000.5


def test_scan_points_reconstruct_independently(tables_1m, bundle):
    scan = scan_errors(GridSpec(50, 5000, 4), tables=tables_1m, constants=bundle)
    for p in scan.points:
        assert p.e == pytest.approx(mu_error(p.x, tables_1m, bundle), abs=1e-10)


def test_scan_thread_invariance(tables_1m, bundle):
    a = scan_errors(GridSpec(100, 10 ** 5, 10), tables=tables_1m, constants=bundle)
    b = scan_errors(GridSpec(100, 10 ** 5, 10), tables=tables_1m, constants=bundle,
                    threads=4)
    assert [(p.x, p.e) for p in a.points] == [(p.x, p.e) for p in b.points]


def test_mean_square_vs_quadrature(tables_1m, bundle):
    c_f = float(bundle.inv_zeta2_sq)
    k_f = float(bundle.mu_shift)
    prefix = np.cumsum(mu_gcd_term_table(220, tables_1m))
    for t_end in (2, 5.5, 10, 200):
        res = mean_square(t_end, tables=tables_1m, constants=bundle)
        acc = 0.0
        n = 1
        while n < t_end:
            b = min(n + 1, t_end)
            s = int(prefix[n])
            acc += quad(
                lambda t: (s - c_f * t * (math.log(t) + k_f)) ** 2, n, b, limit=200)[0]
            n += 1
        assert res.integral == pytest.approx(acc, rel=1e-9), t_end


def test_interval_closed_form_vs_gauss_legendre(bundle):
    nodes, weights = np.polynomial.legendre.leggauss(64)
    c_ld = _to_longdouble(bundle.inv_zeta2_sq)
    k_ld = _to_longdouble(bundle.mu_shift)
    c_f = float(bundle.inv_zeta2_sq)
    k_f = float(bundle.mu_shift)
    rng = random.Random(7)
    for _ in range(25):
        a = rng.uniform(1.0, 10 ** 5)
        b = a + rng.uniform(0.05, 1.0)
        s0 = rng.randint(-10 ** 6, 10 ** 6)
        ts = (nodes + 1) * (b - a) / 2 + a
        vals = (s0 - c_f * ts * (np.log(ts) + k_f)) ** 2
        q = float(np.dot(weights, vals) * (b - a) / 2)
        closed = float(_interval_integral(s0, a, b, c_ld, k_ld))
        assert closed == pytest.approx(q, rel=1e-9, abs=1e-3)


def test_mean_square_additive_in_t(tables_1m, bundle):
    r_lo = mean_square(1000, tables=tables_1m, constants=bundle)
    r_hi = mean_square(1001, tables=tables_1m, constants=bundle)
    prefix = np.cumsum(mu_gcd_term_table(1001, tables_1m))
    step = float(_interval_integral(
        int(prefix[1000]), 1000, 1001,
        _to_longdouble(bundle.inv_zeta2_sq), _to_longdouble(bundle.mu_shift)))
    assert r_hi.integral - r_lo.integral == pytest.approx(step, rel=1e-6)
    assert r_hi.interval_count == r_lo.interval_count + 1


def test_mean_square_monotone(tables_1m, bundle):
    vals = [mean_square(t, tables=tables_1m, constants=bundle).integral
            for t in (10, 100, 1000, 5000, 10000)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[0] > 0


def test_mean_square_samples_structure(tables_1m, bundle):
    res = mean_square(12345.5, tables=tables_1m, constants=bundle)
    assert [s[0] for s in res.samples] == [10.0, 100.0, 1000.0, 10000.0, 12345.5]
    assert res.samples[-1][1] == res.integral
    assert 1.0 <= res.fitted_exponent <= 2.0
    small = mean_square(2, tables=tables_1m, constants=bundle)
    assert math.isnan(small.fitted_exponent)
    assert small.samples == [(2.0, small.integral)]


def test_mean_square_range_errors(tables_1m):
    with pytest.raises(RangeError):
        mean_square(1.5, tables=tables_1m)
    with pytest.raises(RangeError):
        mean_square(10 ** 7 + 1, tables=tables_1m)


def test_dirichlet_series_check(tables_1m, bundle):
    lhs, rhs, diff = dirichlet_series_check(2.0, 10 ** 5, tables_1m, bundle)
    assert diff == lhs - rhs
    assert abs(diff) < 1e-3
    with mp.workdps(40):
        target = float(mp.zeta(2) ** 2 / mp.zeta(4) ** 2)
    assert rhs == pytest.approx(target, rel=1e-14)
    # truncation error shrinks as N grows
    _, _, diff_small = dirichlet_series_check(2.0, 10 ** 3, tables_1m, bundle)
    assert abs(diff) < abs(diff_small)
    with pytest.raises(RangeError):
        dirichlet_series_check(1.2, 100, tables_1m, bundle)
    with pytest.raises(RangeError):
        dirichlet_series_check(2.0, 10 ** 6 + 1, tables_1m, bundle)


def test_fit_exponent_recovers_power_law():
    ts = [10.0, 100.0, 1000.0, 10000.0]
    assert fit_exponent([(t, t ** 1.37) for t in ts]) == pytest.approx(1.37, abs=1e-12)
    assert fit_exponent([(t, 5.0 * t ** 0.5) for t in ts]) == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(ConfigError):
        fit_exponent([(1.0, 1.0), (2.0, 2.0)])
    with pytest.raises(ConfigError):
        fit_exponent([(1.0, 1.0), (3.0, 2.0), (2.0, 3.0)])
    with pytest.raises(ConfigError):
        fit_exponent([(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)])


def test_scan_csv_golden(tmp_path, tables_1m, bundle):
    scan = scan_errors(GridSpec(10, 10, 20), tables=tables_1m, constants=bundle)
    path = tmp_path / "scan.csv"
    write_scan_csv(scan, path)
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode() == (
        "x,e,ratio_sqrt,ratio_quarter\n"
        "10.5,0.429085394085,0.0239499821547,0.238367151565\n"
    )


def test_meansquare_csv_shape(tmp_path, tables_1m, bundle):
    res = mean_square(1000, tables=tables_1m, constants=bundle)
    path = tmp_path / "ms.csv"
    write_meansquare_csv(res, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "T,I,exponent_so_far"
    assert len(lines) == 4
    assert lines[1].endswith(",nan")
    assert lines[2].endswith(",nan")
    last = lines[3].split(",")
    assert float(last[0]) == 1000.0
    assert float(last[2]) == pytest.approx(res.fitted_exponent, rel=1e-10)
    rows = meansquare_rows(res)
    assert math.isnan(rows[0]["exponent_so_far"])
    assert rows[2]["exponent_so_far"] == pytest.approx(res.fitted_exponent, rel=1e-12)
