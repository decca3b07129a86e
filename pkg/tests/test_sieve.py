import math

import numpy as np
import pytest
import sympy

from gcdmobius.errors import ConfigError, RangeError
from gcdmobius.sieve import (
    TABLE_LIMIT_CAP,
    FunctionTable,
    TableKind,
    build_sieve_set,
    dirichlet_convolve,
    load_table,
    mu_star_mu_closed_form,
    save_table,
    sieve_mobius,
    sieve_mu_squared,
    sieve_ones,
    sieve_tau_k,
)


def test_mobius_known_values():
    t = sieve_mobius(30)
    for n, v in {1: 1, 2: -1, 3: -1, 4: 0, 5: -1, 6: 1, 10: 1, 12: 0, 30: -1}.items():
        assert t.values[n] == v


def test_mobius_vs_sympy():
    t = sieve_mobius(3000)
    for n in range(1, 3001):
        assert t.values[n] == sympy.mobius(n), n


def test_mu_squared_is_square_of_mu():
    mob = sieve_mobius(5000)
    sq = sieve_mu_squared(5000)
    assert np.array_equal(sq.values, mob.values.astype(np.int64) ** 2)


def test_tau_vs_sympy():
    ss = build_sieve_set(2000)
    for n in range(1, 2001):
        assert ss.tau.values[n] == sympy.divisor_count(n), n


def test_divisor_prefix_is_tau_cumsum():
    ss = build_sieve_set(300)
    assert np.array_equal(ss.divisor_prefix, np.cumsum(ss.tau.values, dtype=np.int64))


def test_tau_k_prime_values():
    for k in range(2, 6):
        t = sieve_tau_k(600, k)
        assert t.values[1] == 1
        for p in (2, 3, 5, 7, 11, 101, 599):
            assert t.values[p] == k, (k, p)


def test_tau_3_brute_oracle():
    # tau_3(n) counts ordered triples; equals sum of tau(n/d) over d | n
    t3 = sieve_tau_k(300, 3)
    for n in range(1, 301):
        want = sum(sympy.divisor_count(n // d) for d in sympy.divisors(n))
        assert t3.values[n] == want, n


def test_mu_star_mu_closed_form_vs_convolution():
    limit = 10 ** 4
    direct = mu_star_mu_closed_form(limit)
    conv = dirichlet_convolve(sieve_mobius(limit), sieve_mobius(limit))
    assert np.array_equal(direct.values, conv.values)


def test_mu_star_mu_prime_powers_and_tau_bound():
    limit = 10 ** 5
    t = mu_star_mu_closed_form(limit)
    for p in (2, 3, 5, 97, 313):
        assert t.values[p] == -2
        assert t.values[p * p] == 1
        if p ** 3 <= limit:
            assert t.values[p ** 3] == 0
        if p ** 4 <= limit:
            assert t.values[p ** 4] == 0
    ss = build_sieve_set(limit)
    assert np.all(np.abs(t.values[1:]) <= ss.tau.values[1:])


def test_mobius_inverts_ones():
    limit = 2000
    conv = dirichlet_convolve(sieve_mobius(limit), sieve_ones(limit))
    want = np.zeros(limit + 1, dtype=np.int32)
    want[1] = 1
    assert np.array_equal(conv.values, want)


def test_ones_convolved_with_ones_is_tau():
    limit = 2000
    conv = dirichlet_convolve(sieve_ones(limit), sieve_ones(limit))
    ss = build_sieve_set(limit)
    assert np.array_equal(conv.values, ss.tau.values)


def test_mu_star_mu_squared_lives_on_squares():
    ss = build_sieve_set(10 ** 4)
    conv = dirichlet_convolve(ss.mobius, ss.mu_squared)
    assert np.array_equal(conv.values, ss.mu_star_mu_sq.values)
    mob = ss.mobius.values
    for n in range(1, 10 ** 4 + 1):
        r = math.isqrt(n)
        want = int(mob[r]) if r * r == n else 0
        assert ss.mu_star_mu_sq.values[n] == want, n


def test_table_validation():
    with pytest.raises(ConfigError):
        FunctionTable(TableKind.CUSTOM, 3, np.array([0, 2, 0, 0], dtype=np.int32))
    with pytest.raises(ConfigError):
        FunctionTable(TableKind.CUSTOM, 3, np.zeros(3, dtype=np.int32))
    with pytest.raises(RangeError):
        sieve_mobius(TABLE_LIMIT_CAP + 1)
    with pytest.raises(ConfigError):
        sieve_tau_k(100, 7)
    with pytest.raises(ConfigError):
        dirichlet_convolve(sieve_mobius(10), sieve_mobius(20))


def test_tables_are_read_only():
    t = sieve_mobius(50)
    with pytest.raises(ValueError):
        t.values[3] = 9


def test_cache_roundtrip(tmp_path):
    t = sieve_tau_k(1234, 4)
    path = tmp_path / "t4.gmft"
    save_table(t, path)
    back = load_table(path)
    assert back.kind == t.kind
    assert back.limit == t.limit
    assert back.k == t.k
    assert np.array_equal(back.values, t.values)
    assert path.read_bytes()[:4] == b"GMFT"


def test_cache_rejects_garbage(tmp_path):
    bad = tmp_path / "bad.gmft"
    bad.write_bytes(b"NOPE" + bytes(20))
    with pytest.raises(ConfigError):
        load_table(bad)

    good = tmp_path / "ok.gmft"
    save_table(sieve_mobius(100), good)
    clipped = tmp_path / "clip.gmft"
    clipped.write_bytes(good.read_bytes()[:-7])
    with pytest.raises(ConfigError):
        load_table(clipped)


def test_sieve_set_require():
    ss = build_sieve_set(100)
    ss.require(100, "op")
    with pytest.raises(RangeError):
        ss.require(101, "op")
