"""Exact tables of multiplicative arithmetic functions.

Everything downstream consumes flat integer tables: the Mobius function mu,
the divisor-count functions tau_k, the self-convolution mu*mu and the
squarefree indicator mu^2. Tables are built with vectorized strided passes
over numpy arrays (one pass per prime up to sqrt(N) plus a leftover-prime
fixup), hold exact 32-bit integers, and are immutable after construction.

A small binary cache format exists for tables that are expensive to rebuild;
correctness never depends on it.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from enum import IntEnum
from math import isqrt

import numpy as np

from .errors import ConfigError, RangeError

__all__ = [
    "TableKind",
    "FunctionTable",
    "SieveSet",
    "sieve_mobius",
    "sieve_mu_squared",
    "sieve_tau_k",
    "sieve_ones",
    "dirichlet_convolve",
    "mu_star_mu_closed_form",
    "build_sieve_set",
    "save_table",
    "load_table",
]

TABLE_LIMIT_CAP = 10 ** 8  # larger tables have no consumer in this package

_MAGIC = b"GMFT"
_VERSION = 1
_HEADER = struct.Struct("<4sIBBQ")  # magic, version u32, kind u8, k u8, N u64


class TableKind(IntEnum):
    """Which arithmetic function a table holds. Values double as cache-file codes."""

    MOBIUS = 0
    TAU = 1
    TAU_K = 2
    MU_STAR_MU = 3
    MU_SQUARED = 4
    ONE = 5
    CUSTOM = 6


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Exact values of an arithmetic function on 1..limit.

    values has length limit + 1 with index 0 unused (kept zero) so that
    values[n] is the value at n. dtype is int32; accumulations that may
    exceed 32 bits happen in wider types at the point of use.
    """

    kind: TableKind
    limit: int
    values: np.ndarray
    k: int = 0

    def __post_init__(self):
        if self.limit < 1:
            raise ConfigError("table limit must be >= 1")
        if self.values.dtype != np.int32 or self.values.shape != (self.limit + 1,):
            raise ConfigError("table values must be int32 of length limit + 1")
        if self.values[1] != 1:
            raise ConfigError("every supported arithmetic function has value 1 at n = 1")
        self.values.setflags(write=False)


def _check_limit(limit: int) -> int:
    limit = int(limit)
    if limit < 1:
        raise ConfigError("sieve limit must be a positive integer")
    if limit > TABLE_LIMIT_CAP:
        raise RangeError(f"sieve limit {limit} exceeds the supported cap {TABLE_LIMIT_CAP}")
    return limit


def _primes_upto(n: int) -> np.ndarray:
    """All primes <= n by a plain boolean sieve."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.nonzero(is_p)[0].astype(np.int64)


def sieve_mobius(limit: int) -> FunctionTable:
    """mu(n) for n <= limit.

    Strided passes over primes p <= sqrt(limit) flip the sign once per small
    prime factor and zero out multiples of p^2. Any n whose small-prime part
    falls short of n has exactly one leftover prime factor > sqrt(limit)
    (two such factors would exceed limit), which flips the sign once more.
    """
    limit = _check_limit(limit)
    mu = np.ones(limit + 1, dtype=np.int32)
    kernel = np.ones(limit + 1, dtype=np.int64)  # product of distinct small primes dividing n
    for p in _primes_upto(isqrt(limit)):
        p = int(p)
        mu[p::p] *= -1
        kernel[p::p] *= p
        mu[p * p :: p * p] = 0
    leftover = kernel != np.arange(limit + 1, dtype=np.int64)
    mu[leftover] *= -1
    mu[0] = 0
    return FunctionTable(TableKind.MOBIUS, limit, mu)


def sieve_mu_squared(limit: int) -> FunctionTable:
    """Squarefree indicator mu(n)^2: 1 unless some p^2 divides n."""
    limit = _check_limit(limit)
    vals = np.ones(limit + 1, dtype=np.int32)
    for p in _primes_upto(isqrt(limit)):
        p = int(p)
        vals[p * p :: p * p] = 0
    vals[0] = 0
    return FunctionTable(TableKind.MU_SQUARED, limit, vals)


def _tau_values(limit: int) -> np.ndarray:
    """tau(n) by divisor pairing: each divisor d <= sqrt(n) contributes the
    pair (d, n/d), twice unless n = d^2."""
    tau = np.zeros(limit + 1, dtype=np.int32)
    for d in range(1, isqrt(limit) + 1):
        tau[d * d :: d] += 2
        tau[d * d] -= 1
    return tau


def sieve_ones(limit: int) -> FunctionTable:
    """The constant function 1, the unit of repeated convolution for tau_k."""
    limit = _check_limit(limit)
    vals = np.ones(limit + 1, dtype=np.int32)
    vals[0] = 0
    return FunctionTable(TableKind.ONE, limit, vals)


def sieve_tau_k(limit: int, k: int) -> FunctionTable:
    """tau_k(n): ordered k-tuples of positive integers with product n.

    k = 2 is the plain divisor count, built directly. k >= 3 is built by
    convolving tau_{k-1} with the constant function 1.
    """
    limit = _check_limit(limit)
    if not 2 <= k <= 5:
        raise ConfigError("tau_k supports 2 <= k <= 5 only; larger k has no consumer here")
    if k == 2:
        return FunctionTable(TableKind.TAU, limit, _tau_values(limit), k=2)
    ones = sieve_ones(limit)
    table = FunctionTable(TableKind.TAU, limit, _tau_values(limit), k=2)
    for kk in range(3, k + 1):
        conv = dirichlet_convolve(table, ones)
        table = FunctionTable(TableKind.TAU_K, limit, conv.values, k=kk)
    return table


def dirichlet_convolve(f: FunctionTable, g: FunctionTable) -> FunctionTable:
    """(f*g)(n) = sum over d | n of f(d) g(n/d), exactly, for n <= limit.

    Multiples enumeration: for each d with f(d) != 0, add f(d) * g(m) at
    n = d*m for all m <= limit/d. Total work is O(N log N) additions.
    """
    if f.limit != g.limit:
        raise ConfigError("dirichlet_convolve requires tables with equal limits")
    limit = f.limit
    fv = f.values
    gv = g.values.astype(np.int64)
    out = np.zeros(limit + 1, dtype=np.int64)
    for d in np.nonzero(fv[1:])[0] + 1:
        d = int(d)
        out[d::d] += fv[d] * gv[1 : limit // d + 1]
    hi = int(np.abs(out).max())
    if hi > np.iinfo(np.int32).max:
        raise RangeError("convolution result exceeds the 32-bit table entry width")
    return FunctionTable(TableKind.CUSTOM, limit, out.astype(np.int32))


def mu_star_mu_closed_form(limit: int) -> FunctionTable:
    """(mu*mu)(n) from the prime-power pattern, without convolving.

    mu*mu is multiplicative with (mu*mu)(p) = -2, (mu*mu)(p^2) = 1 and 0 at
    p^e for e >= 3 (a divisor pair of p^e with e >= 3 always contains a cube
    or higher, killing both mu factors). So on cubefree n the value is
    (-2)^(number of primes dividing n exactly once), else 0.

    The exactly-once count gets +1 on multiples of p and -1 on multiples of
    p^2 for each prime p <= sqrt(limit); a leftover prime factor above
    sqrt(limit) (detected by dividing out all small prime powers) is
    necessarily simple and adds one more.
    """
    limit = _check_limit(limit)
    once = np.zeros(limit + 1, dtype=np.int8)
    cubed = np.zeros(limit + 1, dtype=bool)
    rem = np.arange(limit + 1, dtype=np.int64)
    for p in _primes_upto(isqrt(limit)):
        p = int(p)
        once[p::p] += 1
        if p * p <= limit:
            once[p * p :: p * p] -= 1
        if p * p * p <= limit:
            cubed[p * p * p :: p * p * p] = True
        q = p
        while q <= limit:
            rem[q::q] //= p
            q *= p
    once[rem > 1] += 1
    # ten distinct primes already exceed 10^8, so the exponent stays tiny
    lut = (-2) ** np.arange(16, dtype=np.int64)
    vals = lut[once].astype(np.int32)
    vals[cubed] = 0
    vals[0] = 0
    return FunctionTable(TableKind.MU_STAR_MU, limit, vals)


@dataclass(frozen=True, eq=False)
class SieveSet:
    """The family of tables the summatory and analysis modules consume,
    built once and shared. divisor_prefix[n] = sum of tau(m) for m <= n,
    precomputed because the fast summatory route looks it up densely."""

    limit: int
    mobius: FunctionTable
    mu_squared: FunctionTable
    mu_star_mu: FunctionTable
    mu_star_mu_sq: FunctionTable
    tau: FunctionTable
    divisor_prefix: np.ndarray
    tau_k: dict = field(default_factory=dict)

    def require(self, needed: int, what: str) -> None:
        if self.limit < needed:
            raise RangeError(f"{what} needs tables up to {needed}, but the sieve set stops at {self.limit}")


def build_sieve_set(limit: int, extra_tau: tuple = ()) -> SieveSet:
    """Build every table at the given limit. extra_tau lists additional
    tau_k orders (k in 3..5) to include."""
    limit = _check_limit(limit)
    mobius = sieve_mobius(limit)
    mu_sq = sieve_mu_squared(limit)
    mumu = mu_star_mu_closed_form(limit)
    # mu * mu^2 is supported on perfect squares: both factors of a divisor
    # pair (d, n/d) are squarefree only when n = m^2 with d = m squarefree,
    # and the surviving term is mu(m). Cross-checked against the convolution
    # in the test suite; built directly here.
    mmsq = np.zeros(limit + 1, dtype=np.int32)
    ms = np.arange(1, isqrt(limit) + 1)
    mmsq[ms * ms] = mobius.values[ms]
    mu_star_mu_sq = FunctionTable(TableKind.CUSTOM, limit, mmsq)
    tau = sieve_tau_k(limit, 2)
    dprefix = np.cumsum(tau.values, dtype=np.int64)
    dprefix.setflags(write=False)
    tau_k = {}
    for k in extra_tau:
        tau_k[int(k)] = sieve_tau_k(limit, int(k))
    return SieveSet(
        limit=limit,
        mobius=mobius,
        mu_squared=mu_sq,
        mu_star_mu=mumu,
        mu_star_mu_sq=mu_star_mu_sq,
        tau=tau,
        divisor_prefix=dprefix,
        tau_k=tau_k,
    )


def save_table(table: FunctionTable, path: str | os.PathLike) -> None:
    """Write a table to the little-endian binary cache format."""
    header = _HEADER.pack(_MAGIC, _VERSION, int(table.kind), table.k, table.limit)
    body = table.values[1:].astype("<i4", copy=False)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(body.tobytes())


def load_table(path: str | os.PathLike) -> FunctionTable:
    """Read a table written by save_table, validating the header."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) != _HEADER.size:
            raise ConfigError(f"{path}: truncated table header")
        magic, version, kind, k, n = _HEADER.unpack(raw)
        if magic != _MAGIC:
            raise ConfigError(f"{path}: not a table cache file")
        if version != _VERSION:
            raise ConfigError(f"{path}: unsupported cache version {version}")
        body = fh.read(4 * n)
    if len(body) != 4 * n:
        raise ConfigError(f"{path}: truncated table body")
    vals = np.zeros(n + 1, dtype=np.int32)
    vals[1:] = np.frombuffer(body, dtype="<i4")
    return FunctionTable(TableKind(kind), int(n), vals, k=k)
