"""Exact integer helpers used by the sieve and summatory routes.

Cutoffs like floor(sqrt(x)) and floor(x**0.25) feed exact summation formulas,
so they must never inherit floating-point rounding. math.isqrt is exact by
contract; the fourth root is built on top of it with a correction loop.
"""

from math import isqrt

__all__ = ["isqrt", "integer_fourth_root", "triangular"]


def integer_fourth_root(n: int) -> int:
    """Return floor(n ** (1/4)) exactly for n >= 0.

    isqrt(isqrt(n)) already equals floor(n^(1/4)) for every nonnegative
    integer (floor(sqrt(floor(sqrt(n)))) = floor(n^(1/4)) since sqrt is
    monotone and r <= sqrt(n) < r+1 pins floor(sqrt(r))), but the result is
    re-verified with integer multiplies so an off-by-one can never leak into
    a summation cutoff.
    """
    if n < 0:
        raise ValueError("integer_fourth_root requires n >= 0")
    r = isqrt(isqrt(n))
    while (r + 1) ** 4 <= n:
        r += 1
    while r ** 4 > n:
        r -= 1
    return r


def triangular(n: int) -> int:
    """n-th triangular number 1 + 2 + ... + n (0 for n <= 0)."""
    if n <= 0:
        return 0
    return n * (n + 1) // 2
