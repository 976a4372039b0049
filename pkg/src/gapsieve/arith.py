"""Exact integer substrate: primes, factorization, multiplicative functions,
elliptic-curve traces.

All arithmetic is exact (Python big integers); nothing here overflows
silently.  The prime table is built lazily once and is thereafter read-only,
so every operation is safe to call from concurrent tasks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import BadReductionError, ResourceBudgetError

_SMALL_PRIME_LIMIT = 10**6
_prime_table: np.ndarray | None = None  # primes < _SMALL_PRIME_LIMIT


def _small_primes() -> np.ndarray:
    global _prime_table
    if _prime_table is None:
        is_p = np.ones(_SMALL_PRIME_LIMIT, dtype=bool)
        is_p[:2] = False
        for p in range(2, int(_SMALL_PRIME_LIMIT**0.5) + 1):
            if is_p[p]:
                is_p[p * p::p] = False
        _prime_table = np.flatnonzero(is_p).astype(np.int64)
    return _prime_table


def primes_in(lo: int, hi: int, memory_budget_mb: int = 1024) -> list[int]:
    """All primes in [lo, hi], ascending, by a segmented Eratosthenes sieve.

    Raises ResourceBudgetError if the segment would not fit the budget.
    """
    if not (2 <= lo <= hi):
        raise ValueError("need 2 <= lo <= hi")
    width = hi - lo + 1
    if width > memory_budget_mb * (1 << 20):
        raise ResourceBudgetError(
            f"segment of width {width} exceeds {memory_budget_mb} MB budget")
    root = math.isqrt(hi)
    if root >= _SMALL_PRIME_LIMIT:
        base = _sieve_upto(root, memory_budget_mb)
    else:
        sp = _small_primes()
        base = sp[sp <= root]
    mask = np.ones(width, dtype=bool)
    if lo == 2:
        pass
    for p in base:
        p = int(p)
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        mask[start - lo::p] = False
    if lo <= 1:
        mask[:2 - lo] = False
    return [int(n) for n in np.flatnonzero(mask) + lo]


def _sieve_upto(n: int, memory_budget_mb: int) -> np.ndarray:
    if n + 1 > memory_budget_mb * (1 << 20):
        raise ResourceBudgetError(f"sieve to {n} exceeds budget")
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return np.flatnonzero(is_p).astype(np.int64)


@dataclass(frozen=True)
class Factorization:
    """Canonical factorization: strictly increasing primes, exponents >= 1."""
    value: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24; strong bases beyond)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


def factorize(n: int) -> Factorization:
    """Trial division over the prime table up to 10^6, Pollard rho fallback."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    value = n
    out: list[tuple[int, int]] = []
    for p in _small_primes():
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        if n < _SMALL_PRIME_LIMIT**2 or is_prime(n):
            out.append((n, 1))
        else:
            # rare big-composite path: split recursively
            big: dict[int, int] = {}
            stack = [n]
            while stack:
                m = stack.pop()
                if is_prime(m):
                    big[m] = big.get(m, 0) + 1
                else:
                    d = _pollard_rho(m)
                    stack.extend([d, m // d])
            out.extend(sorted(big.items()))
    out.sort()
    return Factorization(value=value, factors=tuple(out))


def mult_fn(kind: str, n: int) -> int:
    """Standard multiplicative functions: mobius, liouville, euler_phi, divisor_count."""
    if n < 1:
        raise ValueError("n >= 1 required")
    fac = factorize(n)
    if kind == "mobius":
        if any(e > 1 for _, e in fac):
            return 0
        return -1 if len(fac.factors) % 2 else 1
    if kind == "liouville":
        return -1 if sum(e for _, e in fac) % 2 else 1
    if kind == "euler_phi":
        return reduce(lambda acc, pe: acc // pe[0] * (pe[0] - 1),
                      fac.factors, n)
    if kind == "divisor_count":
        return reduce(lambda acc, pe: acc * (pe[1] + 1), fac.factors, 1)
    raise ValueError(f"unknown multiplicative function {kind!r}")


def mobius(n: int) -> int:
    return mult_fn("mobius", n)


def liouville(n: int) -> int:
    return mult_fn("liouville", n)


def euler_phi(n: int) -> int:
    return mult_fn("euler_phi", n)


def divisor_count(n: int) -> int:
    return mult_fn("divisor_count", n)


def ec_discriminant(a4: int, a6: int) -> int:
    return -16 * (4 * a4**3 + 27 * a6**2)


def ec_trace(a4: int, a6: int, p: int) -> int:
    """Trace of Frobenius a_p = p + 1 - #E(F_p) for y^2 = x^3 + a4 x + a6.

    Exhaustive point count via Legendre symbols; |a_p| <= 2*sqrt(p) (Hasse).
    Requires odd prime p of good reduction.
    """
    if p < 3 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if ec_discriminant(a4, a6) % p == 0:
        raise BadReductionError(f"curve ({a4},{a6}) is singular mod {p}")
    half = (p - 1) // 2
    total = 0
    for x in range(p):
        v = (x * x * x + a4 * x + a6) % p
        if v == 0:
            continue
        ls = pow(v, half, p)
        total += 1 if ls == 1 else -1
    # #E(F_p) = p + 1 + sum_x legendre(f(x)), so a_p = -sum_x legendre(f(x))
    return -total
