"""Oracles for the basic arithmetic layer: naive sieves, trial division,
and direct elliptic point counts."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapsieve.arith import (ec_discriminant, ec_trace, euler_phi, factorize,
                            is_prime, liouville, mobius, primes_in)
from gapsieve.errors import BadReductionError


def naive_primes(lo, hi):
    out = []
    for n in range(max(2, lo), hi + 1):
        if all(n % d for d in range(2, int(math.isqrt(n)) + 1)):
            out.append(n)
    return out


def test_primes_in_matches_naive_sieve():
    assert list(primes_in(2, 200)) == naive_primes(2, 200)
    assert list(primes_in(1000, 1100)) == naive_primes(1000, 1100)
    # crossing the precomputed-table boundary
    assert list(primes_in(999980, 1000020)) == naive_primes(999980, 1000020)


def test_primes_in_empty_and_edges():
    assert list(primes_in(8, 10)) == []
    assert list(primes_in(2, 2)) == [2]
    assert list(primes_in(13, 13)) == [13]


def test_factorize_recomposes():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(2, 10**9)
        f = factorize(n)
        prod = 1
        for p, e in f:
            assert is_prime(p)
            prod *= p**e
        assert prod == n


def test_factorize_known():
    assert sorted(factorize(360)) == [(2, 3), (3, 2), (5, 1)]
    assert sorted(factorize(2**31 - 1)) == [(2**31 - 1, 1)]


@given(st.integers(min_value=2, max_value=5000))
@settings(max_examples=200, deadline=None)
def test_is_prime_agrees_with_trial_division(n):
    naive = all(n % d for d in range(2, int(math.isqrt(n)) + 1))
    assert is_prime(n) == naive


def test_multiplicative_functions():
    # mu: squarefree sign; lambda: parity of Omega; phi via totient sum
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0,
                                                 0, 1]
    assert [liouville(n) for n in range(1, 9)] == [1, -1, -1, 1, -1, 1, -1,
                                                   -1]
    for n in range(1, 200):
        assert sum(euler_phi(d) for d in range(1, n + 1) if n % d == 0) == n


def _count_points(a4, a6, p):
    n = 0
    for x in range(p):
        for y in range(p):
            if (y * y - x**3 - a4 * x - a6) % p == 0:
                n += 1
    return n + 1  # point at infinity


@pytest.mark.parametrize("a4,a6,p", [(0, 1, 5), (0, 1, 7), (0, 1, 13),
                                     (2, 3, 13), (-1, 1, 17), (1, 0, 19)])
def test_ec_trace_matches_point_count(a4, a6, p):
    assert ec_trace(a4, a6, p) == p + 1 - _count_points(a4, a6, p)


def test_ec_trace_examples_and_bad_reduction():
    assert ec_trace(0, 1, 5) == 0
    assert ec_trace(0, 1, 7) == -4
    assert ec_discriminant(0, 1) == -432
    with pytest.raises(BadReductionError):
        ec_trace(0, 1, 3)  # 3 | disc
    with pytest.raises(ValueError):
        ec_trace(0, 1, 4)


def test_hasse_bound_holds():
    for p in primes_in(5, 60):
        if p in (2, 3):
            continue
        try:
            a = ec_trace(2, 3, p)
        except BadReductionError:
            continue
        assert a * a <= 4 * p
