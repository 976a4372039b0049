"""Kloosterman sums: symmetry/identity oracles and the margin scanner."""

import math

import mpmath
import pytest

from gapsieve.kloosterman import (kloosterman_even_prime_power,
                                  kloosterman_sum, lambda_S,
                                  lambda_S_sequence, synthetic_zero_scan,
                                  verify_prop4)


def test_small_values_direct():
    # S(1,1;2) = e(2*1/2)... units mod 2 = {1}: e((1+1)/2) = e(1) = 1
    assert abs(kloosterman_sum(1, 1, 2) - 1.0) < 1e-12
    # S(1,1;3): x in {1,2}, e(2/3) + e((2+2)/3) = 2 cos(2pi/3) = -1
    assert abs(kloosterman_sum(1, 1, 3) - (-1.0)) < 1e-12
    assert kloosterman_sum(0, 0, 1) == 1.0


def test_sum_is_real_and_selberg_multiplicative():
    for c in (5, 7, 9, 11, 12, 35):
        s = kloosterman_sum(1, 1, c)
        assert abs(s.imag) < 1e-9
    # twisted multiplicativity: S(1,1;mn) = S(m̄,m̄;n) S(n̄,n̄;m), (m,n)=1
    for m, n in [(3, 5), (4, 7), (5, 9)]:
        mb = pow(m, -1, n)
        nb = pow(n, -1, m)
        lhs = kloosterman_sum(1, 1, m * n)
        rhs = kloosterman_sum(mb, mb, n) * kloosterman_sum(nb, nb, m)
        assert abs(lhs - rhs) < 1e-7


def test_weil_bound():
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        s = kloosterman_sum(1, 1, p)
        assert abs(s) <= 2 * math.sqrt(p) + 1e-9


def test_high_precision_agrees_with_float64():
    for c in (7, 23, 101):
        lo = kloosterman_sum(1, 1, c)
        hi = kloosterman_sum(1, 1, c, precision_bits=200)
        assert abs(complex(hi) - lo) < 1e-10


def test_lambda_S_recursion_values():
    # lambda_S(3^2) = S(1,1;3)^2 - 3 = 1 - 3 = -2
    assert abs(lambda_S(3, 2) - (-2)) < 1e-20
    seq = lambda_S_sequence(5, 4)
    S5 = kloosterman_sum(1, 1, 5, 200).real
    assert abs(float(seq[1]) - float(S5)) < 1e-12
    assert abs(float(seq[3]) - (float(S5) ** 3 - 2 * 5 * float(S5))) < 1e-9


def test_even_prime_power_closed_form():
    for p in (3, 5, 7):
        for nu in (1, 2):
            c = p ** (2 * nu)
            direct = kloosterman_sum(1, 1, c, precision_bits=100)
            closed = kloosterman_even_prime_power(p, nu, precision_bits=100)
            assert abs(complex(direct) - complex(closed)) < 1e-9
    with pytest.raises(ValueError):
        kloosterman_even_prime_power(2, 1)


def test_verify_prop4_small_scan():
    rep = verify_prop4(50, 10, precision_bits=128)
    assert rep.near_zeros == []
    assert not rep.inconclusive
    assert rep.min_margin > 1e-6
    # margin at the reported argmin recomputes to the reported minimum
    p, nu = rep.argmin
    with mpmath.workprec(128):
        val = abs(lambda_S(p, nu)) / mpmath.sqrt(p) ** nu
    assert abs(float(val) - rep.min_margin) < 1e-9


def test_synthetic_zero_scan_detects_planted_zeros():
    # lambda(p) = 0 -> alpha/beta = -1 -> zeros at every odd order
    assert synthetic_zero_scan(0.0, 5, 9) == [1, 3, 5, 7, 9]
    # lambda(p) = sqrt(p) -> alpha/beta primitive 3rd root -> zeros at 2 mod 3
    assert synthetic_zero_scan(math.sqrt(5), 5, 12) == [2, 5, 8, 11]
    # lambda(p) = sqrt(3p) -> primitive 6th root -> zeros at 5 mod 6
    assert synthetic_zero_scan(math.sqrt(15), 5, 12) == [5, 11]
    # a generic value has no zeros
    assert synthetic_zero_scan(1.25, 5, 12) == []
