"""End-to-end acceptance gate.

Thirteen criteria, each with an explicit tolerance and a soft time budget.
Every test prints a single PASS/FAIL line so the suite output doubles as a
checklist.  Tolerances are stated inline; nothing here is weakened relative
to the module-level suites -- these are the headline numbers.
"""

import math
import random
import time
from fractions import Fraction as Q

from gapsieve.bfree import (gap_scan, sieve_interval, squarefree_bset,
                            support_count_cor7)
from gapsieve.expsum import (SumSpec, bilinear_r_sum, linear_r_sum,
                             quadruple_count, type2_sum, unimodular_coeffs)
from gapsieve.exponents import (DEFAULT_SEEDS, ExponentPair,
                                minimal_theta_from_constraints,
                                optimize_theta, theta_cor10)
from gapsieve.hecke import (delta_form, elliptic_form, integer_form_criterion,
                            tau_series)
from gapsieve.kloosterman import (kloosterman_even_prime_power,
                                  kloosterman_sum, verify_prop4)
from gapsieve.sieveweights import (WeightSystem, buchstab_w, decomposition_A,
                                   fundamental_lemma_weights, remainder_r,
                                   sandwich_values)

import cmath
import numpy as np


def _report(name, ok, elapsed, limit):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"[{status}] {name}: {elapsed:.2f}s (limit {limit:.0f}s)")
    assert ok, name
    assert elapsed < limit, f"{name} exceeded {limit}s ({elapsed:.2f}s)"


def test_criterion_01_exponent_table():
    t0 = time.time()
    table = [(Q(1), Q(7, 17)), (Q(3, 4), Q(33, 94)), (Q(1, 2), Q(10, 33)),
             (Q(9, 17), Q(9, 29)), (Q(15, 28), Q(5, 16)),
             (Q(9, 10), Q(9, 23)), (Q(1, 3), Q(1, 4)), (Q(1, 5), Q(1, 4)),
             (Q(0), Q(1, 4))]
    ok = all(theta_cor10(r) == want for r, want in table)
    _report("01 exponent table (exact rationals)", ok, time.time() - t0, 1)


def test_criterion_02_constraint_solver_equivalence():
    t0 = time.time()
    rng = random.Random(2024)
    ok = True
    for _ in range(1000):
        r = Q(rng.randint(1, 10**4), 10**4)
        # closed form for the unpaired bilinear system: 7rho/(9rho+8)
        t, _ = minimal_theta_from_constraints(r, "718")
        ok &= t == 7 * r / (9 * r + 8)
        # paired system at a random valid pair
        k = Q(rng.randint(0, 50), 100)
        l = Q(rng.randint(50, 100), 100)
        p = ExponentPair(k, l)
        t, _ = minimal_theta_from_constraints(r, "719", pair=p)
        ok &= t == (1 + k + 2 * l) * r / ((1 + 2 * k + 2 * l) * r + 2 + 2 * l)
        # one-factor closed forms: 10rho/(19rho+7) and 3rho/(4rho+3)
        t, _ = minimal_theta_from_constraints(r, "811a")
        ok &= t == 10 * r / (19 * r + 7)
        t, _ = minimal_theta_from_constraints(r, "811b")
        ok &= t == 3 * r / (4 * r + 3)
    _report("02 constraint-solver closed forms, 1000 rationals", ok,
            time.time() - t0, 5)


def test_criterion_03_hull_optimization():
    t0 = time.time()
    assert DEFAULT_SEEDS[0].as_tuple() == (Q(0), Q(1))
    assert DEFAULT_SEEDS[1].as_tuple() == (Q(4, 18), Q(11, 18))
    ok = all(optimize_theta(Q(k, 100), seeds=DEFAULT_SEEDS, depth=6)[0]
             == theta_cor10(Q(k, 100)) for k in range(101))
    _report("03 optimize_theta == theta_cor10 on {k/100}", ok,
            time.time() - t0, 10)


def test_criterion_04_hecke_engine():
    t0 = time.time()
    limit = 10**4
    # independent oracle: expand prod (1-q^m)^24 as 24 multiplications by
    # Euler's pentagonal-number series (sparse, so this stays fast)
    terms = [(0, 1)]
    k = 1
    while True:
        g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
        s = -1 if k % 2 else 1
        added = False
        if g1 < limit:
            terms.append((g1, s))
            added = True
        if g2 < limit:
            terms.append((g2, s))
            added = True
        if not added:
            break
        k += 1
    poly = [0] * limit
    poly[0] = 1
    for _ in range(24):
        nxt = [0] * limit
        for off, s in terms:
            if s == 1:
                for i in range(limit - off):
                    nxt[i + off] += poly[i]
            else:
                for i in range(limit - off):
                    nxt[i + off] -= poly[i]
        poly = nxt
    series = tau_series(limit)
    ok = series == poly
    # tau(p^2) = tau(p)^2 - p^11 for p <= 10^3
    big = tau_series(10**6)
    for p in range(2, 1001):
        if any(p % d == 0 for d in range(2, int(math.isqrt(p)) + 1)):
            continue
        ok &= big[p * p - 1] == big[p - 1] ** 2 - p**11
    _report("04 Hecke engine vs q-expansion (n<=1e4) + tau recursion "
            "(p<=1e3)", ok, time.time() - t0, 30)


def test_criterion_05_integer_form_criterion():
    t0 = time.time()
    hits_delta = integer_form_criterion(delta_form(), 10**3, 50)
    hits_ec = integer_form_criterion(elliptic_form(0, 1), 200, 30)
    ok = hits_delta == [] and hits_ec == []
    _report("05 integer-form vanishing criterion empty (delta, elliptic)",
            ok, time.time() - t0, 30)


def test_criterion_06_kloosterman():
    t0 = time.time()
    rep = verify_prop4(200, 30, 128)
    ok = rep.near_zeros == [] and not rep.inconclusive \
        and rep.min_margin > 1e-6
    for p in (3, 5, 7):
        for nu in (1, 2):
            direct = kloosterman_sum(1, 1, p ** (2 * nu), precision_bits=100)
            closed = kloosterman_even_prime_power(p, nu, precision_bits=100)
            ok &= abs(complex(direct) - complex(closed)) < 1e-9
    _report("06 Kloosterman margins (200,30,128) + even-power identity 1e-9",
            ok, time.time() - t0, 30)


def test_criterion_07_bfree_sieve():
    t0 = time.time()
    rng = random.Random(7)
    B = squarefree_bset()
    ok = True
    for _ in range(200):
        x = rng.randint(0, 10**6 - 1)
        y = rng.randint(1, min(3000, 10**6 - x))
        rep = sieve_interval(x, y, B)
        members = B.members_up_to(x + y)
        oracle = [all(n % b for b in members)
                  for n in range(x + 1, x + y + 1)]
        ok &= rep.positions.tolist() == oracle
    rep = sieve_interval(10**6, 10**5, B)
    dens = rep.bfree_count / 10**5
    ok &= abs(dens - 6 / math.pi**2) < 0.01 * (6 / math.pi**2)
    _report("07 B-free sieve oracle x200 + density within 1% of 6/pi^2",
            ok, time.time() - t0, 60)


def test_criterion_08_support_count():
    t0 = time.time()
    rng = random.Random(8)
    small_primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    ok = True
    for _ in range(50):
        P = rng.sample(small_primes, rng.randint(1, 3))
        x = rng.randint(0, 10**5 - 1)
        y = rng.randint(1, min(2000, 10**5 - x))
        rep = support_count_cor7(P, x, y)
        ok &= rep.exact_count == rep.liouville_count
    _report("08 even-valuation count == Liouville identity, 50 instances",
            ok, time.time() - t0, 10)


def test_criterion_09_weight_machinery():
    t0 = time.time()
    rng = random.Random(9)
    ok = True
    # ten truncated-Moebius systems, sandwich on all n <= 1e5
    n_max = 10**5
    for _ in range(10):
        z = rng.randint(3, 25)
        Qcap = rng.randint(2, 10**4)
        r0 = rng.randint(0, 8)
        lp, lm = fundamental_lemma_weights(z, Qcap, r0)
        up = sandwich_values(lp, n_max)
        dn = sandwich_values(lm, n_max)
        ps = [p for p in range(2, z) if all(p % d for d in range(2, p))]
        truth = np.ones(n_max, dtype=np.int64)
        for p in ps:
            truth[p - 1::p] = 0
        ok &= bool(np.all(dn <= truth) and np.all(truth <= up))
    # twenty decomposition configurations, exact identity + lower bound
    B = squarefree_bset()
    for _ in range(20):
        x = rng.randint(100, 4000)
        y = rng.randint(50, 400)
        quasi = tuple(sorted(rng.sample(range(5, 60), rng.randint(1, 4))))
        primes = tuple(p for p in (2, 3, 5, 7, 11, 13)
                       if rng.random() < 0.6) or (3,)
        W = WeightSystem(x=x, variant="two-factor", theta=Q(2, 5), rho=Q(1),
                         eps=Q(1, 20), eta=Q(1, 100), s=Q(10),
                         delta1=Q(1, 3), delta2=Q(1, 10), delta=None,
                         z=2, Q=1, ell=rng.randint(0, 4),
                         quasi_primes=quasi, prime_window=primes)
        rep = decomposition_A(x, y, B, W)
        ok &= rep.A1 - rep.main_term - rep.R == 0
        ok &= rep.A >= rep.A1 - rep.A2 - rep.A3
    _report("09 sandwich (n<=1e5, 10 systems) + decomposition identity x20",
            ok, time.time() - t0, 60)


def test_criterion_10_buchstab():
    t0 = time.time()
    ok = buchstab_w(1.5) == 2 / 3 and buchstab_w(2.0) == 0.5
    ok &= abs(buchstab_w(10.0) - 0.561459) < 1e-3
    _report("10 Buchstab w(1.5)=2/3, w(2)=1/2 exact; w(10) +-1e-3",
            ok, time.time() - t0, 5)


def test_criterion_11_exponential_sums():
    t0 = time.time()
    ok = True
    for M in (3, 10, 25, 40):
        for alpha in (0.5, 1.5):
            for delta in (1e-6, 1e-2):
                ok &= quadruple_count(M, alpha, delta, "fast") == \
                    quadruple_count(M, alpha, delta, "brute")
    rng = random.Random(11)
    for t in range(20):
        spec = SumSpec(X=rng.uniform(1, 1000), M=rng.randint(2, 30),
                       N=rng.randint(2, 30), alpha=rng.uniform(0.2, 1.5),
                       beta=rng.uniform(0.2, 1.5),
                       phi=("seeded", 10 + t), psi=("seeded", 400 + t))
        got = type2_sum(spec)
        phi = unimodular_coeffs(spec.M, 10 + t + 0)
        psi = unimodular_coeffs(spec.N, 400 + t + 1)
        want = 0j
        for i, m in enumerate(range(spec.M, 2 * spec.M)):
            for j, n in enumerate(range(spec.N, 2 * spec.N)):
                ph = spec.X * (m / spec.M) ** spec.alpha * \
                    (n / spec.N) ** spec.beta
                want += phi[i] * psi[j] * cmath.exp(2j * math.pi * ph)
        ok &= abs(got - want) <= 1e-9 * max(1.0, abs(want))
    _report("11 quadruple fast==brute (M<=40 grid) + type2 vs naive 1e-9",
            ok, time.time() - t0, 60)


def test_criterion_12_remainders():
    t0 = time.time()
    rng = random.Random(12)
    ok = all(abs(remainder_r(rng.randint(1, 10**9),
                             rng.randint(0, 10**9),
                             rng.randint(1, 10**6))) < 1
             for _ in range(10**4))
    for _ in range(50):
        M = rng.randint(1, 6)
        N = rng.randint(1, 6)
        x = rng.randint(0, 1000)
        y = rng.randint(1, 300)
        psi = [Q(rng.randint(-10, 10), 10) for _ in range(N)]
        want = Q(0)
        for j, n in enumerate(range(N, 2 * N)):
            for m in range(M, 2 * M):
                cnt = sum(1 for v in range(x + 1, x + y + 1)
                          if v % (m * n) == 0)
                want += psi[j] * (cnt - Q(y, m * n))
        ok &= bilinear_r_sum(M, N, psi, x, y) == want
        lin = sum((Q(sum(1 for v in range(x + 1, x + y + 1) if v % m == 0))
                   - Q(y, m) for m in range(M, 2 * M)), Q(0))
        ok &= linear_r_sum(M, x, y) == lin
    _report("12 |r|<1 on 1e4 triples + r-sums == enumeration x50",
            ok, time.time() - t0, 10)


def test_criterion_13_tau_gap_scan():
    t0 = time.time()
    series = tau_series(10**5)
    max_gap, _ = gap_scan(lambda n: series[n - 1] != 0, 1, 10**5)
    _report("13 tau nonzero on [1, 1e5]: max_gap == 0",
            max_gap == 0, time.time() - t0, 60)
