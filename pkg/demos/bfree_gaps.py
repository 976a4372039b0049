"""Sieve B-free numbers in short intervals and look at gap statistics,
including the zero-free scan of the discriminant form's coefficients.

Run:  python3 demos/bfree_gaps.py
"""

import math

from gapsieve import (delta_form, gap_scan, generated_bset, sieve_interval,
                      squarefree_bset, tau)
from gapsieve.bfree import density, hecke_nonvanishing_interval

# squarefree density in a short window high up
rep = sieve_interval(10**6, 10**5, squarefree_bset())
print(f"squarefree in (10^6, 10^6+10^5]: {rep.bfree_count}  "
      f"(density {rep.bfree_count / 10**5:.5f}, 6/pi^2 = {6/math.pi**2:.5f})")
print("longest gap in that window:", rep.max_gap)

# a generated B-set with a few genuine primes in P
B = generated_bset(frozenset({2, 3, 7}))
lo, hi, known = density(B, 10**4)
print(f"\nB_P with P={{2,3,7}}: density in [{float(lo):.4f}, {float(hi):.4f}]"
      f" (tail bound {'exact' if known else 'open'})")
rep2 = sieve_interval(5000, 500, B)
print("B-free in (5000, 5500]:", rep2.bfree_count, " max gap:", rep2.max_gap)

# tau never vanishes as far as we can see
max_gap, pos = gap_scan(lambda n: tau(n) != 0, 1, 2 * 10**4)
print("\ntau(n) = 0 gaps on [1, 2*10^4]:", max_gap,
      "(the conjecture says this stays 0 forever)")

# nonvanishing count vs the sieve prediction on the coprime part
nv = hecke_nonvanishing_interval(delta_form(), 1000, 100, "thm1", 1100)
print(f"delta-form nonvanishing on (1000, 1100]: direct {nv.direct_count}, "
      f"sieve {nv.sieve_count}, agree={nv.agreement}")
