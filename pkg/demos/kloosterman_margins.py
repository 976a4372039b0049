"""Kloosterman eigenvalue margins: the normalized |lambda_S(p^nu)| never gets
close to zero in scanned ranges, unlike a synthetic recursion seeded at a
root-of-unity ratio.

Run:  python3 demos/kloosterman_margins.py
"""

from gapsieve.kloosterman import (kloosterman_even_prime_power,
                                  kloosterman_sum, lambda_S, synthetic_zero_scan,
                                  verify_prop4)

print("S(1,1;p) for small p:",
      {p: round(kloosterman_sum(1, 1, p).real, 4) for p in (3, 5, 7, 11)})
print("lambda_S(3^2) =", lambda_S(3, 2), " (exactly -2)")

rep = verify_prop4(200, 30, precision_bits=128)
print(f"\nscan p <= {rep.p_max}, nu <= {rep.nu_max}: "
      f"min normalized margin {rep.min_margin:.3e} at (p,nu)={rep.argmin}")
print("near-zeros below 1e-6:", rep.near_zeros,
      "| inconclusive:", rep.inconclusive)

# closed form for even prime powers vs direct summation
for p in (3, 5, 7):
    for nu in (1, 2):
        direct = kloosterman_sum(1, 1, p ** (2 * nu))
        closed = kloosterman_even_prime_power(p, nu)
        print(f"S(1,1;{p}^{2*nu}): direct {direct.real:+.6f}  "
              f"closed {closed.real:+.6f}  diff {abs(direct - closed):.1e}")

# what a genuine zero would look like: lambda(p) = 0 forces alpha/beta = -1
print("\nsynthetic lambda(p)=0 recursion vanishes at nu =",
      synthetic_zero_scan(0.0, 5, 12))
