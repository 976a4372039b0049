"""Walk the theta(rho) landscape: per-formula values, the piecewise optimum,
and the historical record at rho = 1.

Run:  python3 demos/exponent_table.py
"""

from fractions import Fraction as Q

from gapsieve.exponents import (DEFAULT_SEEDS, format_theta, historical_table,
                                optimize_theta, theta_cor10, theta_profile,
                                theta_thm2)

print("rho        thm2       table      optimizer  winner")
for rho in (Q(1, 5), Q(1, 3), Q(1, 2), Q(9, 17), Q(15, 28), Q(7, 10),
            Q(3, 4), Q(9, 10), Q(1)):
    t, wit = optimize_theta(rho)
    label = wit if isinstance(wit, str) else "prop7_69"
    print(f"{str(rho):8}   {str(theta_thm2(rho)):8}   "
          f"{str(theta_cor10(rho)):8}   {str(t):8}   {label}")

assert all(optimize_theta(Q(k, 100))[0] == theta_cor10(Q(k, 100))
           for k in range(101))

# the prime-only exponent is better exactly up to rho = 1/3
cross = [Q(k, 60) for k in range(1, 61)
         if theta_thm2(Q(k, 60)) < theta_cor10(Q(k, 60))]
print("\nprime-only weights win for rho <", max(cross) + Q(1, 60))

# opting into the full A/B closure sharpens the mid-range table
sharper = [(k, optimize_theta(Q(k, 100), closure="hull")[0])
           for k in range(101)
           if optimize_theta(Q(k, 100), closure="hull")[0]
           < theta_cor10(Q(k, 100))]
print(f"full hull closure improves {len(sharper)} of 101 grid points, "
      f"e.g. rho=0.60 -> {sharper[len(sharper)//2][1]}")

print("\nshort-interval exponent history (rho = 1):")
for theta, who in historical_table():
    print(f"  {format_theta(theta):12} {who}")

prof = theta_profile(Q(1), pair=DEFAULT_SEEDS[1])
print("\nper-formula values at rho=1:",
      {k: str(v) for k, v in sorted(prof.values.items())})
print("winner:", prof.winner_id, "=", format_theta(prof.winner_value))
