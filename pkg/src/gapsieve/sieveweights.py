"""Weighted-sieve machinery: quasi-prime windows, the counting weights
c / c' / c'', exact remainder terms r_d(x,y), Bonferroni-truncated sieve
weights with an exact pointwise sandwich, the A-decomposition identity, and
Buchstab's function.

Window thresholds like x^{delta} are compared exactly: m > x^{p/q} iff
m^q > x^p, via integer roots (gmpy2.iroot).  All identities asserted here are
algebraic and hold at any x; asymptotic inequalities are only reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from .arith import primes_in
from .errors import ConstraintError, ResourceBudgetError
from .exponents import theta_prop7, theta_prop8, theta_thm2

Q = Fraction


# ---------------------------------------------------------------------------
# exact rational-power thresholds
# ---------------------------------------------------------------------------

def floor_power(x: int, expo: Fraction) -> int:
    """floor(x^expo) exactly, for integer x >= 1 and rational expo >= 0."""
    e = Q(expo)
    if x < 1 or e < 0:
        raise ValueError("x >= 1, expo >= 0 required")
    if e == 0:
        return 1
    root, _ = gmpy2.iroot(gmpy2.mpz(x) ** e.numerator, e.denominator)
    return int(root)


def ceil_power(x: int, expo: Fraction) -> int:
    """Smallest integer >= x^expo, exactly."""
    f = floor_power(x, expo)
    e = Q(expo)
    # f == x^expo exactly iff f^den == x^num
    if gmpy2.mpz(f) ** e.denominator == gmpy2.mpz(x) ** e.numerator:
        return f
    return f + 1


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------

def quasi_primes(x: int, delta1: Fraction, eps: Fraction, eta: Fraction,
                 memory_budget_mb: int = 1024) -> list[int]:
    """All m in (x^delta1, x^{delta1+eps}] whose prime factors are all >= x^eta."""
    d1, e, h = Q(delta1), Q(eps), Q(eta)
    if not (0 < h < d1):
        raise ValueError("need 0 < eta < delta1")
    lo = floor_power(x, d1)
    hi = floor_power(x, d1 + e)
    if hi - lo > memory_budget_mb * (1 << 17):
        raise ResourceBudgetError(f"window ({lo}, {hi}] too wide for budget")
    if hi <= lo:
        return []
    zmin = ceil_power(x, h)  # p >= x^eta  <=>  p >= zmin
    keep = np.ones(hi - lo, dtype=bool)  # index i <-> m = lo + 1 + i
    if zmin > 2:
        for p in primes_in(2, min(zmin - 1, hi)):
            start = ((lo + 1 + p - 1) // p) * p
            if start <= hi:
                keep[start - lo - 1::p] = False
    return [int(i) + lo + 1 for i in np.flatnonzero(keep)]


def prime_window(x: int, lo_exp: Fraction, hi_exp: Fraction) -> list[int]:
    """Primes p with x^lo_exp < p <= x^hi_exp."""
    lo = floor_power(x, Q(lo_exp))
    hi = floor_power(x, Q(hi_exp))
    if hi <= lo:
        return []
    return primes_in(max(2, lo + 1), hi)


# ---------------------------------------------------------------------------
# weight system
# ---------------------------------------------------------------------------

@dataclass
class WeightSystem:
    x: int
    variant: str            # "two-factor" | "one-factor" | "prime-only"
    theta: Fraction
    rho: Fraction
    eps: Fraction
    eta: Fraction
    s: Fraction
    delta1: Fraction | None
    delta2: Fraction | None
    delta: Fraction | None
    z: int
    Q: int
    ell: int
    quasi_primes: tuple[int, ...]
    prime_window: tuple[int, ...]
    lambda_plus: dict[int, int] = field(default_factory=dict)
    lambda_minus: dict[int, int] = field(default_factory=dict)


def weight_c(n: int, W: WeightSystem) -> int:
    """The counting weight: two-factor #{(m,p): mp|n}; one-factor #{m: m|n};
    prime-only #{p: p|n}."""
    if W.variant == "two-factor":
        cnt = 0
        for m in W.quasi_primes:
            if n % m == 0:
                t = n // m
                cnt += sum(1 for p in W.prime_window if t % p == 0)
        return cnt
    if W.variant == "one-factor":
        return sum(1 for m in W.quasi_primes if n % m == 0)
    return sum(1 for p in W.prime_window if n % p == 0)


def _weight_moduli(W: WeightSystem) -> list[int]:
    """The moduli q such that c(n) = #{q : q | n} (with multiplicity)."""
    if W.variant == "two-factor":
        return [m * p for m in W.quasi_primes for p in W.prime_window]
    if W.variant == "one-factor":
        return list(W.quasi_primes)
    return list(W.prime_window)


# ---------------------------------------------------------------------------
# remainders
# ---------------------------------------------------------------------------

def remainder_r(d: int, x: int, y) -> Fraction:
    """r_d(x,y) = #{x < n <= x+y : d|n} - y/d, exactly (|r| < 1)."""
    if d < 1:
        raise ValueError("d >= 1 required")
    yq = Q(y)
    count = math.floor((x + yq) / d) - x // d
    return count - yq / d


# ---------------------------------------------------------------------------
# fundamental lemma (Bonferroni truncation)
# ---------------------------------------------------------------------------

def _max_feasible_order(primes_desc: list[int], r: int, Qcap: int) -> int:
    """Largest r' <= r of the same parity such that the product of the r'
    largest primes is <= Qcap (then the order cut alone determines the
    support and no q <= Qcap truncation can bind)."""
    while r > 0:
        prod = 1
        ok = True
        for p in primes_desc[:min(r, len(primes_desc))]:
            prod *= p
            if prod > Qcap:
                ok = False
                break
        if ok:
            return r
        r -= 2
    return r  # 0 or -1


def fundamental_lemma_weights(z: int, Qcap: int, r0: int):
    """Bonferroni-truncated Moebius weights (lambda_plus, lambda_minus).

    lambda_d = mu(d) on squarefree d with all prime factors < z and
    omega(d) <= r, with r even (plus) / odd (minus), adjusted from r0.
    The truncation order is lowered (in steps of 2) until the largest possible
    support element fits under Qcap, so the exact pointwise sandwich
        (lambda_minus * 1)(n) <= [gcd(n, P(z)) = 1] <= (lambda_plus * 1)(n)
    holds for every n (a binding q <= Qcap cut would break it).
    """
    if z < 2 or Qcap < 1 or r0 < 0:
        raise ValueError("need z >= 2, Q >= 1, r0 >= 0")
    ps = primes_in(2, z - 1) if z > 2 else []
    ps_desc = sorted(ps, reverse=True)
    # an order cut >= #primes is vacuous (full Moebius: exact for either side)
    r_plus = r0 if r0 % 2 == 0 else r0 + 1
    r_minus = r0 if r0 % 2 == 1 else r0 + 1
    if r_plus > len(ps):
        r_plus = len(ps) if len(ps) % 2 == 0 else len(ps) + 1
    if r_minus > len(ps):
        r_minus = len(ps) if len(ps) % 2 == 1 else len(ps) + 1
    r_plus = _max_feasible_order(ps_desc, r_plus, Qcap)
    r_minus = _max_feasible_order(ps_desc, r_minus, Qcap)

    def build(rmax: int) -> dict[int, int]:
        if rmax < 0:
            return {}
        out = {1: 1}
        if rmax == 0:
            return out

        def rec(idx: int, d: int, omega: int):
            for i in range(idx, len(ps)):
                nd = d * ps[i]
                if nd > Qcap:
                    break  # primes ascend: later products only grow
                out[nd] = -1 if (omega + 1) % 2 else 1
                if omega + 1 < rmax:
                    rec(i + 1, nd, omega + 1)

        rec(0, 1, 0)
        return out

    return build(r_plus), build(r_minus)


def sandwich_values(weights: dict[int, int], n_max: int) -> np.ndarray:
    """(lambda * 1)(n) for 1 <= n <= n_max, by sieving the support."""
    out = np.zeros(n_max + 1, dtype=np.int64)
    for d, w in weights.items():
        out[d::d] += w
    return out[1:]


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

@dataclass
class DecompositionReport:
    A: int
    A1: int
    A2: int
    A3: int
    R: Fraction
    main_term: Fraction
    separable_main_term: Fraction | None
    coprime_violations: int
    ell: int
    tail_report: dict

    def identity_holds(self) -> bool:
        return self.A1 == self.main_term + self.R

    def to_json_dict(self) -> dict:
        from .config import format_rational
        return {
            "schema": "gapsieve-decomposition v1",
            "A": str(self.A), "A1": str(self.A1),
            "A2": str(self.A2), "A3": str(self.A3),
            "R": format_rational(self.R),
            "main_term": format_rational(self.main_term),
            "separable_main_term":
                None if self.separable_main_term is None
                else format_rational(self.separable_main_term),
            "coprime_violations": self.coprime_violations,
            "ell": self.ell,
            "identity_A1_eq_main_plus_R": {"label": "assert",
                                           "holds": self.identity_holds()},
            "lower_bound_A_ge_A1_minus_A2_minus_A3": {
                "label": "assert",
                "holds": self.A >= self.A1 - self.A2 - self.A3},
            "tail": {k: (format_rational(v) if isinstance(v, Fraction) else v)
                     for k, v in self.tail_report.items()},
        }


def decomposition_A(x: int, y: int, B, W: WeightSystem) -> DecompositionReport:
    """The weighted decomposition A >= A1 - A2 - A3 with the exact identity
    A1 = main_term + R.

    A   = sum of c(n) over B-free n in (x, x+y]
    A1  = sum of c(n) over n not divisible by the first ell members
    A2  = over members b_ell < b <= y, sum of c(n) for b | n
    A3  = over members y < b <= x+y, sum of c(n) for b | n
    R   = sum over subsets sigma of the first ell members and weight moduli q
          of (-1)^{|sigma|} r_L(x,y), L = lcm(d_sigma, q).

    The true lcm is always used (main_term sums y/L), so A1 = main_term + R
    is exact at any x; terms where lcm != product are counted in
    coprime_violations, and the separable main term
    y * sum (-1)^{|sigma|}/d_sigma * sum 1/q is reported alongside.
    """
    if W.ell > 20:
        raise ResourceBudgetError("ell <= 20 required (2^ell subset enumeration)")
    members = B.members_up_to(x + y)
    ell = min(W.ell, len(members))
    head = members[:ell]
    moduli = _weight_moduli(W)

    # direct weighted counts
    cvals = {}
    A = A1 = A2 = A3 = 0
    relevant = set()
    for q in moduli:
        first = (x // q + 1) * q
        for nq in range(first, x + y + 1, q):
            relevant.add(nq)
    for n in relevant:
        c = weight_c(n, W)
        if c == 0:
            continue
        cvals[n] = c
        if all(n % b for b in members):
            A += c
        if all(n % b for b in head):
            A1 += c
    for b in members[ell:]:
        if b <= y:
            A2 += sum(c for n, c in cvals.items() if n % b == 0)
        elif b <= x + y:
            A3 += sum(c for n, c in cvals.items() if n % b == 0)

    # exact identity pieces
    yq = Q(y)
    main = Q(0)
    R = Q(0)
    violations = 0
    sep_sigma = Q(0)
    for mask in range(1 << ell):
        sign = -1 if bin(mask).count("1") % 2 else 1
        d_sigma = 1
        for i in range(ell):
            if mask >> i & 1:
                d_sigma *= head[i]
        sep_sigma += Q(sign, d_sigma)
        for q in moduli:
            L = d_sigma * q // math.gcd(d_sigma, q)
            if L != d_sigma * q:
                violations += 1
            main += sign * yq / L
            R += sign * remainder_r(L, x, y)
    separable = yq * sep_sigma * sum(Q(1, q) for q in moduli)

    tail = {"ell": ell,
            "tail_reciprocal_sum": float(sum(Q(1, b) for b in members[ell:]))}
    return DecompositionReport(A=A, A1=A1, A2=A2, A3=A3, R=R, main_term=main,
                               separable_main_term=separable,
                               coprime_violations=violations, ell=ell,
                               tail_report=tail)


# ---------------------------------------------------------------------------
# Buchstab's function
# ---------------------------------------------------------------------------

_buchstab_grids: dict[tuple[float, float], np.ndarray] = {}


def buchstab_w(t: float, step: float = 1e-4) -> float:
    """w(t) = 1/t on [1,2]; (t w(t))' = w(t-1) beyond, integrated on a grid.

    Exact branch on [1,2]; trapezoid stepping of the delay ODE for t > 2.
    w(t) -> e^{-gamma} ~ 0.561459 as t -> infinity.
    """
    if t < 1:
        raise ValueError("buchstab_w defined for t >= 1")
    if t <= 2:
        return 1.0 / t
    key = (step, math.ceil(t))
    grid = _buchstab_grids.get(key)
    if grid is None:
        grid = _buchstab_grid(float(math.ceil(t)), step)
        _buchstab_grids[key] = grid
    idx = (t - 1.0) / step
    i0 = int(idx)
    if i0 >= len(grid) - 1:
        return float(grid[-1])
    frac = idx - i0
    return float(grid[i0] * (1 - frac) + grid[i0 + 1] * frac)


def _buchstab_grid(t_max: float, step: float) -> np.ndarray:
    n = int(round((t_max - 1.0) / step)) + 1
    shift = int(round(1.0 / step))
    t = 1.0 + step * np.arange(n)
    w = np.empty(n)
    two = min(n - 1, shift)  # index of t = 2
    w[:two + 1] = 1.0 / t[:two + 1]
    F = t[two] * w[two]  # F(t) = t w(t), F'(t) = w(t-1)
    for i in range(two + 1, n):
        F += 0.5 * step * (w[i - 1 - shift] + w[i - shift])
        w[i] = F / t[i]
    return w


# ---------------------------------------------------------------------------
# window sums and parameter choice
# ---------------------------------------------------------------------------

def window_sums(W: WeightSystem):
    """Exact reciprocal sums over the prime and quasi-prime windows, with the
    predicted asymptotic brackets (report only)."""
    p_sum = sum((Q(1, p) for p in W.prime_window), Q(0))
    m_sum = sum((Q(1, m) for m in W.quasi_primes), Q(0))
    report = {"label": "report"}
    if W.variant == "two-factor" and W.delta2 is not None and W.delta2 > 0:
        report["prime_sum_target_log"] = math.log(
            float((W.delta2 + W.eps) / W.delta2))
        report["prime_sum"] = float(p_sum)
    report["quasi_prime_sum"] = float(m_sum)
    report["quasi_prime_lower_bracket"] = float(W.eps / (2 * W.eta))
    return p_sum, m_sum, report


def choose_parameters(rho, eps, variant: str, x: int = 10**4,
                      ell: int = 3, eta: Fraction | None = None,
                      r0: int | None = None) -> WeightSystem:
    """Instantiate the printed parameter choices for a variant and validate
    the system's inequalities (ConstraintError names the first failure).

    theta comes from the exponents module and is made concrete here as
    theta_formula + eps (windows need concrete rationals).  delta choices use
    distinct small multiples of eps so every strict inequality holds verbatim.
    eta defaults to eps^2/5 (then s = eta^{-1/2} gives s*eta < eps/2).
    """
    r, e = Q(rho), Q(eps)
    if not (0 < r <= 1):
        raise ConstraintError("need 0 < rho <= 1")
    if e <= 0:
        raise ConstraintError("eps must be positive")
    if eta is None:
        eta = e * e / 5
    h = Q(eta)
    s = _rational_inv_sqrt(h)

    delta1 = delta2 = delta = None
    if variant == "two-factor":
        theta = theta_prop7(r, None) + e
        delta1 = theta / r - 2 * e
        delta2 = 1 - 2 * theta / r + 3 * e
        _require(Q(1, 4) + e <= theta, "1/4 + eps <= theta")
        _require(theta < Q(1, 2), "theta < 1/2")
        _require(e < delta2 + 2 * e, "eps < delta2 + 2 eps")
        _require(delta2 + 2 * e < delta1 + e, "delta2 + 2 eps < delta1 + eps")
        _require(delta1 + e < theta / r, "delta1 + eps < theta/rho")
        _require(delta1 + delta2 < 1, "delta1 + delta2 < 1")
        _require(delta1 + delta2 + theta / r > 1, "delta1 + delta2 + theta/rho > 1")
        _require(0 < h < delta1, "0 < eta < delta1")
        M = quasi_primes(x, delta1, e, h)
        P = prime_window(x, delta2, delta2 + e)
    elif variant == "one-factor":
        theta = theta_prop8(r) + e
        if r < Q(9, 17):
            delta = (19 * theta - 3) / 7 - 2 * e
        else:
            delta = 4 * theta / 3 - 2 * e
        _require(Q(1, 4) + e <= theta, "1/4 + eps <= theta")
        _require(theta < Q(1, 2), "theta < 1/2")
        _require(theta < delta + 2 * e, "theta < delta + 2 eps")
        _require(delta + 2 * e < min(theta / r, Q(1)), "delta + 2 eps < min(theta/rho, 1)")
        _require(delta + theta / r > 1, "delta + theta/rho > 1")
        _require(0 < h < delta, "0 < eta < delta")
        M = quasi_primes(x, delta, e, h)
        P = []
    elif variant == "prime-only":
        theta = theta_thm2(r) + 2 * e
        _require(theta - 2 * e > 0, "theta - 2 eps > 0")
        _require(theta < 1, "theta < 1")
        M = []
        P = prime_window(x, theta - 2 * e, theta - e)
    else:
        raise ValueError(f"unknown variant {variant!r}")

    z = floor_power(x, h)
    Qcap = max(1, floor_power(x, h * s))
    if r0 is None:
        r0 = max(2, 2 * int(s) if s < 20 else 8)
    lp, lm = fundamental_lemma_weights(max(2, z), Qcap, r0) if z >= 2 else ({1: 1}, {1: 1})
    return WeightSystem(x=x, variant=variant, theta=theta, rho=r, eps=e,
                        eta=h, s=s, delta1=delta1, delta2=delta2, delta=delta,
                        z=max(2, z), Q=Qcap, ell=ell,
                        quasi_primes=tuple(M), prime_window=tuple(P),
                        lambda_plus=lp, lambda_minus=lm)


def _require(condition: bool, name: str) -> None:
    if not condition:
        raise ConstraintError(f"parameter constraint violated: {name}")


def _rational_inv_sqrt(h: Fraction) -> Fraction:
    """A rational s ~ h^{-1/2} (exact when 1/h is a perfect square)."""
    inv = 1 / Q(h)
    num = math.isqrt(inv.numerator * inv.denominator)
    return Q(num, inv.denominator)
