"""B-free sieving over short intervals, gap statistics, densities, and the
coefficient-support applications.

A B-set is a pairwise-coprime set of integers > 1, either given explicitly or
generated from a prime set P by the rule  B_P = P union {p^2 : p prime not in P}
(P = empty set gives the squarefree numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import factorize, is_prime, primes_in
from .errors import MissingCoefficientError, ResourceBudgetError
from .hecke import HeckeForm, coeff, vanishing_scan

Q = Fraction


# ---------------------------------------------------------------------------
# B-sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BSet:
    kind: str                       # "explicit" | "generated"
    explicit_members: tuple[int, ...] = ()
    P: object = None                # frozenset of primes, or predicate on primes
    truncation: int | None = None   # index cut for main-term computations

    def members_up_to(self, T: int) -> list[int]:
        """Exactly the members <= T, ascending."""
        if self.kind == "explicit":
            return [b for b in self.explicit_members if b <= T]
        pred = self._pred()
        out = [p for p in primes_in(2, T) if pred(p)] if T >= 2 else []
        out += [q * q for q in primes_in(2, math.isqrt(T)) if not pred(q)] \
            if T >= 4 else []
        return sorted(out)

    def _pred(self):
        if callable(self.P):
            return self.P
        pset = self.P or frozenset()
        return lambda p: p in pset

    def p_is_finite(self) -> bool:
        return not callable(self.P)


def explicit_bset(members, truncation: int | None = None) -> BSet:
    ms = tuple(sorted(int(b) for b in members))
    if any(b <= 1 for b in ms):
        raise ValueError("members must exceed 1")
    if len(set(ms)) != len(ms):
        raise ValueError("members must be distinct")
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if math.gcd(ms[i], ms[j]) != 1:
                raise ValueError(
                    f"members {ms[i]} and {ms[j]} are not coprime")
    return BSet(kind="explicit", explicit_members=ms, truncation=truncation)


def generated_bset(P=frozenset(), truncation: int | None = None) -> BSet:
    """B_P = P union {p^2 : p not in P}; P a set of primes or a predicate."""
    if not callable(P):
        P = frozenset(int(p) for p in P)
        if any(not is_prime(p) for p in P):
            raise ValueError("P must consist of primes")
    return BSet(kind="generated", P=P, truncation=truncation)


def squarefree_bset() -> BSet:
    return generated_bset(frozenset())


# ---------------------------------------------------------------------------
# interval sieve
# ---------------------------------------------------------------------------

@dataclass
class IntervalReport:
    x: int
    y: int
    bfree_count: int
    positions: np.ndarray        # bool, length y; index i <-> n = x + 1 + i
    max_gap: int
    density_main_term: Fraction

    def to_json_dict(self) -> dict:
        from .config import format_rational
        bits = np.packbits(self.positions.astype(np.uint8))
        return {
            "schema": "gapsieve-interval v1",
            "x": str(self.x),
            "y": str(self.y),
            "bfree_count": str(self.bfree_count),
            "max_gap": str(self.max_gap),
            "positions_hex": bits.tobytes().hex(),
            "density_main_term": format_rational(self.density_main_term),
        }


def _longest_false_run(mask: np.ndarray) -> int:
    worst = cur = 0
    for v in mask:
        if v:
            cur = 0
        else:
            cur += 1
            if cur > worst:
                worst = cur
    return worst


def sieve_interval(x: int, y: int, B: BSet,
                   memory_budget_mb: int = 1024) -> IntervalReport:
    """Mark B-free positions in (x, x+y] by striking multiples of every
    member <= x+y.  Exact; cross-checkable against per-n trial division."""
    if x < 0 or y < 1:
        raise ValueError("need x >= 0, y >= 1")
    if y > memory_budget_mb * (1 << 20):
        raise ResourceBudgetError("interval exceeds memory budget")
    members = B.members_up_to(x + y)
    mask = np.ones(y, dtype=bool)
    for b in members:
        start = (x // b + 1) * b
        if start <= x + y:
            mask[start - x - 1::b] = False
    density = Q(1)
    for b in members:
        density *= 1 - Q(1, b)
    return IntervalReport(x=x, y=y, bfree_count=int(mask.sum()),
                          positions=mask,
                          max_gap=_longest_false_run(mask),
                          density_main_term=density)


def density(B: BSet, T: int) -> tuple[Fraction, Fraction, bool]:
    """(lower, upper, tail_known) bounds for the density of B-free numbers.

    upper = truncated product over members <= T.  For the generated rule the
    tail is absorbed: sum_{p in P, p > T} 1/p (exact when P is a finite set)
    plus sum_{q^2 > T} 1/q^2 < 1/isqrt(T).  Explicit sets (unknown tail) get
    lower = 0, flagged tail_known=False.
    """
    members = B.members_up_to(T)
    prod = Q(1)
    for b in members:
        prod *= 1 - Q(1, b)
    if B.kind == "explicit" or not B.p_is_finite():
        return Q(0), prod, False
    tail = Q(1, max(1, math.isqrt(T)))
    for p in B.P:
        if p > T:
            tail += Q(1, p)
    lower = prod * (1 - tail)
    return max(Q(0), lower), prod, True


# ---------------------------------------------------------------------------
# gaps
# ---------------------------------------------------------------------------

def gap_scan(predicate, lo: int, hi: int) -> tuple[int, int]:
    """(max_gap, n): the longest run of predicate-false values occupies
    n+1 .. n+max_gap.  Always-true predicates give (0, lo)."""
    if lo > hi:
        raise ValueError("lo <= hi required")
    best, best_pos = 0, lo
    run_start = None
    for n in range(lo, hi + 1):
        if predicate(n):
            run_start = None
        else:
            if run_start is None:
                run_start = n
            length = n - run_start + 1
            if length > best:
                best, best_pos = length, run_start - 1
    return best, best_pos


# ---------------------------------------------------------------------------
# coefficient-support count
# ---------------------------------------------------------------------------

@dataclass
class Cor7Report:
    exact_count: int
    main_term: Fraction
    liouville_count: int


def support_count_cor7(P, x: int, y: int) -> Cor7Report:
    """Count n in (x, x+y] whose p-adic valuation is even for every p in P.

    main_term = y * prod_{p in P} (1 + 1/p)^{-1}.  The Liouville identity
    count sums lambda(d) (floor((x+y)/d) - floor(x/d)) over d | P^infinity,
    d <= x+y, and must equal the exact count.
    """
    P = sorted(set(int(p) for p in P))
    if not P or any(not is_prime(p) for p in P):
        raise ValueError("P must be a nonempty list of primes")
    exact = 0
    for n in range(x + 1, x + y + 1):
        ok = True
        for p in P:
            v = 0
            m = n
            while m % p == 0:
                m //= p
                v += 1
            if v % 2:
                ok = False
                break
        if ok:
            exact += 1
    main = Q(y)
    for p in P:
        main /= 1 + Q(1, p)

    # enumerate d | P^infinity, d <= x+y (primes may repeat: higher powers)
    limit = x + y
    liou = 0
    stack = [(0, 1, 1)]
    while stack:
        idx, d, sign = stack.pop()
        liou += sign * (limit // d - x // d)
        for i in range(idx, len(P)):
            nd = d * P[i]
            if nd <= limit:
                stack.append((i, nd, -sign))
    return Cor7Report(exact_count=exact, main_term=main, liouville_count=liou)


# ---------------------------------------------------------------------------
# nonvanishing intervals
# ---------------------------------------------------------------------------

@dataclass
class NonvanishingReport:
    direct_count: int
    sieve_count: int
    agreement: bool
    partial: bool
    mode: str
    scan_bound: int
    nu_max: int
    bad_primes: tuple[int, ...]
    strike_moduli: tuple[int, ...]
    bset_members: tuple[int, ...] = field(default_factory=tuple)


def hecke_nonvanishing_interval(form: HeckeForm, x: int, y: int, mode: str,
                                scan_bound: int, nu_max: int = 50
                                ) -> NonvanishingReport:
    """Compare the directly counted nonvanishing coefficients on (x, x+y]
    with the sieve prediction, on the part coprime to the bad primes.

    mode "thm1": classify primes p <= scan_bound; strike multiples of those
    with lambda(p) = 0.  The square-rule B-set built from that prime set is
    reported (it is what the density theorem sieves with) but its square
    members certify nothing about vanishing and are not struck.

    mode "thm2": per good prime p <= scan_bound, scan lambda(p^nu) up to
    nu_max and strike multiples of each vanishing prime power p^nu (the
    weakest correct constraint; in general a lower bound on nonvanishing).

    partial=True flags scan_bound < x+y (primes above it are unclassified).
    """
    if mode not in ("thm1", "thm2"):
        raise ValueError("mode must be thm1 or thm2")
    bad = sorted(form.bad_primes())
    partial = scan_bound < x + y

    zero_primes: list[int] = []
    strikes: list[int] = []
    for p in primes_in(2, scan_bound) if scan_bound >= 2 else []:
        if p in bad:
            # total multiplicativity: lambda(p)=0 wipes out every p | n
            try:
                if form.lambda_p(p) == 0:
                    strikes.append(p)
            except MissingCoefficientError:
                pass  # coprime restriction removes these n anyway
            continue
        try:
            if mode == "thm1":
                if form.lambda_p(p) == 0:
                    zero_primes.append(p)
                    strikes.append(p)
            else:
                rep = vanishing_scan(form, p, nu_max)
                for nu in rep.vanishing_orders:
                    strikes.append(p ** nu)
                if rep.vanishing_orders and rep.vanishing_orders[0] == 1:
                    zero_primes.append(p)
        except MissingCoefficientError:
            partial = True

    bset = generated_bset(frozenset(zero_primes) | frozenset(bad))

    bad_prod = 1
    for p in bad:
        bad_prod *= p
    direct = 0
    sieve = 0
    for n in range(x + 1, x + y + 1):
        if bad_prod > 1 and math.gcd(n, bad_prod) > 1:
            continue
        if all(n % q for q in strikes):
            sieve += 1
        try:
            if coeff(form, n) != 0:
                direct += 1
        except MissingCoefficientError:
            partial = True
    return NonvanishingReport(
        direct_count=direct, sieve_count=sieve,
        agreement=direct == sieve, partial=partial, mode=mode,
        scan_bound=scan_bound, nu_max=nu_max,
        bad_primes=tuple(bad), strike_moduli=tuple(sorted(set(strikes))),
        bset_members=tuple(bset.members_up_to(min(x + y, scan_bound ** 2))))
