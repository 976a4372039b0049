"""Exact-rational exponent calculus.

theta(rho) formulas, the piecewise optimum, exponent-pair generation via the
A/B processes, constraint-system solving, and admissibility predicates.

All theta arithmetic is exact (Fraction).  The ubiquitous "+epsilon" is never
folded in numerically; `format_theta` renders it symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

Q = Fraction


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def format_theta(theta: Fraction, plus_eps: bool = True) -> str:
    t = _frac(theta)
    s = f"{t.numerator}/{t.denominator}"
    return s + "+eps" if plus_eps else s


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentPair:
    kappa: Fraction
    lam: Fraction

    def __post_init__(self):
        object.__setattr__(self, "kappa", _frac(self.kappa))
        object.__setattr__(self, "lam", _frac(self.lam))
        if not (0 <= self.kappa <= Q(1, 2) <= self.lam <= 1):
            raise ValueError(f"invalid exponent pair ({self.kappa}, {self.lam})")

    def as_tuple(self):
        return (self.kappa, self.lam)


@dataclass(frozen=True)
class RhoHypothesis:
    """A (rho, Theta_rho, Psi_rho) density hypothesis for vanishing primes."""
    rho: Fraction
    theta_big: float
    psi_big: float
    label: str

    def __post_init__(self):
        object.__setattr__(self, "rho", _frac(self.rho))
        if not (0 <= self.rho <= 1):
            raise ValueError("rho in [0,1]")
        if self.rho == 1 and not self.theta_big > 1:
            raise ValueError("rho=1 requires Theta_1 > 1")


PRESETS: dict[str, RhoHypothesis] = {
    # unconditional: density of vanishing primes is o(x/log x) with any
    # log-power < 3/2; stored Theta=1.4, the open bound noted in the label
    "serre": RhoHypothesis(Q(1), 1.4, 0.0, "Serre 1981 (any Theta_1 < 3/2)"),
    "serre_grh": RhoHypothesis(Q(3, 4), 0.0, 0.0, "Serre under GRH"),
    "elkies": RhoHypothesis(Q(3, 4), 0.0, 0.0, "Elkies (supersingular primes)"),
    "lang_trotter": RhoHypothesis(Q(1, 2), 1.0, 0.0, "Lang-Trotter"),
    # generalized Lang-Trotter (Murty) triples, by weight and trace-field degree
    "murty_k2_deg2": RhoHypothesis(Q(1, 2), 1.0, 0.0, "Murty: k=2, [F:Q]=2"),
    "murty_k2_deg3": RhoHypothesis(Q(0), 0.0, 1.0, "Murty: k=2, [F:Q]=3"),
    "murty_k3_deg2": RhoHypothesis(Q(0), 0.0, 1.0, "Murty: k=3, [F:Q]=2"),
    "murty_other": RhoHypothesis(Q(0), 0.0, 0.0, "Murty: remaining cases"),
    # all-prime-powers conjecture, by weight
    "conjecture1_k2": RhoHypothesis(Q(1, 2), 1.0, 0.0, "all prime powers, k=2"),
    "conjecture1_k3": RhoHypothesis(Q(0), 0.0, 1.0, "all prime powers, k=3"),
    "conjecture1_k4plus": RhoHypothesis(Q(0), 0.0, 0.0, "all prime powers, k>=4"),
}


# ---------------------------------------------------------------------------
# theta formulas
# ---------------------------------------------------------------------------

def _check_rho(rho) -> Fraction:
    r = _frac(rho)
    if not (0 <= r <= 1):
        raise ValueError(f"rho={rho} outside [0,1]")
    return r


def theta_cor10(rho) -> Fraction:
    """The piecewise-optimal exponent theta(rho) (six exact pieces)."""
    r = _check_rho(rho)
    if r <= Q(1, 3):
        return Q(1, 4)
    if r <= Q(9, 17):
        return 10 * r / (19 * r + 7)
    if r <= Q(15, 28):
        return 3 * r / (4 * r + 3)
    if r <= Q(5, 8):
        return Q(5, 16)
    if r <= Q(9, 10):
        return 22 * r / (24 * r + 29)
    return 7 * r / (9 * r + 8)


def theta_thm2(rho) -> Fraction:
    """theta(rho) = rho/(1+rho) (prime-only weights)."""
    r = _check_rho(rho)
    return r / (1 + r)


def theta_prop9(rho) -> Fraction:
    return theta_thm2(rho)


def theta_prop7(rho, pair: Optional[ExponentPair] = None) -> Fraction:
    """Two-factor-weights exponent.

    Without a pair: max(1/3, 7 rho/(9 rho+8)).
    With a pair (kappa, lam):
        max((kappa+lam)/(1+2kappa+2lam),
            (1+kappa+2lam) rho / ((1+2kappa+2lam) rho + 2 + 2 lam)).
    """
    r = _check_rho(rho)
    if pair is None:
        return max(Q(1, 3), 7 * r / (9 * r + 8))
    k, l = pair.kappa, pair.lam
    first = (k + l) / (1 + 2 * k + 2 * l)
    second = (1 + k + 2 * l) * r / ((1 + 2 * k + 2 * l) * r + 2 + 2 * l)
    return max(first, second)


def theta_prop8(rho) -> Fraction:
    """One-factor-weights exponent: max(1/4, 10rho/(19rho+7)) below 9/17,
    3rho/(4rho+3) from 9/17 on (the pieces agree at 9/17)."""
    r = _check_rho(rho)
    if r < Q(9, 17):
        return max(Q(1, 4), 10 * r / (19 * r + 7))
    return 3 * r / (4 * r + 3)


def alkan_theta(rho) -> Fraction:
    """Earlier comparison exponent: 1/3 at rho=1/2, max(7/19, 23rho/(35rho+16))
    on (1/2, 1].  Implemented as printed in the source it comes from; note the
    value at rho=1 is 23/51 (> 17/41), which the theta table annotates."""
    r = _frac(rho)
    if r == Q(1, 2):
        return Q(1, 3)
    if not (Q(1, 2) < r <= 1):
        raise ValueError("alkan_theta defined on [1/2, 1]")
    return max(Q(7, 19), 23 * r / (35 * r + 16))


# ---------------------------------------------------------------------------
# exponent pair calculus
# ---------------------------------------------------------------------------

def _A(p: ExponentPair) -> ExponentPair:
    k, l = p.kappa, p.lam
    return ExponentPair(k / (2 * k + 2), (k + l + 1) / (2 * k + 2))


def _B(p: ExponentPair) -> ExponentPair:
    k, l = p.kappa, p.lam
    return ExponentPair(l - Q(1, 2), k + Q(1, 2))


def ab_process(pair: ExponentPair, word: str) -> ExponentPair:
    """Apply a word over {A,B} left to right."""
    out = pair
    for ch in word:
        if ch == "A":
            out = _A(out)
        elif ch == "B":
            out = _B(out)
        else:
            raise ValueError(f"word may contain only A and B, got {ch!r}")
    return out


def ab_hull(seeds: list[ExponentPair], depth: int) -> list[ExponentPair]:
    """All pairs reachable from the seeds with at most `depth` A/B steps."""
    if depth > 12:
        raise ValueError("depth <= 12 (hull size control)")
    seen: dict[tuple, ExponentPair] = {}
    frontier = list(seeds)
    for p in frontier:
        seen[p.as_tuple()] = p
    for _ in range(depth):
        nxt = []
        for p in frontier:
            for q in (_A(p), _B(p)):
                if q.as_tuple() not in seen:
                    seen[q.as_tuple()] = q
                    nxt.append(q)
        frontier = nxt
        if not frontier:
            break
    return sorted(seen.values(), key=lambda p: p.as_tuple())


DEFAULT_SEEDS = (ExponentPair(Q(0), Q(1)), ExponentPair(Q(4, 18), Q(11, 18)))


def optimize_theta(rho, seeds=DEFAULT_SEEDS, depth: int = 6,
                   closure: str = "seeds"):
    """Minimum theta over the one-factor formula, the pair-free two-factor
    branch, and the paired two-factor formula over the candidate pairs.

    closure="seeds" (default) evaluates the paired formula at the seed pairs
    verbatim; this reproduces the published six-piece table exactly.
    closure="hull" also admits the A/B closure of the seeds up to `depth`
    (validated against the pair invariants).  Caution: the closure contains
    pairs with kappa+lambda below 5/6 -- already BAAABA applied to (0,1)
    gives (11/82, 57/82) with sum 34/41 -- whose window floor
    (kappa+lambda)/(1+2kappa+2lambda) undercuts the published 5/16 piece on
    part of (15/28, 9/10].  The published table optimizes only over its one
    cited pair, so the sharper hull envelope is opt-in rather than default.

    Returns (theta, witness) where witness is "prop8", "prop7_68", or
    ("prop7_69", pair).
    """
    r = _check_rho(rho)
    if closure == "seeds":
        candidates = list(seeds)
    elif closure == "hull":
        candidates = ab_hull(list(seeds), depth)
    else:
        raise ValueError('closure must be "seeds" or "hull"')
    best = theta_prop8(r)
    witness: object = "prop8"
    v = theta_prop7(r, None)
    if v < best:
        best, witness = v, "prop7_68"
    for q in candidates:
        v = theta_prop7(r, q)
        if v < best:
            best, witness = v, ("prop7_69", q)
    return best, witness


# ---------------------------------------------------------------------------
# constraint solving
# ---------------------------------------------------------------------------

def minimal_theta_from_constraints(rho, variant: str,
                                   pair: Optional[ExponentPair] = None):
    """Solve the binding linear equality of the named constraint system.

    Each system pairs a remainder-admissibility bound (delta <= c*theta + d)
    with the window-coverage relation (delta = e + f*theta/rho), and the
    minimal admissible theta solves c*theta + d = e + f*theta/rho.

    variants: "718", "719" (needs pair), "811a", "811b".
    rho = 0 with a rho-denominator returns (0, flagged=True).
    """
    r = _check_rho(rho)
    if variant == "718":
        c, d, e, f = Q(9, 4), Q(-3, 4), Q(1), Q(-2)
    elif variant == "719":
        if pair is None:
            raise ValueError("variant 719 requires an exponent pair")
        k, l = pair.kappa, pair.lam
        c = (1 + 2 * k + 2 * l) / (1 + l)
        d = -(k + l) / (1 + l)
        e, f = Q(1), Q(-2)
    elif variant == "811a":
        c, d, e, f = Q(19, 7), Q(-3, 7), Q(1), Q(-1)
    elif variant == "811b":
        c, d, e, f = Q(4, 3), Q(0), Q(1), Q(-1)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if r == 0:
        return Q(0), True
    # c*theta + d = e + f*theta/rho  =>  theta (c - f/rho) = e - d
    theta = (e - d) / (c - f / r)
    return theta, False


# ---------------------------------------------------------------------------
# admissibility predicates
# ---------------------------------------------------------------------------

@dataclass
class AdmissibilityResult:
    ok: bool
    failed_clause: str | None = None

    def __bool__(self):
        return self.ok


def _prod_le_one(terms: list[tuple[Fraction, Fraction]]) -> bool:
    """Exact test of prod base_i^{exp_i} <= 1 for positive rational bases and
    rational exponents (clear denominators to integer powers)."""
    from math import lcm
    D = 1
    for _, e in terms:
        D = lcm(D, _frac(e).denominator)
    lhs = Fraction(1)
    for b, e in terms:
        b = _frac(b)
        if b <= 0:
            raise ValueError("bases must be positive")
        lhs *= b ** int(_frac(e) * D)
    return lhs <= 1


def _le_power(value, parts: list[tuple[Fraction, Fraction]]) -> bool:
    """value <= prod base^exp, exactly."""
    return _prod_le_one([(_frac(value), Q(1))] + [(b, -e) for b, e in parts])


def admissibility(cond: str, theta=None, M=None, N=None, x=None, y=None,
                  pair: Optional[ExponentPair] = None) -> AdmissibilityResult:
    """Evaluate every clause of the named remainder-sum condition.

    Epsilon-prime terms are treated as 0 (epsilon is carried symbolically
    throughout the package).  Comparisons are exact rational.
    conds: 514, 515(pair), 517, 518, 66_67, 718, 719(pair), 811.
    """
    t = _frac(theta) if theta is not None else None

    def window(lo, hi, lo_strict=True, hi_strict=False) -> str | None:
        if lo_strict and not (t > lo):
            return f"theta <= {lo}"
        if not lo_strict and not (t >= lo):
            return f"theta < {lo}"
        if hi_strict and not (t < hi):
            return f"theta >= {hi}"
        if not hi_strict and not (t <= hi):
            return f"theta > {hi}"
        return None

    fail = None
    if cond == "514":
        fail = window(Q(1, 3), Q(5, 11))
        if fail is None and not _le_power(N, [(y, Q(9, 4)), (x, Q(-3, 4))]):
            fail = "N > y^{9/4} x^{-3/4}"
        if fail is None and not _frac(M) * _frac(N) <= _frac(x):
            fail = "MN > x"
    elif cond == "515":
        if pair is None:
            raise ValueError("cond 515 requires a pair")
        k, l = pair.kappa, pair.lam
        fail = window((k + l) / (1 + 2 * k + 2 * l), (k + l) / (2 * k + l))
        if fail is None and not _le_power(
                N, [(y, (1 + 2 * k + 2 * l) / (1 + l)),
                    (x, -(k + l) / (1 + l))]):
            fail = "N exceeds the paired bilinear bound"
        if fail is None and not _frac(M) * _frac(N) <= _frac(x):
            fail = "MN > x"
    elif cond == "517":
        fail = window(Q(1, 4), Q(9, 29))
        if fail is None and not _le_power(M, [(y, Q(19, 7)), (x, Q(-3, 7))]):
            fail = "M > y^{19/7} x^{-3/7}"
    elif cond == "518":
        fail = window(Q(9, 29), Q(1, 2))
        if fail is None and not _le_power(M, [(y, Q(4, 3))]):
            fail = "M > y^{4/3}"
    elif cond == "66_67":
        fail = window(Q(7, 19), Q(11, 23))
        if fail is None and not _frac(M) <= _frac(y):
            fail = "M > y"
        if fail is None and not _le_power(N, [(y, Q(19, 16)), (x, Q(-7, 16))]):
            fail = "N > y^{19/16} x^{-7/16}"
    elif cond == "718":
        # windows as in 514, with N playing x^{delta_2}: N^4 <= x^{9 theta - 3}
        fail = window(Q(1, 3), Q(5, 11))
        if fail is None and not _le_power(N, [(x, (9 * t - 3) / 4)]):
            fail = "N > x^{(9 theta - 3)/4}"
        if fail is None and not _frac(M) * _frac(N) <= _frac(x):
            fail = "MN > x"
    elif cond == "719":
        if pair is None:
            raise ValueError("cond 719 requires a pair")
        k, l = pair.kappa, pair.lam
        fail = window((k + l) / (1 + 2 * k + 2 * l), (k + l) / (2 * k + l))
        if fail is None and not _le_power(
                N, [(x, ((1 + 2 * k + 2 * l) * t - k - l) / (1 + l))]):
            fail = "N exceeds x^{[(1+2k+2l) theta - k - l]/(1+l)}"
        if fail is None and not _frac(M) * _frac(N) <= _frac(x):
            fail = "MN > x"
    elif cond == "811":
        if Q(1, 4) < t < Q(9, 29):
            if not _le_power(M, [(x, (19 * t - 3) / 7)]):
                fail = "M > x^{(19 theta - 3)/7}"
        elif Q(9, 29) < t < Q(1, 2):
            if not _le_power(M, [(x, 4 * t / 3)]):
                fail = "M > x^{4 theta/3}"
        else:
            fail = "theta outside (1/4, 9/29) u (9/29, 1/2)"
    else:
        raise ValueError(f"unknown condition {cond!r}")
    return AdmissibilityResult(ok=fail is None, failed_clause=fail)


# ---------------------------------------------------------------------------
# tables and profiles
# ---------------------------------------------------------------------------

def historical_table() -> list[tuple[Fraction, str]]:
    """Published short-interval exponents for B-free numbers, newest last."""
    return [
        (Q(1, 2), "Szemeredi 1973"),
        (Q(9, 20), "Bantle-Grupp 1985"),
        (Q(5, 12), "Wu 1993"),
        (Q(17, 41), "Wu 1994"),
        (Q(33, 80), "Wu / Zhai (independently)"),
        (Q(40, 97), "Sargos-Wu 2000"),
        (Q(7, 17), "this library (two-factor quasi-prime weights)"),
    ]


@dataclass
class ThetaProfile:
    rho: Fraction
    values: dict
    winner_id: str
    winner_value: Fraction


_WINNER_ORDER = ["prop7_68", "prop7_69", "prop8_610", "alkan_63",
                 "thm1_cor10", "thm2"]


def theta_profile(rho, pair: Optional[ExponentPair] = None) -> ThetaProfile:
    """Per-formula theta values with the minimum marked as winner."""
    r = _check_rho(rho)
    values: dict[str, Fraction] = {
        "thm1_cor10": theta_cor10(r),
        "thm2": theta_thm2(r),
        "prop7_68": theta_prop7(r, None),
        "prop8_610": theta_prop8(r),
    }
    if pair is not None:
        values["prop7_69"] = theta_prop7(r, pair)
    if r >= Q(1, 2):
        values["alkan_63"] = alkan_theta(r)
    winner_id = min((wid for wid in _WINNER_ORDER if wid in values),
                    key=lambda wid: (values[wid], _WINNER_ORDER.index(wid)))
    return ThetaProfile(rho=r, values=values, winner_id=winner_id,
                        winner_value=values[winner_id])
