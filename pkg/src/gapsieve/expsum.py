"""Numeric exponential sums, quadruplet spacing counters, bound evaluators,
and exact bilinear/linear remainder sums.

Sums are evaluated at double precision with Kahan-compensated accumulation in
a fixed index order, so results are byte-stable across reruns.  Random
unimodular coefficients are e(u) with u drawn from a splitmix64 stream
(documented below) for reproducible cross-language reruns.

The m ~ M convention is M <= m < 2M throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ResourceBudgetError
from .sieveweights import remainder_r

Q = Fraction

# ---------------------------------------------------------------------------
# seeded unimodular coefficients (splitmix64)
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1


def splitmix64_stream(seed: int, count: int) -> list[int]:
    """The splitmix64 sequence: state += 0x9E3779B97F4A7C15;
    z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)."""
    out = []
    state = seed & _MASK64
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append(z ^ (z >> 31))
    return out


def unimodular_coeffs(count: int, seed: int) -> list[complex]:
    """e(u_j) with u_j = splitmix64_j / 2^64 in [0, 1)."""
    return [cmath.exp(2j * math.pi * (v / 2.0**64))
            for v in splitmix64_stream(seed, count)]


def _resolve_coeffs(spec_coeffs, count: int, seed_offset: int):
    if spec_coeffs == "ones" or spec_coeffs is None:
        return [1.0] * count
    if isinstance(spec_coeffs, tuple) and spec_coeffs[0] == "seeded":
        return unimodular_coeffs(count, spec_coeffs[1] + seed_offset)
    vals = list(spec_coeffs)
    if len(vals) != count:
        raise ValueError(f"coefficient list length {len(vals)} != {count}")
    if any(abs(v) > 1 + 1e-12 for v in vals):
        raise ValueError("coefficient magnitudes must be <= 1")
    return vals


@dataclass
class SumSpec:
    """Parameters of a type-I/II sum.  coefficients: "ones",
    ("seeded", seed), or explicit lists (magnitudes <= 1)."""
    X: float
    M: int
    N: int
    H: int = 1
    alpha: float = 0.5
    beta: float = 0.5
    phi: object = "ones"   # over m ~ M
    psi: object = "ones"   # over n ~ N
    xi: object = "ones"    # over h ~ H
    interval: tuple[int, int] | None = None  # I subset [M, 2M) for type-I


def _kahan():
    # returns (add, total) closure pair for compensated complex accumulation
    state = {"s": 0.0 + 0.0j, "c": 0.0 + 0.0j}

    def add(v: complex):
        y = v - state["c"]
        t = state["s"] + y
        state["c"] = (t - state["s"]) - y
        state["s"] = t

    return add, state


def type2_sum(spec: SumSpec, budget: int = 10**7) -> complex:
    """S = sum_{m~M} sum_{n~N} phi_m psi_n e(X (m/M)^alpha (n/N)^beta)."""
    if spec.M * spec.N > budget:
        raise ResourceBudgetError("M*N exceeds evaluation budget")
    phi = _resolve_coeffs(spec.phi, spec.M, 0)
    psi = _resolve_coeffs(spec.psi, spec.N, 1)
    add, state = _kahan()
    for i, m in enumerate(range(spec.M, 2 * spec.M)):
        fm = (m / spec.M) ** spec.alpha
        for j, n in enumerate(range(spec.N, 2 * spec.N)):
            phase = spec.X * fm * ((n / spec.N) ** spec.beta)
            add(phi[i] * psi[j] * cmath.exp(2j * math.pi * phase))
    return state["s"]


def type1_triple_sum(spec: SumSpec, budget: int = 10**7) -> complex:
    """S = sum_{h~H} sum_{m in I} sum_{n~N}
    xi_h psi_n e(X (h/H)^beta (m/M)^{-beta} (n/N)^alpha)."""
    lo, hi = spec.interval if spec.interval else (spec.M, 2 * spec.M)
    if not (spec.M <= lo <= hi <= 2 * spec.M):
        raise ValueError("interval must sit inside [M, 2M]")
    if spec.H * max(0, hi - lo) * spec.N > budget:
        raise ResourceBudgetError("H*|I|*N exceeds evaluation budget")
    xi = _resolve_coeffs(spec.xi, spec.H, 2)
    psi = _resolve_coeffs(spec.psi, spec.N, 1)
    add, state = _kahan()
    for a, h in enumerate(range(spec.H, 2 * spec.H)):
        fh = (h / spec.H) ** spec.beta
        for m in range(lo, hi):
            fm = (m / spec.M) ** (-spec.beta)
            for j, n in enumerate(range(spec.N, 2 * spec.N)):
                phase = spec.X * fh * fm * ((n / spec.N) ** spec.alpha)
                add(xi[a] * psi[j] * cmath.exp(2j * math.pi * phase))
    return state["s"]


# ---------------------------------------------------------------------------
# quadruplet spacing counts
# ---------------------------------------------------------------------------

def quadruple_count(M: int, alpha: float, delta: float,
                    method: str = "fast") -> int:
    """N(M, delta): quadruplets (m1,m2,m3,m4) in {M+1..2M}^4 with
    |m1^a + m2^a - m3^a - m4^a| <= delta * M^a (ties included).

    method "fast": sort pair sums, count windows by binary search
    (O(M^2 log M)).  method "brute": O(M^4) full comparison.  Both use the
    same float comparisons, so they agree exactly wherever both run.
    """
    if M < 1:
        raise ValueError("M >= 1 required")
    v = np.arange(M + 1, 2 * M + 1, dtype=np.float64) ** alpha
    sums = (v[:, None] + v[None, :]).ravel()
    tol = delta * float(M) ** alpha
    if method == "brute":
        if M > 64:
            raise ResourceBudgetError("brute method limited to M <= 64")
        diff = np.abs(sums[:, None] - sums[None, :])
        return int(np.count_nonzero(diff <= tol))
    if method != "fast":
        raise ValueError("method must be fast or brute")
    s = np.sort(sums)
    hi = np.searchsorted(s, sums + tol, side="right")
    lo = np.searchsorted(s, sums - tol, side="left")
    return int(np.sum(hi - lo))


# ---------------------------------------------------------------------------
# bound evaluators
# ---------------------------------------------------------------------------

def bound_eval(formula: str, spec: SumSpec, eps: float = 0.0, C: float = 1.0,
               pair=None) -> float:
    """Evaluate a cited right-hand side with user constant C and exponent eps.

    formulas: "prop5" (type-II bilinear), "cor8_59" / "cor8_510" (type-I
    triple; 510 needs an exponent pair), "rs39" (single sum).
    The implied constants are nowhere quantified, hence C is an input and the
    result is report material, never an assertion.
    """
    X, M, N, H = float(spec.X), spec.M, spec.N, spec.H
    if formula == "prop5":
        base = ((X * M**6 * N**6) ** (1 / 8) + M**0.5 * N + M * N**0.75
                + X**-0.5 * M * N)
        return C * base * (M * N) ** eps
    if formula == "cor8_59":
        base = ((X**3 * H**6 * M**2 * N**6) ** (1 / 8)
                + (X * H**2 * N) ** 0.5 + H * N
                + (X * H**3 * M) ** 0.25 * N + X**-1 * H * M * N)
        return C * base * (H * M * N) ** eps
    if formula == "cor8_510":
        if pair is None:
            raise ValueError("cor8_510 requires an exponent pair")
        k, l = float(pair.kappa), float(pair.lam)
        lead = (X ** (k + l) * H ** (1 + k + l) * M ** (1 + k - l)
                * N ** (2 + k)) ** (1 / (2 + 2 * k))
        base = (lead + (X * H**2 * N) ** 0.5 + (H * M) ** 0.5 * N + H * N
                + X**-1 * H * M * N)
        return C * base * (H * M * N) ** eps
    if formula == "rs39":
        return C * (M**2 + X**-1 * M**4) * M**eps
    raise ValueError(f"unknown formula {formula!r}")


@dataclass
class DlsReport:
    worst_ratio: float
    ratios: list[float] = field(default_factory=list)
    C: float = 1024.0
    seed: int = 1


def dls_check(M: int, N: int, X: float, alpha: float, beta: float,
              C: float = 2.0**10, trials: int = 20, seed: int = 1) -> DlsReport:
    """Worst |S|^8 / (C X (MN)^4 N(M,1/X) N(N,1/X)) over seeded coefficient
    draws.  Ratio <= 1 is expected at the default C, but this is a report,
    not an assertion (the true constant is unspecified)."""
    if X <= 0:
        raise ValueError("X must be positive")
    nm = quadruple_count(M, alpha, 1.0 / X)
    nn = quadruple_count(N, beta, 1.0 / X)
    denom = C * X * (M * N) ** 4 * nm * nn
    ratios = []
    for t in range(trials):
        spec = SumSpec(X=X, M=M, N=N, alpha=alpha, beta=beta,
                       phi=("seeded", seed + 1000 * t),
                       psi=("seeded", seed + 1000 * t + 500))
        S = type2_sum(spec)
        ratios.append(abs(S) ** 8 / denom)
    return DlsReport(worst_ratio=max(ratios), ratios=ratios, C=C, seed=seed)


# ---------------------------------------------------------------------------
# exact remainder sums
# ---------------------------------------------------------------------------

def bilinear_r_sum(M: int, N: int, psi, x: int, y) -> Fraction:
    """sum_{m~M} sum_{n~N} psi_n r_{mn}(x, y), exactly (psi_n in [-1,1],
    rational for exactness; indexed by n - N)."""
    psi = list(psi)
    if len(psi) != N:
        raise ValueError("psi must have length N")
    total = Q(0)
    for j, n in enumerate(range(N, 2 * N)):
        w = Q(psi[j])
        if not -1 <= w <= 1:
            raise ValueError("psi values must lie in [-1, 1]")
        if w == 0:
            continue
        for m in range(M, 2 * M):
            total += w * remainder_r(m * n, x, y)
    return total


def linear_r_sum(M: int, x: int, y) -> Fraction:
    """sum_{m~M} r_m(x, y), exactly."""
    return sum((remainder_r(m, x, y) for m in range(M, 2 * M)), Q(0))


# ---------------------------------------------------------------------------
# benchmark CSV
# ---------------------------------------------------------------------------

BENCH_HEADER = "formula,X,M,N,H,alpha,beta,abs_S,bound,ratio,seed"


def benchmark_rows(specs: list[tuple[str, SumSpec, int]],
                   eps: float = 0.0, C: float = 1.0, pair=None) -> list[str]:
    """CSV rows (formula, X, M, N, H, alpha, beta, |S|, bound, ratio, seed)."""
    rows = []
    for formula, spec, seed in specs:
        if formula in ("prop5", "rs39"):
            S = type2_sum(spec)
        else:
            S = type1_triple_sum(spec)
        bound = bound_eval(formula, spec, eps=eps, C=C, pair=pair)
        ratio = abs(S) / bound if bound else float("inf")
        rows.append(f"{formula},{spec.X!r},{spec.M},{spec.N},{spec.H},"
                    f"{spec.alpha!r},{spec.beta!r},{abs(S)!r},{bound!r},"
                    f"{ratio!r},{seed}")
    return rows
