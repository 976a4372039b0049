"""Hecke eigenvalue engine.

Coefficient sources:
  * tau-builtin: exact tau(n) from the q-expansion of q*prod(1-q^m)^24,
  * elliptic(a4, a6): weight-2 traces by point counting (bad primes = primes
    dividing the discriminant; no coefficient is available there),
  * explicit prime tables (exact integers/Fractions or complex floats).

Everything downstream of lambda(p) is the degree-2 recursion
    lambda(p^{v+1}) = lambda(p) lambda(p^v) - chi(p) p^{k-1} lambda(p^{v-1}),
with total multiplicativity lambda(p^v) = lambda(p)^v when p | N.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
import numpy as np

from .arith import ec_discriminant, ec_trace, factorize, is_prime
from .errors import MissingCoefficientError, ResourceBudgetError

# ---------------------------------------------------------------------------
# tau via the q-expansion
# ---------------------------------------------------------------------------

DEFAULT_TAU_CEILING = 10**4


def _eta3(limit: int) -> list[int]:
    """Coefficients 0..limit-1 of prod_{m>=1}(1-q^m)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    out = [0] * limit
    k = 0
    while k * (k + 1) // 2 < limit:
        out[k * (k + 1) // 2] = (2 * k + 1) * (-1 if k % 2 else 1)
        k += 1
    return out


def _poly_square(coeffs: list[int], limit: int) -> list[int]:
    """Square a polynomial (truncated to `limit` terms) by Kronecker substitution.

    Signed coefficients are packed into one big integer with a block width
    chosen from an a-priori bound on the product's coefficients, squared with
    gmpy2, and unpacked with signed-digit decoding.
    """
    amax = max((abs(c) for c in coeffs), default=0)
    if amax == 0:
        return [0] * limit
    bound = len(coeffs) * amax * amax
    # byte-aligned blocks keep packing and unpacking linear (shifting the
    # whole accumulator per block is quadratic in the total bit length)
    bits = ((bound.bit_length() + 3) // 8 + 1) * 8
    width = bits // 8
    n = len(coeffs)
    pos = bytearray(width * n)
    neg = bytearray(width * n)
    for i, c in enumerate(coeffs):
        if c > 0:
            pos[i * width:i * width + (c.bit_length() + 7) // 8] = \
                c.to_bytes((c.bit_length() + 7) // 8, "little")
        elif c < 0:
            c = -c
            neg[i * width:i * width + (c.bit_length() + 7) // 8] = \
                c.to_bytes((c.bit_length() + 7) // 8, "little")
    packed = gmpy2.mpz(int.from_bytes(pos, "little")
                       - int.from_bytes(neg, "little"))
    sq = packed * packed
    # bias the low blocks by 2^{bits-1} so each signed digit decodes from its
    # own bytes (|digit| < 2^{bits-2}, so no inter-block carries appear)
    half = 1 << (bits - 1)
    B = gmpy2.mpz(1) << bits
    T = half * ((B ** (limit + 1) - 1) // (B - 1))
    buf = int(sq + T).to_bytes(width * (2 * n + 2), "little")
    out = [0] * limit
    for i in range(limit):
        out[i] = int.from_bytes(buf[i * width:(i + 1) * width],
                                "little") - half
    return out


def tau_series(limit: int) -> list[int]:
    """[tau(1), ..., tau(limit)] from q * prod(1-q^m)^24 = q * ((eta3)^2)^2)^2."""
    if limit < 1:
        raise ValueError("limit >= 1 required")
    f = _eta3(limit)
    for _ in range(3):
        f = _poly_square(f, limit)
    return f  # tau(n) = coefficient of q^{n-1} in prod^24


class TauCache:
    """In-memory tau table with optional on-disk persistence.

    File format: first line "tau-cache v1 <ceiling>", then "n,value" lines in
    ascending n.  Extension recomputes the whole series from scratch (whole-file
    replacement; correctness over speed).
    """

    def __init__(self, ceiling: int = DEFAULT_TAU_CEILING, path: str | None = None):
        self.ceiling = 0
        self.path = path
        self._values: list[int] = []
        if path and os.path.exists(path):
            self._load(path)
        if self.ceiling < ceiling:
            self.extend(ceiling)

    def _load(self, path: str) -> None:
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 3 or header[0] != "tau-cache" or header[1] != "v1":
                raise ValueError(f"{path}: not a tau-cache v1 file")
            ceiling = int(header[2])
            vals = [0] * ceiling
            for line in fh:
                n_s, v_s = line.strip().split(",")
                vals[int(n_s) - 1] = int(v_s)
        self._values = vals
        self.ceiling = ceiling

    def save(self, path: str | None = None) -> None:
        path = path or self.path
        if path is None:
            raise ValueError("no path for tau cache")
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(f"tau-cache v1 {self.ceiling}\n")
            for i, v in enumerate(self._values):
                fh.write(f"{i + 1},{v}\n")
        os.replace(tmp, path)

    def extend(self, ceiling: int) -> None:
        if ceiling <= self.ceiling:
            return
        self._values = tau_series(ceiling)
        self.ceiling = ceiling
        if self.path:
            self.save()

    def get(self, n: int, allow_extend: bool = True) -> int:
        if n < 1:
            raise ValueError("n >= 1 required")
        if n > self.ceiling:
            if not allow_extend:
                raise ResourceBudgetError(
                    f"tau({n}) above cache ceiling {self.ceiling}")
            self.extend(max(n, 2 * self.ceiling))
        return self._values[n - 1]


_global_tau_cache: TauCache | None = None


def tau(n: int, allow_extend: bool = True) -> int:
    """Exact Ramanujan tau(n) from the cached q-expansion."""
    global _global_tau_cache
    if _global_tau_cache is None:
        _global_tau_cache = TauCache(DEFAULT_TAU_CEILING)
    return _global_tau_cache.get(n, allow_extend=allow_extend)


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeckeForm:
    """A coefficient source with (weight, level, nebentypus, normalization).

    source is one of
        ("tau",)
        ("elliptic", a4, a6)
        ("table", mapping p -> lambda(p))
    nebentypus None means the trivial character mod level.
    """
    weight: int
    level: int
    source: tuple
    nebentypus: dict | None = None
    normalization: str = "arithmetic"  # or "unit"

    def __post_init__(self):
        if self.weight < 2:
            raise ValueError("weight >= 2 required")
        if self.normalization not in ("arithmetic", "unit"):
            raise ValueError("normalization must be arithmetic or unit")

    # -- source access -----------------------------------------------------
    @property
    def kind(self) -> str:
        return self.source[0]

    def bad_primes(self) -> frozenset[int]:
        if self.kind == "elliptic":
            disc = abs(ec_discriminant(self.source[1], self.source[2]))
            return frozenset(p for p, _ in factorize(disc))
        return frozenset(p for p, _ in factorize(self.level))

    def chi(self, p: int):
        """Nebentypus at p (0 on primes dividing the level)."""
        if p in self.bad_primes() or self.level % p == 0:
            return 0
        if self.nebentypus is None:
            return 1
        return self.nebentypus[p % self.level]

    def lambda_p(self, p: int):
        """lambda(p) from the source; MissingCoefficientError when unavailable."""
        if self.kind == "tau":
            return tau(p)
        if self.kind == "elliptic":
            if p in self.bad_primes() or p == 2:
                raise MissingCoefficientError(
                    f"no coefficient at bad/even prime {p}")
            return ec_trace(self.source[1], self.source[2], p)
        table = self.source[1]
        if p not in table:
            raise MissingCoefficientError(f"table has no value at {p}")
        return table[p]

    def is_exact(self) -> bool:
        if self.kind in ("tau", "elliptic"):
            return True
        return all(isinstance(v, (int, Fraction)) for v in self.source[1].values())


def delta_form(normalization: str = "arithmetic") -> HeckeForm:
    return HeckeForm(weight=12, level=1, source=("tau",),
                     normalization=normalization)


def elliptic_form(a4: int, a6: int) -> HeckeForm:
    """Weight-2 form attached to y^2 = x^3 + a4 x + a6.

    The level is a conductor proxy: the product of primes dividing the
    discriminant (level enters only through which primes are excluded).
    """
    disc = abs(ec_discriminant(a4, a6))
    if disc == 0:
        raise ValueError("singular curve")
    level = 1
    for p, _ in factorize(disc):
        level *= p
    return HeckeForm(weight=2, level=level, source=("elliptic", a4, a6))


def table_form(table: dict, weight: int = 2, level: int = 1,
               nebentypus: dict | None = None,
               normalization: str = "arithmetic") -> HeckeForm:
    return HeckeForm(weight=weight, level=level,
                     source=("table", dict(table)),
                     nebentypus=nebentypus, normalization=normalization)


# ---------------------------------------------------------------------------
# coefficients
# ---------------------------------------------------------------------------

def _unit_scale(value, p: int, nu: int, k: int):
    """value / p^{nu(k-1)/2}; exact Fraction when the exponent is even."""
    e2 = nu * (k - 1)
    if isinstance(value, (int, Fraction)):
        if e2 % 2 == 0:
            return Fraction(value, p ** (e2 // 2))
        return float(Fraction(value, p ** ((e2 - 1) // 2))) / math.sqrt(p)
    return value / (p ** (e2 / 2))


def _prime_power_seq(form: HeckeForm, p: int, nu_max: int) -> list:
    """[lambda(p^0), ..., lambda(p^nu_max)] in arithmetic normalization."""
    lp = form.lambda_p(p)
    if form.level % p == 0:
        return [lp ** v for v in range(nu_max + 1)]
    q = form.chi(p) * p ** (form.weight - 1)
    seq = [1, lp]
    for _ in range(nu_max - 1):
        seq.append(lp * seq[-1] - q * seq[-2])
    return seq[:nu_max + 1]


def coeff_prime_power(form: HeckeForm, p: int, nu: int):
    """lambda(p^nu) by the degree-2 recursion (total multiplicativity for p|N)."""
    if nu < 0:
        raise ValueError("nu >= 0 required")
    if nu == 0:
        return 1
    v = _prime_power_seq(form, p, nu)[nu]
    if form.normalization == "unit":
        return _unit_scale(v, p, nu, form.weight)
    return v


def coeff(form: HeckeForm, n: int):
    """lambda(n) assembled multiplicatively over factorize(n)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    out = 1
    for p, e in factorize(n):
        out *= coeff_prime_power(form, p, e)
    return out


# ---------------------------------------------------------------------------
# vanishing detection
# ---------------------------------------------------------------------------

ZERO_TOLERANCE = 1e-9  # after unit normalization (complex sources only)


@dataclass
class VanishingReport:
    prime: int
    nu_max: int
    vanishing_orders: list[int]
    root_ratio_order: int | None
    all_nonzero: bool
    approximate: bool = False


def _is_zero(value, p: int, nu: int, k: int, tol: float) -> tuple[bool, bool]:
    """(is zero, approximate?) with unit-normalized tolerance for floats."""
    if isinstance(value, (int, Fraction)):
        return value == 0, False
    return abs(value) / (p ** (nu * (k - 1) / 2)) < tol, True


def vanishing_scan(form: HeckeForm, p: int, nu_max: int,
                   tol: float = ZERO_TOLERANCE) -> VanishingReport:
    """Scan lambda(p^nu) for 1 <= nu <= nu_max.

    Exact zero test on exact sources; magnitude-below-tolerance (flagged
    approximate) on complex/float sources.  When the first zero sits at
    nu = d-1 for a good prime, alpha/beta is a primitive d-th root of unity
    and root_ratio_order = d is reported.
    """
    if nu_max < 1:
        raise ValueError("nu_max >= 1 required")
    seq = _prime_power_seq(form, p, nu_max)
    orders: list[int] = []
    approx = False
    for nu in range(1, nu_max + 1):
        z, a = _is_zero(seq[nu], p, nu, form.weight, tol)
        approx = approx or a
        if z:
            orders.append(nu)
    root_order = None
    if orders and form.level % p != 0:
        root_order = orders[0] + 1
    return VanishingReport(prime=p, nu_max=nu_max, vanishing_orders=orders,
                           root_ratio_order=root_order,
                           all_nonzero=not orders, approximate=approx)


def integer_form_criterion(form: HeckeForm, p_max: int, nu_max: int) -> list[int]:
    """Counterexample primes to "lambda(p) != 0 implies lambda(p^nu) != 0 for all nu".

    Preconditions: exact integer coefficients, trivial nebentypus, even weight.
    Scans good primes p <= p_max with lambda(p) != 0 for a zero among
    2 <= nu <= nu_max.  For integer forms the expected result is [].
    """
    if form.nebentypus is not None:
        raise ValueError("requires trivial nebentypus")
    if form.weight % 2 != 0:
        raise ValueError("requires even weight")
    if not form.is_exact():
        raise ValueError("requires exact integer coefficients")
    bad = form.bad_primes()
    out = []
    for p in _scan_primes(form, p_max):
        if p in bad or form.level % p == 0:
            continue
        try:
            lp = form.lambda_p(p)
        except MissingCoefficientError:
            continue
        if lp == 0:
            continue
        seq = _prime_power_seq(form, p, nu_max)
        if any(seq[nu] == 0 for nu in range(2, nu_max + 1)):
            out.append(p)
    return out


def _scan_primes(form: HeckeForm, p_max: int) -> list[int]:
    if form.kind == "table":
        return sorted(p for p in form.source[1] if p <= p_max and is_prime(p))
    if form.kind == "elliptic":
        start = 3
    else:
        start = 2
    from .arith import primes_in
    return primes_in(start, p_max) if p_max >= start else []


# ---------------------------------------------------------------------------
# symmetric powers
# ---------------------------------------------------------------------------

def symmetric_power_coeff(form: HeckeForm, m: int, p: int, nu: int):
    """Coefficient of X^nu in prod_{0<=j<=m} (1 - alpha^j beta^{m-j} X)^{-1}.

    Exact whenever lambda(p) is: power sums of the roots alpha^j beta^{m-j}
    are polynomials in s = lambda(p) and q = chi(p) p^{k-1} (via the trace
    sequence T_u = alpha^u + beta^u), Newton's identities give the elementary
    symmetric functions, and the order-(m+1) recursion produces the series.
    Satisfies lambda^{(m)}(p) = lambda(p^m).
    """
    if m < 1:
        raise ValueError("m >= 1 required")
    if form.level % p == 0:
        raise ValueError("p | N: symmetric power is ramified at p")
    if nu < 0:
        raise ValueError("nu >= 0 required")
    s = form.lambda_p(p)
    q = form.chi(p) * p ** (form.weight - 1)
    exact = isinstance(s, (int, Fraction))
    if exact:
        s = Fraction(s)
        q = Fraction(q)
    # traces T_u = alpha^u + beta^u up to u = m*(m+1)
    umax = m * (m + 1)
    T = [2, s]
    for _ in range(umax - 1):
        T.append(s * T[-1] - q * T[-2])

    def power_sum(r: int):
        total = 0
        j = 0
        while 2 * j < m:
            total += q ** (j * r) * T[(m - 2 * j) * r]
            j += 1
        if m % 2 == 0:
            total += q ** ((m // 2) * r)
        return total

    P = [None] + [power_sum(r) for r in range(1, m + 2)]
    e = [1]
    for kk in range(1, m + 2):
        acc = 0
        for i in range(1, kk + 1):
            acc += (-1) ** (i - 1) * e[kk - i] * P[i]
        e.append(Fraction(acc, kk) if exact else acc / kk)
    c = [1]
    for v in range(1, nu + 1):
        acc = 0
        for kk in range(1, min(v, m + 1) + 1):
            acc += (-1) ** (kk + 1) * e[kk] * c[v - kk]
        c.append(acc)
    val = c[nu]
    if exact and isinstance(val, Fraction) and val.denominator == 1:
        val = int(val)
    if form.normalization == "unit":
        return _unit_scale(val, p, nu * m, form.weight)
    return val


# ---------------------------------------------------------------------------
# moments and divisor cubes
# ---------------------------------------------------------------------------

@dataclass
class MomentReport:
    total: object  # Fraction or float
    ratio: object
    x: int
    r: int
    terms: int


def moment_sum(form: HeckeForm, x: int, r: int, squarefree_only: bool = False,
               coprime_to: int = 1) -> MomentReport:
    """Sum of |lambda(n)|^r over selected n <= x, plus a normalized ratio.

    Exact rationals whenever r is even and the source is exact; floats
    otherwise.  The ratio divides by x (unit normalization) or by
    x^{1 + r(k-1)/2} (arithmetic), matching the expected growth.
    """
    if r not in (2, 3, 4):
        raise ValueError("r in {2,3,4}")
    # sources with no data at a bad prime (point counting) force the sum
    # onto the coprime part
    for p in form.bad_primes():
        try:
            form.lambda_p(p)
        except MissingCoefficientError:
            coprime_to *= p
    k = form.weight
    exact = form.is_exact() and r % 2 == 0
    total: object = Fraction(0) if exact else 0.0
    terms = 0
    for n in range(1, x + 1):
        if coprime_to > 1 and math.gcd(n, coprime_to) > 1:
            continue
        if squarefree_only and any(e > 1 for _, e in factorize(n)):
            continue
        terms += 1
        if exact:
            v = _coeff_arithmetic(form, n)
            term = Fraction(v) ** r
            if form.normalization == "unit":
                term /= Fraction(n) ** (r * (k - 1) // 2)
            total += term
        else:
            v = coeff(form, n)
            total += abs(v) ** r
    if form.normalization == "unit":
        ratio = total / x if not exact else Fraction(total, x)
    else:
        denom = x ** (1 + r * (k - 1) // 2) if r % 2 == 0 else float(x) ** (1 + r * (k - 1) / 2)
        ratio = Fraction(total, denom) if exact else total / denom
    return MomentReport(total=total, ratio=ratio, x=x, r=r, terms=terms)


def _coeff_arithmetic(form: HeckeForm, n: int):
    out = 1
    for p, e in factorize(n):
        out *= _prime_power_seq(form, p, e)[e]
    return out


def divisor_cube_sum(x: int) -> int:
    """Exact sum of d(n)^3 for n <= x (sieve of divisor counts)."""
    if x < 1:
        raise ValueError("x >= 1 required")
    d = np.zeros(x + 1, dtype=np.int64)
    for i in range(1, x + 1):
        d[i::i] += 1
    return int(np.sum(d[1:] ** 3))
