"""Direct evaluators for the totient, divisor, gcd-sum and Moebius formulas.

Every evaluator computes its formula as written: floor double sums are
accumulated in exact integer arithmetic, divisions that must be exact are
checked for a zero remainder, and cosine-weighted sums are accumulated with
``math.fsum`` and then snapped to the nearest integer under a residual guard.

Three arithmetic modes appear in the return values:

* ``int`` for exact formulas,
* ``fractions.Fraction`` for the rational gcd-sum forms and ratio lemmas,
* :class:`ApproxInteger` for anything that goes through a cosine.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import (
    DegenerateDomain,
    InexactDivision,
    NonIntegerResult,
    NumericOverflow,
    ResidualGuard,
    VanishingDenominator,
)
from .exact import INT_MAX, check_width, divisors, factorize
from .reference import phi_factored, tables, tau_factored

log = logging.getLogger(__name__)

#: Rounding is refused once a float sum drifts this far from an integer.
RESIDUAL_GUARD = 0.49
#: Residuals above this are logged as suspicious but still rounded.
RESIDUAL_WARN = 1e-3
#: Largest n for which the floor double sums are guaranteed to fit in 64 bits.
MAX_FLOOR_N = 2_000_000

# elements per block when materialising j*k products
_BLOCK = 1 << 22

PHI_METHODS = ("res1", "fourier", "res2", "res3")
TAU_FORMS = ("toto", "res1_form", "res2_form", "res3_form")
PILLAI_FORMS = ("divisor_phi", "divisor_tau_mu", "padic_product", "phi_over_d")
MOBIUS_SUMS = ("expsum", "floor_sum", "kline")
LEMMAS = ("coprime_sum", "coprime_floor", "cos_sum", "k_cos_sum", "mu2_over_phi", "phi_mult")


@dataclass(frozen=True)
class ApproxInteger:
    raw: float
    nearest: int
    residual: float

    @classmethod
    def from_raw(cls, raw: float, where: str = "") -> ApproxInteger:
        if not math.isfinite(raw):
            raise ResidualGuard(raw, math.inf, where)
        nearest = round(raw)
        residual = abs(raw - nearest)
        if residual >= RESIDUAL_GUARD:
            raise ResidualGuard(raw, residual, where)
        if residual > RESIDUAL_WARN:
            log.warning("%s: residual %.3g on raw value %r", where or "approx", residual, raw)
        return cls(float(raw), int(nearest), float(residual))

    def __int__(self) -> int:
        return self.nearest


EvalValue = Union[int, Fraction, ApproxInteger]


def exact_value(v: EvalValue) -> int | Fraction:
    """The value an EvalValue stands for: the nearest integer for approximations."""
    return v.nearest if isinstance(v, ApproxInteger) else v


def residual_of(v: EvalValue) -> float:
    return v.residual if isinstance(v, ApproxInteger) else 0.0


def exact_div(num: int, den: int, where: str) -> int:
    if den == 0:
        raise VanishingDenominator(f"{where}: denominator is zero")
    q, r = divmod(num, den)
    if r:
        raise InexactDivision(num, den, where)
    return q


def _need(n: int, minimum: int, method: str) -> int:
    n = int(n)
    if n < minimum:
        raise DegenerateDomain(n, method, f"requires n >= {minimum}")
    return n


# -- floor sums ----------------------------------------------------------------


def floor_sums(count: int, mults, den: int) -> np.ndarray:
    """For each m in ``mults`` return sum_{j=1..count} floor(j*m/den) as int64.

    Raises NumericOverflow rather than wrapping when a product or a total
    could leave the signed 64-bit range.
    """
    mults = np.atleast_1d(np.asarray(mults, dtype=np.int64))
    if mults.size and int(mults.min()) < 0:
        raise ValueError("floor_sums expects nonnegative multipliers")
    mmax = int(mults.max()) if mults.size else 0
    # sum_j floor(j*m/den) <= m*count*(count+1)/(2*den)
    if mmax * count > INT_MAX or mmax * count * (count + 1) // (2 * den) > INT_MAX:
        raise NumericOverflow(f"floor sum with count={count}, multiplier={mmax} overflows 64 bits")
    out = np.zeros(mults.size, dtype=np.int64)
    if count <= 0 or mults.size == 0:
        return out
    step = max(1, _BLOCK // mults.size)
    for lo in range(1, count + 1, step):
        j = np.arange(lo, min(count, lo + step - 1) + 1, dtype=np.int64)
        out += (np.multiply.outer(j, mults) // den).sum(axis=0)
    return out


def floor_row_sums(n: int, ks) -> np.ndarray:
    """sum_{j=1..n-1} floor(j*k/n) for each k in ``ks``."""
    if n > MAX_FLOOR_N:
        raise NumericOverflow(f"n = {n} exceeds the floor-sum width guard {MAX_FLOOR_N}")
    return floor_sums(n - 1, ks, n)


def _cosines(n: int, ks: np.ndarray) -> np.ndarray:
    # reduce the angle first so large k never loses precision
    return np.cos((2.0 * math.pi) * (ks % n) / n)


def _coprime_ks(n: int) -> np.ndarray:
    keep = np.ones(n, dtype=bool)
    for p in factorize(n).primes:
        keep[p - 1 :: p] = False
    return np.flatnonzero(keep) + 1


def _gcd_residues(n: int) -> np.ndarray:
    """g[j] = gcd(j, n) for j = 0..n-1, built from the prime powers of n.

    Strided updates over n's prime powers; far cheaper than ``np.gcd`` on
    a length-n array.
    """
    g = np.ones(n, dtype=np.int64)
    for p, a in factorize(n).factors:
        q = 1
        for _ in range(a):
            q *= p
            g[::q] *= p
    return g


# -- gcd as floor sums ----------------------------------------------------------


def gcd_via_floor(k: int, n: int) -> int:
    """gcd(k, n) from 2*sum_{j<n} floor(jk/n) + k + n - kn."""
    k, n = int(k), int(n)
    if k < 1 or n < 1:
        raise DegenerateDomain((k, n), "gcd_via_floor", "requires k, n >= 1")
    s = int(floor_row_sums(n, [k])[0])
    return check_width(2 * s + k + n - k * n, "gcd_via_floor")


def gcd_via_floor_many(ks, n: int) -> np.ndarray:
    """Vectorised :func:`gcd_via_floor` over many k sharing one n."""
    ks = np.asarray(ks, dtype=np.int64)
    s = floor_row_sums(n, ks)
    return 2 * s + ks + n - ks * n


def floor_reciprocity_sides(m: int, n: int) -> tuple[int, int]:
    """(sum_{k<=n} floor(km/n) + sum_{k<=m} floor(kn/m), mn + gcd(m, n))."""
    m, n = int(m), int(n)
    if m < 1 or n < 1:
        raise DegenerateDomain((m, n), "floor_reciprocity", "requires m, n >= 1")
    lhs = int(floor_sums(n, [m], n)[0]) + int(floor_sums(m, [n], m)[0])
    return lhs, m * n + math.gcd(m, n)


# -- totient -------------------------------------------------------------------


def _floor_sum_over_coprimes(n: int, shift: int) -> int:
    """sum over k coprime to n of sum_{j<n} floor(j(k - shift)/n)."""
    ks = _coprime_ks(n) - shift
    return int(floor_row_sums(n, ks).sum())


def fourier_sum(n: int) -> float:
    """sum_{k=1..n} gcd(k, n) cos(2 pi k/n), compensated."""
    k = np.arange(1, n + 1, dtype=np.int64)
    return math.fsum((_gcd_residues(n)[k % n] * _cosines(n, k)).tolist())


def weighted_floor_cosine_sum(n: int) -> float:
    """sum_{j=1..n-1} sum_{k=1..n} floor(jk/n) cos(2 pi k/n), compensated.

    The inner j-sum for each k is an exact integer; only the final cosine
    weighting is done in floating point.
    """
    k = np.arange(1, n + 1, dtype=np.int64)
    rows = floor_row_sums(n, k)
    return math.fsum((rows * _cosines(n, k)).tolist())


def phi_paper(n: int, method: str) -> EvalValue:
    """Euler's totient through one of the floor-sum or Fourier formulas.

    ``res1`` and ``res3`` return ``int`` and insist on exact division;
    ``fourier`` and ``res2`` return :class:`ApproxInteger`.
    """
    if method == "res1":
        n = _need(n, 3, "phi/res1")
        s = _floor_sum_over_coprimes(n, 0)
        return exact_div(4 * s, (n - 1) * (n - 2), f"phi/res1 at n={n}")
    if method == "fourier":
        n = _need(n, 1, "phi/fourier")
        return ApproxInteger.from_raw(fourier_sum(n), f"phi/fourier at n={n}")
    if method == "res2":
        n = _need(n, 2, "phi/res2")
        raw = -n * (n - 1) / 2 + 2 * weighted_floor_cosine_sum(n)
        return ApproxInteger.from_raw(raw, f"phi/res2 at n={n}")
    if method == "res3":
        n = _need(n, 4, "phi/res3")
        s = _floor_sum_over_coprimes(n, 1)
        den = 2 * tau_factored(n) + n * n - 5 * n + 2
        return exact_div(4 * s, den, f"phi/res3 at n={n}")
    raise ValueError(f"unknown totient method {method!r}; expected one of {PHI_METHODS}")


def menon_rhs(n: int) -> int:
    """sum of gcd(k - 1, n) over k in 1..n coprime to n."""
    n = _need(n, 1, "menon")
    ks = _coprime_ks(n)
    return int(_gcd_residues(n)[ks - 1].sum())


# -- divisor count --------------------------------------------------------------


def tau_paper(n: int, form: str) -> EvalValue:
    """Divisor count from Menon's sum divided by one of the totient formulas."""
    if form == "toto":
        n = _need(n, 1, "tau/toto")
        den = fourier_sum(n)
        if den == 0:
            raise VanishingDenominator(f"tau/toto at n={n}: Fourier sum is zero")
        return ApproxInteger.from_raw(menon_rhs(n) / den, f"tau/toto at n={n}")
    if form == "res1_form":
        n = _need(n, 3, "tau/res1_form")
        s = _floor_sum_over_coprimes(n, 0)
        return exact_div((n * n - 3 * n + 2) * menon_rhs(n), 4 * s, f"tau/res1_form at n={n}")
    if form == "res2_form":
        n = _need(n, 2, "tau/res2_form")
        den = 2 * weighted_floor_cosine_sum(n) - n * (n - 1) / 2
        if den == 0:
            raise VanishingDenominator(f"tau/res2_form at n={n}: denominator is zero")
        return ApproxInteger.from_raw(menon_rhs(n) / den, f"tau/res2_form at n={n}")
    if form == "res3_form":
        n = _need(n, 1, "tau/res3_form")
        s = _floor_sum_over_coprimes(n, 1)
        m = menon_rhs(n)
        return exact_div((n * n - 5 * n + 2) * m, 4 * s - 2 * m, f"tau/res3_form at n={n}")
    raise ValueError(f"unknown divisor-count form {form!r}; expected one of {TAU_FORMS}")


# -- gcd-sum (Pillai) -----------------------------------------------------------


def pillai_paper(n: int, form: str) -> EvalValue:
    n = _need(n, 1, f"pillai/{form}")
    f = factorize(n)
    t = tables(n)
    phi, tau, mu_ = t.phi, t.tau, t.mu
    if form == "divisor_phi":
        return sum(d * int(phi[n // d]) for d in divisors(f))
    if form == "divisor_tau_mu":
        return sum(d * int(tau[d]) * int(mu_[n // d]) for d in divisors(f))
    if form == "padic_product":
        v = Fraction(n)
        for p, e in f.factors:
            v *= 1 + e * (1 - Fraction(1, p))
    elif form == "phi_over_d":
        v = n * sum((Fraction(int(phi[d]), d) for d in divisors(f)), Fraction(0))
    else:
        raise ValueError(f"unknown gcd-sum form {form!r}; expected one of {PILLAI_FORMS}")
    if v.denominator != 1:
        raise NonIntegerResult(f"pillai/{form} at n={n} gave {v}")
    return v


# -- Moebius --------------------------------------------------------------------


def mobius_expsum(n: int) -> tuple[ApproxInteger, float]:
    """Real part (snapped) and raw imaginary part of sum_{gcd(k,n)=1} exp(2 pi i k/n)."""
    n = _need(n, 1, "mobius/expsum")
    ks = _coprime_ks(n)
    angle = (2.0 * math.pi) * (ks % n) / n
    re = math.fsum(np.cos(angle).tolist())
    im = math.fsum(np.sin(angle).tolist())
    if abs(im) >= RESIDUAL_GUARD:
        raise ResidualGuard(im, abs(im), f"mobius/expsum imaginary part at n={n}")
    return ApproxInteger.from_raw(re, f"mobius/expsum at n={n}"), im


# sin(pi*x/2) for x mod 4
_QUARTER_SINE = np.array([0, 1, 0, -1], dtype=np.int64)


def mobius_identity_lhs(n: int, which: str) -> EvalValue:
    if which == "expsum":
        return mobius_expsum(n)[0]
    n = _need(n, 1, f"mobius/{which}")
    mu_ = tables(n).mu
    if which == "floor_sum":
        k = np.arange(1, n + 1, dtype=np.int64)
        return int(((n // k) * mu_[1 : n + 1]).sum())
    if which == "kline":
        k = np.arange(1, n + 1, dtype=np.int64)
        k = k[mu_[1 : n + 1] != 0]
        counts = n // k
        ks = np.repeat(k, counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        js = np.arange(ks.size, dtype=np.int64) - starts + 1
        return int((_QUARTER_SINE[(js * ks) % 4] * mu_[ks]).sum())
    raise ValueError(f"unknown Moebius sum {which!r}; expected one of {MOBIUS_SUMS}")


# -- auxiliary lemmas ------------------------------------------------------------


def lemma_sides(n: int, lemma: str, *, k: int | None = None, m: int | None = None):
    """Both sides of one of the auxiliary identities, for a verifier to compare.

    ``k_cos_sum`` is returned doubled, as (2 * sum k cos(2 pi k/n), n), because
    n/2 is a half-integer for odd n and cannot be snapped to an integer.
    """
    if lemma == "coprime_sum":
        n = _need(n, 2, "lemma/coprime_sum")
        lhs = int(_coprime_ks(n).sum())
        return lhs, exact_div(n * phi_factored(n), 2, f"coprime_sum at n={n}")
    if lemma == "coprime_floor":
        n = _need(n, 1, "lemma/coprime_floor")
        if k is None or k < 1 or math.gcd(k, n) != 1:
            raise DegenerateDomain((k, n), "lemma/coprime_floor", "requires k >= 1 coprime to n")
        lhs = int(floor_row_sums(n, [k])[0])
        return lhs, exact_div((k - 1) * (n - 1), 2, f"coprime_floor at k={k}, n={n}")
    if lemma == "cos_sum":
        n = _need(n, 2, "lemma/cos_sum")
        ks = np.arange(1, n + 1, dtype=np.int64)
        return ApproxInteger.from_raw(math.fsum(_cosines(n, ks).tolist()), f"cos_sum at n={n}"), 0
    if lemma == "k_cos_sum":
        n = _need(n, 2, "lemma/k_cos_sum")
        ks = np.arange(1, n + 1, dtype=np.int64)
        raw = 2 * math.fsum((ks * _cosines(n, ks)).tolist())
        return ApproxInteger.from_raw(raw, f"k_cos_sum at n={n}"), n
    if lemma == "mu2_over_phi":
        n = _need(n, 1, "lemma/mu2_over_phi")
        t = tables(n)
        lhs = sum((Fraction(int(t.mu[d]) ** 2, int(t.phi[d])) for d in divisors(n)), Fraction(0))
        return lhs, Fraction(n, int(t.phi[n]))
    if lemma == "phi_mult":
        n = _need(n, 1, "lemma/phi_mult")
        if m is None or m < 1:
            raise DegenerateDomain((m, n), "lemma/phi_mult", "requires m >= 1")
        d = math.gcd(m, n)
        return phi_factored(m * n) * phi_factored(d), phi_factored(m) * phi_factored(n) * d
    raise ValueError(f"unknown lemma {lemma!r}; expected one of {LEMMAS}")
