"""Exact integer and rational primitives.

Everything here works on Python integers; the 64-bit bound ``INT_MAX`` is
enforced explicitly so that results stay portable to fixed-width code and so
that overflow is reported instead of silently absorbed.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt, prod

import numpy as np

from .errors import NumericOverflow

INT_MAX = 2**63 - 1
DEFAULT_SIEVE_LIMIT = 10**6

#: Reduced fraction. ``fractions.Fraction`` already normalises on construction
#: and after every operation, and compares structurally on (num, den).
ExactRational = Fraction


def check_width(value: int, what: str = "value") -> int:
    """Return ``value`` unchanged, raising if it does not fit in a signed 64-bit word."""
    if -INT_MAX - 1 <= value <= INT_MAX:
        return value
    raise NumericOverflow(f"{what} = {value} exceeds the supported 64-bit width")


def gcd(a: int, b: int) -> int:
    """Euclidean gcd on nonnegative integers, with ``gcd(0, 0) == 0``."""
    if a < 0 or b < 0:
        raise ValueError("gcd expects nonnegative arguments")
    while b:
        a, b = b, a % b
    return a


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its canonical prime factorisation."""

    value: int
    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(p), int(e)) for p, e in self.factors))
        if self.value < 1:
            raise ValueError(f"FactoredInteger needs a positive value, got {self.value}")
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1 or not is_prime(p):
                raise ValueError(f"malformed factorisation {self.factors!r}")
            last = p
        if prod(p**e for p, e in self.factors) != self.value:
            raise ValueError(f"factors {self.factors!r} do not multiply to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def __int__(self) -> int:
        return self.value


class SpfSieve:
    """Smallest-prime-factor table for 0..limit, immutable once built."""

    def __init__(self, limit: int):
        limit = max(int(limit), 2)
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, isqrt(limit) + 1):
            if spf[p] == 0:
                block = spf[p * p :: p]
                block[block == 0] = p
        idx = np.nonzero(spf == 0)[0]
        spf[idx] = idx
        spf[0] = 0
        spf[1] = 1
        spf.setflags(write=False)
        self.limit = limit
        self.spf = spf
        self._spf_list = spf.tolist()
        self._primes: list[int] | None = None

    def factor(self, n: int) -> list[tuple[int, int]]:
        spf = self._spf_list
        out: list[tuple[int, int]] = []
        while n > 1:
            p = spf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def primes(self) -> list[int]:
        if self._primes is None:
            idx = np.arange(self.limit + 1)
            self._primes = idx[(self.spf == idx) & (idx >= 2)].tolist()
        return self._primes


_sieve_lock = threading.Lock()


@lru_cache(maxsize=8)
def _build_sieve(limit: int) -> SpfSieve:
    return SpfSieve(limit)


def get_sieve(limit: int = DEFAULT_SIEVE_LIMIT) -> SpfSieve:
    with _sieve_lock:
        return _build_sieve(int(limit))


def _trial_division(n: int, start_factors: list[tuple[int, int]], start: int) -> list[tuple[int, int]]:
    factors = list(start_factors)
    p = start
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        factors.append((n, 1))
    return factors


def factorize(n: int, sieve_limit: int = DEFAULT_SIEVE_LIMIT) -> FactoredInteger:
    """Factor ``n`` via the smallest-prime-factor sieve, falling back to trial division.

    Values above ``sieve_limit`` are first stripped of every sieve prime and
    the remaining cofactor is trial-divided from there.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    check_width(n, "n")
    sieve = get_sieve(sieve_limit)
    if n <= sieve.limit:
        return FactoredInteger(n, tuple(sieve.factor(n)))
    factors: list[tuple[int, int]] = []
    m = n
    for p in sieve.primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    start = sieve.limit + 1
    if start % 2 == 0:
        start += 1
    factors = _trial_division(m, factors, start) if m > 1 else factors
    return FactoredInteger(n, tuple(factors))


def as_factored(n: int | FactoredInteger) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(n)


def divisors(n: int | FactoredInteger) -> list[int]:
    """All positive divisors of ``n`` in ascending order."""
    f = as_factored(n)
    divs = [1]
    for p, e in f.factors:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    divs.sort()
    return divs
