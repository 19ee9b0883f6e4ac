"""Reference arithmetic functions used as oracles.

Each function has a definition-based variant (a direct scan, no number theory
beyond gcd) and, where it makes sense, a variant that works from the prime
factorisation. The two are kept deliberately independent so that each can
check the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exact import FactoredInteger, as_factored, check_width, get_sieve

FUNCTION_NAMES = ("phi", "tau", "mu", "pillai", "jordan", "mertens")


@dataclass(frozen=True)
class ArithFunctionId:
    name: str
    k: int | None = None

    def __post_init__(self):
        if self.name not in FUNCTION_NAMES:
            raise ValueError(f"unknown arithmetic function {self.name!r}")
        if (self.name == "jordan") != (self.k is not None):
            raise ValueError("the parameter k is required for jordan and only for jordan")
        if self.k is not None and self.k < 1:
            raise ValueError("jordan needs k >= 1")


def _require_positive(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    return n


def phi_definition(n: int) -> int:
    """Count of k in 1..n with gcd(k, n) = 1."""
    n = _require_positive(n)
    k = np.arange(1, n + 1, dtype=np.int64)
    return int(np.count_nonzero(np.gcd(k, n) == 1))


def phi_factored(n: int | FactoredInteger) -> int:
    f = as_factored(n)
    v = f.value
    for p in f.primes:
        v = v // p * (p - 1)
    return v


def tau_definition(n: int) -> int:
    """Number of d in 1..n dividing n."""
    n = _require_positive(n)
    d = np.arange(1, n + 1, dtype=np.int64)
    return int(np.count_nonzero(n % d == 0))


def tau_factored(n: int | FactoredInteger) -> int:
    v = 1
    for _, e in as_factored(n).factors:
        v *= e + 1
    return v


def mu(n: int | FactoredInteger) -> int:
    f = as_factored(n)
    if not f.is_squarefree():
        return 0
    return -1 if len(f.factors) % 2 else 1


def pillai_definition(n: int) -> int:
    """Gcd-sum: sum of gcd(k, n) over k = 1..n."""
    n = _require_positive(n)
    k = np.arange(1, n + 1, dtype=np.int64)
    return int(np.gcd(k, n).sum())


def jordan(k: int, n: int | FactoredInteger) -> int:
    """Jordan totient J_k(n), computed prime by prime with exact division."""
    if k < 1:
        raise ValueError("jordan needs k >= 1")
    f = as_factored(n)
    v = check_width(f.value**k, f"{f.value}**{k}")
    for p in f.primes:
        pk = p**k
        v = v // pk * (pk - 1)
    return v


def mertens(n: int) -> int:
    n = _require_positive(n)
    return int(tables(n).mu[1 : n + 1].sum())


class ArithTables:
    """phi, tau and mu for 0..limit from the smallest-prime-factor sieve.

    Index 0 holds 0 in every table. Arrays are read-only.
    """

    def __init__(self, limit: int):
        limit = max(int(limit), 1)
        spf = get_sieve(max(limit, 2)).spf[: limit + 1].tolist()
        phi = [0, 1] + [0] * (limit - 1)
        tau = [0, 1] + [0] * (limit - 1)
        mu_ = [0, 1] + [0] * (limit - 1)
        # exponent of spf(i) in i, and i with that prime power removed
        exp = [0, 0] + [0] * (limit - 1)
        rest = [0, 1] + [0] * (limit - 1)
        for i in range(2, limit + 1):
            p = spf[i]
            m = i // p
            if m % p == 0:
                exp[i] = exp[m] + 1
                rest[i] = rest[m]
                phi[i] = phi[m] * p
                tau[i] = tau[rest[i]] * (exp[i] + 1)
                mu_[i] = 0
            else:
                exp[i] = 1
                rest[i] = m
                phi[i] = phi[m] * (p - 1)
                tau[i] = tau[m] * 2
                mu_[i] = -mu_[m]
        self.limit = limit
        self.phi = _frozen(phi[: limit + 1])
        self.tau = _frozen(tau[: limit + 1])
        self.mu = _frozen(mu_[: limit + 1])


def _frozen(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=4)
def _tables(limit: int) -> ArithTables:
    return ArithTables(limit)


def tables(limit: int) -> ArithTables:
    """Shared tables covering at least 0..limit (sizes are rounded up to a power of two)."""
    size = 1024
    while size < limit:
        size *= 2
    return _tables(size)


@lru_cache(maxsize=2)
def phi_divisor_sum_table(limit: int) -> np.ndarray:
    """phi(0..limit) from the relation sum_{d|n} phi(d) = n alone.

    No factorisation is involved, which makes this a batch oracle that is
    independent of both the sieve tables and the product formula.
    """
    limit = max(int(limit), 1)
    phi = np.arange(limit + 1, dtype=np.int64)
    for d in range(1, limit // 2 + 1):
        phi[2 * d :: d] -= phi[d]
    phi.setflags(write=False)
    return phi
