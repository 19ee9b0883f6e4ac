"""The fixed catalogue of identities I1..I26.

Each :class:`IdentityDescriptor` knows how to evaluate one instance of its
identity and which independent oracle supplies the other side. The verifier
in :mod:`arithid.verify` only ever talks to descriptors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from . import evaluators as ev
from .errors import InexactDivision, UnknownIdentity
from .exact import divisors, factorize
from .reference import (
    mu,
    phi_definition,
    phi_divisor_sum_table,
    phi_factored,
    pillai_definition,
    tables,
    tau_definition,
)

SINGLE_N = "single_n"
PAIR_MN = "pair(m,n)"
PAIR_KN = "pair(k,n)"

#: Default upper n for single-n identities, by per-instance cost.
CLASS_DEFAULT_MAX_N = {"quadratic": 1000, "linear": 10_000, "constant": 100_000}

# Brute-force oracles are O(n) scans shared by several identities at the same n.
_phi_oracle = lru_cache(maxsize=None)(phi_definition)
_tau_oracle = lru_cache(maxsize=None)(tau_definition)
_pillai_oracle = lru_cache(maxsize=None)(pillai_definition)

# check(a, n) -> (lhs, rhs, residual); ``a`` is None for single-n identities
Check = Callable[[Optional[int], int], tuple]
# batch(n, others) -> (lhs array, rhs array) for every partner in ``others``
Batch = Callable[[int, np.ndarray], tuple]


@dataclass(frozen=True)
class IdentityDescriptor:
    id: str
    name: str
    anchor: str
    arity: str
    min_n: int
    domain: str
    mode: str
    cost_class: str
    evaluator: str
    check: Check
    probe: Callable[[int], object]
    batch: Optional[Batch] = None
    coprime_only: bool = False
    note: str = ""

    def in_domain(self, a: int | None, n: int) -> bool:
        if n < self.min_n:
            return False
        if a is not None and (a < 1 or (self.coprime_only and math.gcd(a, n) != 1)):
            return False
        return True

    def summary(self) -> dict:
        out = {
            "id": self.id,
            "name": self.name,
            "anchor": self.anchor,
            "arity": self.arity,
            "domain": self.domain,
            "mode": self.mode,
            "cost_class": self.cost_class,
            "evaluator": self.evaluator,
        }
        if self.note:
            out["note"] = self.note
        return out


def _sides(lhs, rhs, extra: float = 0.0):
    return lhs, rhs, max(ev.residual_of(lhs), ev.residual_of(rhs), extra)


def phi_mobius_inversion(n: int) -> int:
    """sum_{d|n} mu(d) * n/d."""
    f = factorize(n)
    t = tables(n)
    return sum(int(t.mu[d]) * (n // d) for d in divisors(f))


def phi_euler_product(n: int) -> int:
    return phi_factored(factorize(n))


def _phi_oracle_batch(n: int) -> int:
    size = 1024
    while size < n:
        size *= 2
    return int(phi_divisor_sum_table(size)[n])


# -- per-identity checks --------------------------------------------------------


def _i1(k, n):
    return _sides(ev.gcd_via_floor(k, n), math.gcd(k, n))


def _i1_batch(n, ks):
    return ev.gcd_via_floor_many(ks, n), np.gcd(ks, n)


def _i2(m, n):
    lhs, rhs = ev.floor_reciprocity_sides(m, n)
    return _sides(lhs, rhs)


def _phi(method):
    def check(_, n):
        return _sides(ev.phi_paper(n, method), _phi_oracle(n))

    return check


def _i6(_, n):
    return _sides(_phi_oracle(n) * _tau_oracle(n), ev.menon_rhs(n))


def _i7(k, n):
    lhs, rhs = ev.lemma_sides(n, "coprime_floor", k=k)
    return _sides(lhs, rhs)


def _i7_batch(n, ks):
    lhs = ev.floor_row_sums(n, ks)
    twice = (ks - 1) * (n - 1)
    if np.any(twice % 2):
        k = int(ks[np.argmax(twice % 2)])
        raise InexactDivision((k - 1) * (n - 1), 2, f"coprime_floor at k={k}, n={n}")
    return lhs, twice // 2


def _lemma(name):
    def check(_, n):
        lhs, rhs = ev.lemma_sides(n, name)
        return _sides(lhs, rhs)

    return check


def _tau(form):
    def check(_, n):
        return _sides(ev.tau_paper(n, form), _tau_oracle(n))

    return check


def _pillai(form):
    def check(_, n):
        return _sides(ev.pillai_paper(n, form), _pillai_oracle(n))

    return check


def _i20(_, n):
    re, im = ev.mobius_expsum(n)
    return _sides(re, mu(factorize(n)), abs(im))


def _mobius_const(which):
    def check(_, n):
        return _sides(ev.mobius_identity_lhs(n, which), 1)

    return check


def _i24(m, n):
    lhs, rhs = ev.lemma_sides(n, "phi_mult", m=m)
    return _sides(lhs, rhs)


def _i25(_, n):
    return _sides(phi_mobius_inversion(n), _phi_oracle_batch(n))


def _i26(_, n):
    return _sides(phi_euler_product(n), _phi_oracle_batch(n))


_COS_NOTE = (
    "sum_{k=1..n} k cos(2 pi k/n) is sometimes quoted as both 0 and n/2; "
    "the value 0 belongs to the unweighted sum (I9) and n/2 to the k-weighted sum (I10)"
)


def _build() -> tuple[IdentityDescriptor, ...]:
    D = IdentityDescriptor
    return (
        D("I1", "gcd-floor", "gcd(k,n) = 2 sum_{j=1}^{n-1} floor(jk/n) + k + n - kn",
          PAIR_KN, 1, "k >= 1, n >= 1 (swept k <= k_multiplier*n)", "exact", "linear",
          "gcd_via_floor", _i1, lambda n: ev.gcd_via_floor(max(n - 1, 1), n), batch=_i1_batch),
        D("I2", "floor-reciprocity",
          "sum_{k=1}^{n} floor(km/n) + sum_{k=1}^{m} floor(kn/m) = mn + gcd(m,n)",
          PAIR_MN, 1, "m, n >= 1", "exact", "linear",
          "floor_reciprocity_sides", _i2, lambda n: ev.floor_reciprocity_sides(max(n - 1, 1), n)),
        D("I3", "phi-res1",
          "phi(n) = 4/(n^2-3n+2) sum_{j=1}^{n-1} sum_{gcd(k,n)=1} floor(jk/n)",
          SINGLE_N, 3, "n >= 3", "exact", "quadratic",
          "phi_paper:res1", _phi("res1"), lambda n: ev.phi_paper(n, "res1")),
        D("I4", "phi-fourier", "phi(n) = sum_{k=1}^{n} gcd(k,n) cos(2 pi k/n)",
          SINGLE_N, 1, "n >= 1", "approx", "linear",
          "phi_paper:fourier", _phi("fourier"), lambda n: ev.phi_paper(n, "fourier")),
        D("I5", "phi-res2",
          "phi(n) = -n(n-1)/2 + 2 sum_{j=1}^{n-1} sum_{k=1}^{n} floor(jk/n) cos(2 pi k/n)",
          SINGLE_N, 2, "n >= 2", "approx", "quadratic",
          "phi_paper:res2", _phi("res2"), lambda n: ev.phi_paper(n, "res2")),
        D("I6", "menon", "phi(n) tau(n) = sum_{gcd(k,n)=1} gcd(k-1,n)",
          SINGLE_N, 1, "n >= 1", "exact", "linear",
          "menon_rhs", _i6, ev.menon_rhs),
        D("I7", "coprime-floor-lemma",
          "sum_{j=1}^{n-1} floor(jk/n) = (k-1)(n-1)/2 when gcd(k,n) = 1",
          PAIR_KN, 1, "k >= 1 coprime to n (swept k <= k_multiplier*n)", "exact", "linear",
          "lemma_sides:coprime_floor", _i7,
          lambda n: ev.lemma_sides(n, "coprime_floor", k=max(n - 1, 1)),
          batch=_i7_batch, coprime_only=True),
        D("I8", "coprime-sum-lemma", "sum_{gcd(k,n)=1} k = n phi(n)/2",
          SINGLE_N, 2, "n >= 2", "exact", "linear",
          "lemma_sides:coprime_sum", _lemma("coprime_sum"),
          lambda n: ev.lemma_sides(n, "coprime_sum")),
        D("I9", "cos-sum-zero", "sum_{k=1}^{n} cos(2 pi k/n) = 0",
          SINGLE_N, 2, "n >= 2", "approx", "linear",
          "lemma_sides:cos_sum", _lemma("cos_sum"), lambda n: ev.lemma_sides(n, "cos_sum"),
          note=_COS_NOTE),
        D("I10", "k-cos-sum-half", "sum_{k=1}^{n} k cos(2 pi k/n) = n/2",
          SINGLE_N, 2, "n >= 2", "approx", "linear",
          "lemma_sides:k_cos_sum", _lemma("k_cos_sum"), lambda n: ev.lemma_sides(n, "k_cos_sum"),
          note=_COS_NOTE + "; compared in doubled form, 2 sum k cos(2 pi k/n) = n"),
        D("I11", "phi-res3",
          "phi(n) = 4/(2 tau(n)+n^2-5n+2) sum_{j=1}^{n-1} sum_{gcd(k,n)=1} floor(j(k-1)/n)",
          SINGLE_N, 4, "n >= 4", "exact", "quadratic",
          "phi_paper:res3", _phi("res3"), lambda n: ev.phi_paper(n, "res3")),
        D("I12", "tau-toto",
          "tau(n) = sum_{gcd(k,n)=1} gcd(k-1,n) / sum_{k=1}^{n} gcd(k,n) cos(2 pi k/n)",
          SINGLE_N, 1, "n >= 1", "approx", "linear",
          "tau_paper:toto", _tau("toto"), lambda n: ev.tau_paper(n, "toto")),
        D("I13", "tau-res1-form",
          "tau(n) = (n^2-3n+2) sum_{gcd(k,n)=1} gcd(k-1,n) / (4 sum_j sum_{gcd(k,n)=1} floor(jk/n))",
          SINGLE_N, 3, "n >= 3", "exact", "quadratic",
          "tau_paper:res1_form", _tau("res1_form"), lambda n: ev.tau_paper(n, "res1_form")),
        D("I14", "tau-res2-form",
          "tau(n) = sum_{gcd(k,n)=1} gcd(k-1,n) / (2 sum_j sum_k floor(jk/n) cos(2 pi k/n) - n(n-1)/2)",
          SINGLE_N, 2, "n >= 2", "approx", "quadratic",
          "tau_paper:res2_form", _tau("res2_form"), lambda n: ev.tau_paper(n, "res2_form")),
        D("I15", "tau-res3-form",
          "tau(n) = (n^2-5n+2) M / (4 sum_j sum_{gcd(k,n)=1} floor(j(k-1)/n) - 2M), "
          "M = sum_{gcd(k,n)=1} gcd(k-1,n)",
          SINGLE_N, 1, "n >= 1", "exact", "quadratic",
          "tau_paper:res3_form", _tau("res3_form"), lambda n: ev.tau_paper(n, "res3_form")),
        D("I16", "pillai-divisor-phi", "P(n) = sum_{d|n} d phi(n/d)",
          SINGLE_N, 1, "n >= 1", "exact", "linear",
          "pillai_paper:divisor_phi", _pillai("divisor_phi"),
          lambda n: ev.pillai_paper(n, "divisor_phi")),
        D("I17", "pillai-divisor-tau-mu", "P(n) = sum_{d|n} d tau(d) mu(n/d)",
          SINGLE_N, 1, "n >= 1", "exact", "linear",
          "pillai_paper:divisor_tau_mu", _pillai("divisor_tau_mu"),
          lambda n: ev.pillai_paper(n, "divisor_tau_mu")),
        D("I18", "pillai-padic-product", "P(n) = n prod_{p|n} (1 + v_p(n)(1 - 1/p))",
          SINGLE_N, 1, "n >= 1", "rational", "linear",
          "pillai_paper:padic_product", _pillai("padic_product"),
          lambda n: ev.pillai_paper(n, "padic_product")),
        D("I19", "pillai-phi-over-d", "P(n) = n sum_{d|n} phi(d)/d",
          SINGLE_N, 1, "n >= 1", "rational", "linear",
          "pillai_paper:phi_over_d", _pillai("phi_over_d"),
          lambda n: ev.pillai_paper(n, "phi_over_d")),
        D("I20", "mobius-expsum", "mu(n) = sum_{gcd(k,n)=1} exp(2 pi i k/n)",
          SINGLE_N, 1, "n >= 1", "approx", "linear",
          "mobius_identity_lhs:expsum", _i20, lambda n: ev.mobius_identity_lhs(n, "expsum")),
        D("I21", "mobius-floor-sum", "sum_{k<=n} floor(n/k) mu(k) = 1",
          SINGLE_N, 1, "n >= 1", "exact", "linear",
          "mobius_identity_lhs:floor_sum", _mobius_const("floor_sum"),
          lambda n: ev.mobius_identity_lhs(n, "floor_sum")),
        D("I22", "kline-sine-sum", "sum_{jk<=n} sin(pi jk/2) mu(k) = 1",
          SINGLE_N, 1, "n >= 1", "exact", "linear",
          "mobius_identity_lhs:kline", _mobius_const("kline"),
          lambda n: ev.mobius_identity_lhs(n, "kline")),
        D("I23", "mu2-over-phi", "sum_{d|n} mu(d)^2/phi(d) = n/phi(n)",
          SINGLE_N, 1, "n >= 1", "rational", "constant",
          "lemma_sides:mu2_over_phi", _lemma("mu2_over_phi"),
          lambda n: ev.lemma_sides(n, "mu2_over_phi")),
        D("I24", "phi-mult-gcd", "phi(mn) = phi(m) phi(n) d/phi(d), d = gcd(m,n)",
          PAIR_MN, 1, "m, n >= 1", "exact", "constant",
          "lemma_sides:phi_mult", _i24, lambda n: ev.lemma_sides(n, "phi_mult", m=max(n - 1, 1)),
          note="compared cross-multiplied: phi(mn) phi(d) = phi(m) phi(n) d"),
        D("I25", "mobius-inversion-phi", "phi(n) = sum_{d|n} mu(d) n/d",
          SINGLE_N, 1, "n >= 1", "exact", "constant",
          "phi_mobius_inversion", _i25, phi_mobius_inversion,
          note="oracle: phi from the divisor-sum sieve sum_{d|n} phi(d) = n"),
        D("I26", "euler-product-phi", "phi(n) = n prod_{p|n} (1 - 1/p)",
          SINGLE_N, 1, "n >= 1", "exact", "constant",
          "phi_euler_product", _i26, phi_euler_product,
          note="oracle: phi from the divisor-sum sieve sum_{d|n} phi(d) = n"),
    )


REGISTRY: tuple[IdentityDescriptor, ...] = _build()
_BY_ID = {d.id: d for d in REGISTRY}


def get(identity_id: str) -> IdentityDescriptor:
    try:
        return _BY_ID[identity_id.upper()]
    except KeyError:
        raise UnknownIdentity(identity_id) from None


def list_identities() -> list[dict]:
    return [d.summary() for d in REGISTRY]
