"""Explicit totient, divisor-count and gcd-sum formulas, with oracle checks.

The subpackages are layered bottom-up:

``exact``       gcd, factorisation, divisors, reduced fractions
``reference``   brute-force and factorisation-based oracles
``evaluators``  the floor-sum, Fourier and gcd-sum formulas themselves
``registry``    the fixed catalogue of identities I1..I26
``verify``      range sweeps and reports
``bench``       timing over n grids
"""

from .errors import (
    ArithIdError,
    DegenerateDomain,
    InexactDivision,
    NonIntegerResult,
    NumericOverflow,
    ResidualGuard,
    UnknownIdentity,
    UnknownTarget,
    VanishingDenominator,
)
from .evaluators import (
    ApproxInteger,
    floor_reciprocity_sides,
    gcd_via_floor,
    lemma_sides,
    menon_rhs,
    mobius_identity_lhs,
    phi_paper,
    pillai_paper,
    tau_paper,
)
from .exact import ExactRational, FactoredInteger, divisors, factorize, gcd
from .reference import (
    jordan,
    mertens,
    mu,
    phi_definition,
    phi_factored,
    pillai_definition,
    tau_definition,
    tau_factored,
)
from .registry import REGISTRY, list_identities
from .verify import RangeConfig, RunReport, verify_all, verify_identity

__version__ = "0.1.0"
