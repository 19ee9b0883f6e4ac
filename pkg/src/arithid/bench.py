"""Wall-clock timing of evaluators over an n-grid."""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import reference as ref
from . import registry
from .errors import UnknownIdentity, UnknownTarget
from .evaluators import ApproxInteger
from .exact import factorize, get_sieve

_MASK = (1 << 61) - 1


@dataclass(frozen=True)
class BenchRecord:
    target: str
    n: int
    reps: int
    min_ns: int
    median_ns: int
    checksum: int

    def __post_init__(self):
        if self.reps < 3:
            raise ValueError("a benchmark record needs at least 3 reps")


def checksum(value) -> int:
    """Fold an evaluation result into a nonnegative integer."""
    if isinstance(value, ApproxInteger):
        return value.nearest & _MASK
    if isinstance(value, Fraction):
        return (value.numerator * 1_000_003 + value.denominator) & _MASK
    if isinstance(value, (tuple, list)):
        acc = 0
        for v in value:
            acc = (acc * 1_000_003 + checksum(v)) & _MASK
        return acc
    return int(value) & _MASK


# name -> (setup(n) -> argument, call(argument) -> value); setup is not timed
_FUNCTIONS: dict[str, tuple[Callable, Callable]] = {
    "phi_definition": (int, ref.phi_definition),
    "phi_factored": (factorize, ref.phi_factored),
    "tau_definition": (int, ref.tau_definition),
    "tau_factored": (factorize, ref.tau_factored),
    "mu": (factorize, ref.mu),
    "pillai_definition": (int, ref.pillai_definition),
    "jordan2": (factorize, lambda f: ref.jordan(2, f)),
    "mertens": (int, ref.mertens),
}


def targets() -> list[str]:
    return [d.id for d in registry.REGISTRY] + list(_FUNCTIONS)


def _resolve(target: str) -> tuple[Callable, Callable]:
    if target in _FUNCTIONS:
        return _FUNCTIONS[target]
    try:
        desc = registry.get(target)
    except UnknownIdentity:
        raise UnknownTarget(target) from None
    return int, desc.probe


def _time(call: Callable, arg, reps: int) -> tuple[list[int], object]:
    value = call(arg)  # warm-up, also fills any lazily built tables
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        value = call(arg)
        samples.append(max(time.perf_counter_ns() - t0, 1))
    return samples, value


def bench(targets_: Iterable[str], n_grid: Sequence[int], reps: int = 5) -> list[BenchRecord]:
    """Time each target at each n; returns one record per (target, n).

    Sieve construction and factorisation happen before the clock starts.
    """
    grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly ascending")
    if reps < 3:
        raise ValueError("reps must be >= 3")
    resolved = [(t, *_resolve(t)) for t in targets_]
    if grid:
        get_sieve()
        ref.tables(grid[-1])
    records = []
    for target, setup, call in resolved:
        for n in grid:
            arg = setup(n)
            samples, value = _time(call, arg, reps)
            records.append(
                BenchRecord(target, n, reps, min(samples), int(statistics.median(samples)), checksum(value))
            )
    return records


def loglog_slope(records: Sequence[BenchRecord]) -> float:
    """Least-squares slope of log(median time) against log(n)."""
    if len(records) < 2:
        raise ValueError("need at least two records for a slope")
    x = np.log([r.n for r in records])
    y = np.log([r.median_ns for r in records])
    return float(np.polyfit(x, y, 1)[0])


CSV_FIELDS = ("target", "n", "reps", "min_ns", "median_ns", "checksum")


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([getattr(r, f) for f in CSV_FIELDS])
    return buf.getvalue()
