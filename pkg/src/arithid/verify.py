"""Sweep engine: evaluate identities over ranges and aggregate the outcomes.

Work is split into *blocks*, one per value of n. A block holds a single
instance for single-n identities and every partner (k or m) for pair
identities. Blocks are independent, so they can be farmed out to worker
processes; results are always merged back in block order, which keeps the
report identical whatever the worker count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import registry
from .errors import ArithIdError, DegenerateDomain, NumericGuardError
from .evaluators import ApproxInteger, exact_value
from .registry import CLASS_DEFAULT_MAX_N, PAIR_KN, PAIR_MN, SINGLE_N, IdentityDescriptor

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped_degenerate"


@dataclass(frozen=True)
class RangeConfig:
    """Sweep ranges.

    ``max_n`` overrides the cost-class defaults for every single-n identity
    and also caps n for the pair(k, n) identities when it is smaller than
    ``max_kn_n``.
    """

    max_n: Optional[int] = None
    max_pair: int = 200
    k_multiplier: int = 3
    max_kn_n: int = 500
    fail_fast: bool = False
    workers: int = 1
    keep_outcomes: bool = False

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        for name in ("max_pair", "k_multiplier", "max_kn_n"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.max_n is not None and self.max_n < 0:
            raise ValueError("max_n must be nonnegative")

    def blocks(self, desc: IdentityDescriptor) -> list[int]:
        if desc.arity == SINGLE_N:
            top = self.max_n if self.max_n is not None else CLASS_DEFAULT_MAX_N[desc.cost_class]
        elif desc.arity == PAIR_MN:
            top = self.max_pair
        else:
            top = self.max_kn_n if self.max_n is None else min(self.max_kn_n, self.max_n)
        return list(range(1, top + 1))

    def partners(self, desc: IdentityDescriptor, n: int) -> Optional[np.ndarray]:
        if desc.arity == SINGLE_N:
            return None
        top = self.max_pair if desc.arity == PAIR_MN else self.k_multiplier * n
        return np.arange(1, top + 1, dtype=np.int64)

    def as_dict(self) -> dict:
        # worker count is an execution detail and must not change the report
        return {
            "max_n": self.max_n,
            "max_pair": self.max_pair,
            "k_multiplier": self.k_multiplier,
            "max_kn_n": self.max_kn_n,
            "fail_fast": self.fail_fast,
        }


@dataclass
class VerificationOutcome:
    identity: str
    inputs: tuple
    status: str
    lhs: object = None
    rhs: object = None
    residual: float = 0.0
    error: Optional[str] = None
    guard_tripped: bool = False


@dataclass
class IdentityReport:
    id: str
    name: str
    anchor: str
    checked: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    max_residual: float = 0.0
    elapsed_ms: float = 0.0
    failures: list = field(default_factory=list)
    outcomes: Optional[list] = None
    guard_tripped: bool = False

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def absorb(self, other: IdentityReport) -> None:
        self.checked += other.checked
        self.passed += other.passed
        self.failed += other.failed
        self.skipped += other.skipped
        self.max_residual = max(self.max_residual, other.max_residual)
        self.failures.extend(other.failures)
        if other.outcomes is not None:
            self.outcomes = (self.outcomes or []) + other.outcomes
        self.guard_tripped = self.guard_tripped or other.guard_tripped

    def record(self, o: VerificationOutcome, keep: bool) -> None:
        if o.status == SKIPPED:
            self.skipped += 1
        else:
            self.checked += 1
            self.max_residual = max(self.max_residual, o.residual)
            if o.status == PASS:
                self.passed += 1
            else:
                self.failed += 1
                self.failures.append(o)
                self.guard_tripped = self.guard_tripped or o.guard_tripped
        if keep:
            if self.outcomes is None:
                self.outcomes = []
            self.outcomes.append(o)


@dataclass
class RunReport:
    config: dict
    started_at: str
    identities: list
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return PASS if all(r.failed == 0 for r in self.identities) else FAIL

    @property
    def guard_tripped(self) -> bool:
        return any(r.guard_tripped for r in self.identities)

    def section(self, identity_id: str) -> IdentityReport:
        for r in self.identities:
            if r.id == identity_id:
                return r
        raise KeyError(identity_id)


# -- evaluation ----------------------------------------------------------------------


def _inputs(desc: IdentityDescriptor, a, n) -> tuple:
    return (int(n),) if a is None else (int(a), int(n))


def evaluate_instance(desc: IdentityDescriptor, a: Optional[int], n: int) -> VerificationOutcome:
    """Run one instance. Errors inside the domain become failures, never crashes."""
    inputs = _inputs(desc, a, n)
    if not desc.in_domain(a, n):
        return VerificationOutcome(desc.id, inputs, SKIPPED)
    try:
        lhs, rhs, residual = desc.check(a, n)
    except DegenerateDomain:
        return VerificationOutcome(desc.id, inputs, SKIPPED)
    except (ArithIdError, ArithmeticError) as exc:
        return VerificationOutcome(
            desc.id, inputs, FAIL, residual=0.0,
            error=f"{type(exc).__name__}: {exc}",
            guard_tripped=isinstance(exc, (NumericGuardError, OverflowError)),
        )
    status = PASS if exact_value(lhs) == exact_value(rhs) else FAIL
    return VerificationOutcome(desc.id, inputs, status, lhs, rhs, residual)


def _run_block(desc: IdentityDescriptor, n: int, cfg: RangeConfig, rep: IdentityReport) -> None:
    partners = cfg.partners(desc, n)
    keep = cfg.keep_outcomes
    if partners is None:
        rep.record(evaluate_instance(desc, None, n), keep)
        return
    if desc.batch is not None:
        mask = np.array([desc.in_domain(int(a), n) for a in partners], dtype=bool)
        live = partners[mask]
        try:
            lhs, rhs = desc.batch(n, live) if live.size else (live, live)
        except (ArithIdError, ArithmeticError):
            lhs = None
        if lhs is not None:
            equal = np.asarray(lhs) == np.asarray(rhs)
            if equal.all() and not keep:
                rep.skipped += int((~mask).sum())
                rep.checked += int(live.size)
                rep.passed += int(live.size)
                return
            vals = iter(zip(live.tolist(), np.asarray(lhs).tolist(), np.asarray(rhs).tolist()))
            for a, ok in zip(partners.tolist(), mask.tolist()):
                if not ok:
                    rep.record(VerificationOutcome(desc.id, (a, n), SKIPPED), keep)
                    continue
                _, l, r = next(vals)
                rep.record(VerificationOutcome(desc.id, (a, n), PASS if l == r else FAIL, l, r), keep)
            return
    for a in partners.tolist():
        o = evaluate_instance(desc, a, n)
        rep.record(o, keep)
        if cfg.fail_fast and o.status == FAIL:
            return


def _fresh(desc: IdentityDescriptor) -> IdentityReport:
    return IdentityReport(desc.id, desc.name, desc.anchor)


def _run_chunk(identity_id: str, ns: list[int], cfg: RangeConfig) -> list[tuple[int, IdentityReport]]:
    desc = registry.get(identity_id)
    out = []
    for n in ns:
        rep = _fresh(desc)
        _run_block(desc, n, cfg, rep)
        out.append((n, rep))
    return out


def _sweep(desc: IdentityDescriptor, cfg: RangeConfig, pool: Optional[ProcessPoolExecutor]) -> IdentityReport:
    t0 = time.perf_counter()
    rep = _fresh(desc)
    ns = cfg.blocks(desc)
    if pool is None:
        for n in ns:
            _run_block(desc, n, cfg, rep)
            if cfg.fail_fast and rep.failed:
                break
    else:
        # strided chunks balance the growing per-block cost
        nchunks = min(len(ns), 4 * cfg.workers) or 1
        futures = [pool.submit(_run_chunk, desc.id, ns[i::nchunks], cfg) for i in range(nchunks)]
        parts = [item for f in futures for item in f.result()]
        parts.sort(key=lambda item: item[0])
        for _, part in parts:
            rep.absorb(part)
    rep.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return rep


def _descriptors(ids: Optional[Sequence[str]]) -> list[IdentityDescriptor]:
    if not ids:
        return list(registry.REGISTRY)
    return [registry.get(i) for i in ids]


def verify_identity(identity, cfg: RangeConfig = RangeConfig()) -> IdentityReport:
    """Sweep one identity (an id such as ``"I6"`` or a descriptor) single-threaded.

    The returned report always carries the full outcome list, ordered by input.
    """
    desc = identity if isinstance(identity, IdentityDescriptor) else registry.get(identity)
    if not cfg.keep_outcomes:
        cfg = RangeConfig(**{**cfg.__dict__, "keep_outcomes": True})
    return _sweep(desc, cfg, None)


def verify_all(
    cfg: RangeConfig = RangeConfig(),
    ids: Optional[Sequence[str]] = None,
    descriptors: Optional[Sequence[IdentityDescriptor]] = None,
) -> RunReport:
    """Run every selected identity and collect a :class:`RunReport`.

    ``descriptors`` replaces the registry lookup entirely; it exists so a
    harness can be exercised against deliberately broken identities and is
    only honoured in single-worker mode.
    """
    descs = list(descriptors) if descriptors is not None else _descriptors(ids)
    if descriptors is not None and cfg.workers > 1:
        raise ValueError("custom descriptors can only be verified with workers=1")
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    config = {**cfg.as_dict(), "ids": [d.id for d in descs]}
    reports = []
    pool = ProcessPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        for desc in descs:
            rep = _sweep(desc, cfg, pool)
            reports.append(rep)
            if cfg.fail_fast and rep.failed:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    notes = [f"{d.id}: {d.note}" for d in descs if d.note]
    return RunReport(config, started, reports, notes)


# -- serialisation -----------------------------------------------------------------


def value_to_json(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, ApproxInteger):
        return {"raw": v.raw, "nearest": v.nearest, "residual": v.residual}
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, float):
        return v if math.isfinite(v) else str(v)
    return str(v)


def _failure_json(o: VerificationOutcome) -> dict:
    out = {
        "inputs": list(o.inputs),
        "lhs": value_to_json(o.lhs),
        "rhs": value_to_json(o.rhs),
        "residual": o.residual,
    }
    if o.error:
        out["error"] = o.error
    return out


def report_to_dict(report: RunReport) -> dict:
    return {
        "run": {"config": report.config, "started_at": report.started_at},
        "identities": [
            {
                "id": r.id,
                "name": r.name,
                "anchor": r.anchor,
                "checked": r.checked,
                "passed": r.passed,
                "failed": r.failed,
                "skipped": r.skipped,
                "max_residual": r.max_residual,
                "elapsed_ms": round(r.elapsed_ms, 3),
                "failures": [_failure_json(o) for o in r.failures],
            }
            for r in report.identities
        ],
        "notes": report.notes,
        "verdict": report.verdict,
    }


def report_to_json(report: RunReport, indent: int = 2) -> str:
    return json.dumps(report_to_dict(report), indent=indent, ensure_ascii=False)


CSV_FIELDS = ("id", "name", "anchor", "checked", "passed", "failed", "skipped", "max_residual", "elapsed_ms")


def report_to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    d = report_to_dict(report)
    for row in d["identities"]:
        w.writerow([row[f] for f in CSV_FIELDS])
    return buf.getvalue()


def report_to_text(report: RunReport) -> str:
    lines = []
    for r in report.identities:
        mark = "ok  " if r.ok else "FAIL"
        lines.append(
            f"{mark} {r.id:<4} {r.name:<24} checked={r.checked:<7} failed={r.failed:<5} "
            f"skipped={r.skipped:<6} max_residual={r.max_residual:.3g} ({r.elapsed_ms:.0f} ms)"
        )
        for o in r.failures[:5]:
            detail = o.error or f"lhs={value_to_json(o.lhs)} rhs={value_to_json(o.rhs)}"
            lines.append(f"       at {o.inputs}: {detail}")
        if len(r.failures) > 5:
            lines.append(f"       ... {len(r.failures) - 5} more")
    for note in report.notes:
        lines.append(f"note {note}")
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines) + "\n"
