import dataclasses
import json

import pytest

from arithid import registry
from arithid.errors import ResidualGuard, UnknownIdentity
from arithid.registry import PAIR_KN, PAIR_MN, REGISTRY, SINGLE_N, list_identities
from arithid.verify import (
    CSV_FIELDS,
    FAIL,
    PASS,
    SKIPPED,
    RangeConfig,
    evaluate_instance,
    report_to_csv,
    report_to_dict,
    report_to_json,
    report_to_text,
    verify_all,
    verify_identity,
)

EXPECTED_IDS = [f"I{i}" for i in range(1, 27)]
EXPECTED_NAMES = {
    "I1": "gcd-floor", "I2": "floor-reciprocity", "I3": "phi-res1", "I4": "phi-fourier",
    "I5": "phi-res2", "I6": "menon", "I7": "coprime-floor-lemma", "I8": "coprime-sum-lemma",
    "I9": "cos-sum-zero", "I10": "k-cos-sum-half", "I11": "phi-res3", "I12": "tau-toto",
    "I13": "tau-res1-form", "I14": "tau-res2-form", "I15": "tau-res3-form",
    "I16": "pillai-divisor-phi", "I17": "pillai-divisor-tau-mu", "I18": "pillai-padic-product",
    "I19": "pillai-phi-over-d", "I20": "mobius-expsum", "I21": "mobius-floor-sum",
    "I22": "kline-sine-sum", "I23": "mu2-over-phi", "I24": "phi-mult-gcd",
    "I25": "mobius-inversion-phi", "I26": "euler-product-phi",
}

SMALL = RangeConfig(max_n=30, max_pair=12, max_kn_n=12)


def test_registry_is_complete_and_ordered():
    assert [d.id for d in REGISTRY] == EXPECTED_IDS
    assert {d.id: d.name for d in REGISTRY} == EXPECTED_NAMES
    evaluators = [d.evaluator for d in REGISTRY]
    assert len(set(evaluators)) == len(evaluators)


def test_every_evaluator_form_is_covered():
    from arithid import evaluators as ev

    used = {d.evaluator for d in REGISTRY}
    for m in ev.PHI_METHODS:
        assert f"phi_paper:{m}" in used
    for f in ev.TAU_FORMS:
        assert f"tau_paper:{f}" in used
    for f in ev.PILLAI_FORMS:
        assert f"pillai_paper:{f}" in used
    for w in ev.MOBIUS_SUMS:
        assert f"mobius_identity_lhs:{w}" in used
    for lemma in ev.LEMMAS:
        assert f"lemma_sides:{lemma}" in used
    assert {"gcd_via_floor", "floor_reciprocity_sides", "menon_rhs"} <= used


def test_list_identities():
    rows = list_identities()
    assert len(rows) == 26
    by_id = {r["id"]: r for r in rows}
    assert by_id["I11"]["domain"] == "n >= 4"
    assert "0 and n/2" in by_id["I9"]["note"]
    assert all(r["mode"] in {"exact", "rational", "approx"} for r in rows)
    assert all(r["cost_class"] in {"constant", "linear", "quadratic"} for r in rows)


def test_get_unknown():
    with pytest.raises(UnknownIdentity):
        registry.get("I27")
    assert registry.get("i6").id == "I6"


def test_arity_and_minimums():
    mins = {d.id: d.min_n for d in REGISTRY}
    assert mins["I3"] == 3 and mins["I11"] == 4 and mins["I5"] == 2
    assert all(mins[i] == 2 for i in ("I8", "I9", "I10", "I14"))
    assert {d.id for d in REGISTRY if d.arity == PAIR_KN} == {"I1", "I7"}
    assert {d.id for d in REGISTRY if d.arity == PAIR_MN} == {"I2", "I24"}


@pytest.mark.parametrize("desc", REGISTRY, ids=lambda d: d.id)
def test_one_below_domain_is_skipped(desc):
    below = desc.min_n - 1
    a = 1 if desc.arity != SINGLE_N else None
    o = evaluate_instance(desc, a, below)
    assert o.status == SKIPPED
    if desc.arity != SINGLE_N:
        assert evaluate_instance(desc, 0, 5).status == SKIPPED


def test_i7_skips_non_coprime():
    d = registry.get("I7")
    assert evaluate_instance(d, 4, 6).status == SKIPPED
    assert evaluate_instance(d, 5, 6).status == PASS


def test_verify_identity_examples():
    r = verify_identity("I6", RangeConfig(max_n=2000))
    assert (r.checked, r.failed) == (2000, 0)
    r = verify_identity("I3", RangeConfig(max_n=2))
    assert (r.checked, r.skipped) == (0, 2)
    r = verify_identity("I2", RangeConfig(max_pair=50))
    assert (r.checked, r.failed) == (2500, 0)


def test_outcomes_are_ordered_by_input():
    r = verify_identity("I24", RangeConfig(max_pair=6))
    assert [o.inputs for o in r.outcomes] == [(m, n) for n in range(1, 7) for m in range(1, 7)]
    r = verify_identity("I1", RangeConfig(max_kn_n=5))
    assert [o.inputs for o in r.outcomes] == [(k, n) for n in range(1, 6) for k in range(1, 3 * n + 1)]
    assert all(o.status == PASS for o in r.outcomes)


def test_batch_and_scalar_paths_agree():
    cfg = RangeConfig(max_kn_n=25)
    for ident in ("I1", "I7"):
        desc = registry.get(ident)
        batched = verify_identity(desc, cfg)
        scalar = verify_identity(dataclasses.replace(desc, batch=None), cfg)
        assert [(o.inputs, o.status, o.lhs, o.rhs) for o in batched.outcomes] == [
            (o.inputs, o.status, o.lhs, o.rhs) for o in scalar.outcomes
        ]


def test_max_n_one():
    report = verify_all(RangeConfig(max_n=1, max_pair=1, max_kn_n=1))
    checked = {r.id for r in report.identities if r.checked}
    for ident in ("I4", "I6", "I15", "I16", "I17", "I18", "I19", "I20", "I21", "I22"):
        assert ident in checked
    for ident in ("I3", "I5", "I8", "I9", "I10", "I11", "I13", "I14"):
        assert report.section(ident).checked == 0
        assert report.section(ident).skipped == 1
    assert report.verdict == PASS


def _perturbed(ident, check):
    return dataclasses.replace(registry.get(ident), check=check)


def test_fail_fast_on_perturbed_evaluator():
    def off_by_one(a, n):
        lhs, rhs, res = registry.get("I6").check(a, n)
        return lhs + (1 if n == 7 else 0), rhs, res

    descs = [registry.get("I3"), _perturbed("I6", off_by_one), registry.get("I8")]
    report = verify_all(RangeConfig(max_n=20, fail_fast=True), descriptors=descs)
    assert report.verdict == FAIL
    assert [r.id for r in report.identities] == ["I3", "I6"]
    bad = report.section("I6")
    assert len(bad.failures) == 1 and bad.failures[0].inputs == (7,)
    assert bad.checked == 7

    full = verify_all(RangeConfig(max_n=20), descriptors=descs)
    assert [r.id for r in full.identities] == ["I3", "I6", "I8"]
    assert full.section("I6").failed == 1 and full.section("I6").checked == 20


def test_guard_trip_is_a_failure_with_payload():
    def guarded(a, n):
        raise ResidualGuard(2.5, 0.5, "probe")

    report = verify_all(RangeConfig(max_n=3), descriptors=[_perturbed("I4", guarded)])
    sec = report.section("I4")
    assert sec.failed == 3 and report.verdict == FAIL and report.guard_tripped
    assert "ResidualGuard" in sec.failures[0].error
    payload = report_to_dict(report)["identities"][0]["failures"][0]
    assert payload["inputs"] == [1] and payload["lhs"] is None and "error" in payload


def test_custom_descriptors_need_single_worker():
    with pytest.raises(ValueError):
        verify_all(RangeConfig(workers=2), descriptors=[registry.get("I3")])


def test_checked_equals_passed_plus_failed():
    report = verify_all(SMALL)
    for r in report.identities:
        assert r.checked == r.passed + r.failed
    assert report.verdict == PASS


def test_json_contract():
    report = verify_all(SMALL, ids=["I3", "I4", "I9"])
    d = json.loads(report_to_json(report))
    assert set(d) >= {"run", "identities", "verdict"}
    assert set(d["run"]) == {"config", "started_at"}
    assert d["run"]["config"]["max_n"] == 30
    assert "workers" not in d["run"]["config"]
    for sec in d["identities"]:
        assert set(sec) == {
            "id", "name", "anchor", "checked", "passed", "failed", "skipped",
            "max_residual", "elapsed_ms", "failures",
        }
    assert d["verdict"] == "pass"
    assert any("I9" in note for note in d["notes"])


def test_csv_and_text_carry_the_same_numbers():
    report = verify_all(SMALL, ids=["I3", "I5", "I24"])
    d = report_to_dict(report)
    rows = report_to_csv(report).strip().split("\n")
    assert rows[0] == ",".join(CSV_FIELDS)
    assert len(rows) == 1 + 3
    text = report_to_text(report)
    for sec in d["identities"]:
        assert f"checked={sec['checked']}" in text
        assert any(row.startswith(sec["id"] + ",") and f",{sec['checked']}," in row for row in rows[1:])


def _strip_timing(d):
    d["run"].pop("started_at")
    for sec in d["identities"]:
        sec.pop("elapsed_ms")
    return d


def test_parallel_report_matches_serial():
    cfg = RangeConfig(max_n=60, max_pair=15, max_kn_n=15)
    serial = _strip_timing(report_to_dict(verify_all(cfg)))
    parallel = _strip_timing(report_to_dict(verify_all(dataclasses.replace(cfg, workers=3))))
    assert json.dumps(serial, sort_keys=True) == json.dumps(parallel, sort_keys=True)


def test_range_config_validation():
    with pytest.raises(ValueError):
        RangeConfig(workers=0)
    with pytest.raises(ValueError):
        RangeConfig(max_pair=-1)
