import json
from dataclasses import replace

import pytest

from wakimoto.errors import ConfigError
from wakimoto.fock import FockVector
from wakimoto.kappa import KappaSpec
from wakimoto.lattice import OrderScheme
from wakimoto.realization import RealizationParams
from wakimoto.verify import (
    SUITES,
    CheckConfig,
    CheckRecord,
    check_calculus,
    check_chains,
    check_grading,
    check_h0_display,
    check_heisenberg,
    check_lemmas,
    check_relation,
    check_relations,
    check_serre,
    mutation_guard,
    report_to_json,
    resolve_suites,
    run_suites,
    sample_vectors,
    write_report,
)


def assert_all_pass(report):
    failed = {r.check_id: r.failures[:2] for r in report.records if not r.passed}
    assert not failed, failed


def test_resolve_suites():
    assert resolve_suites("all") == list(SUITES)
    assert resolve_suites("chains, heisenberg") == ["heisenberg", "chains"]
    with pytest.raises(ConfigError):
        resolve_suites("relations,bogus")


def test_config_validation(params):
    with pytest.raises(ConfigError):
        CheckConfig(params, vectors=0)
    with pytest.raises(ConfigError):
        CheckConfig(params, instance_limit=0)
    with pytest.raises(ConfigError):
        CheckConfig(params, radius=-1)


def test_sample_vectors_start_with_fixed_ones(small_config):
    vectors = sample_vectors(small_config)
    assert len(vectors) == 4
    assert vectors[0] == FockVector.constant()
    assert vectors[1].to_text() == "1*x[1,2](0,0)"
    assert vectors[2].to_text() == "1*y[1](0,1)"
    assert sample_vectors(small_config) == vectors


def test_record_keeps_bounded_witnesses():
    record = CheckRecord("demo")
    for k in range(30):
        record.compare({"k": k}, FockVector.constant(), FockVector())
    assert record.failure_count == 30
    assert len(record.failures) == 20
    assert record.failures[0] == {"inputs": {"k": 0}, "expected": "0", "actual": "1*1"}
    assert record.to_dict()["status"] == "FAIL"


def test_heisenberg(small_config):
    report = check_heisenberg(small_config)
    assert [r.check_id for r in report.records] == ["heisenberg.central", "heisenberg.bracket"]
    assert_all_pass(report)


def test_heisenberg_with_positive_cone(scheme, kappa_cone):
    params = RealizationParams(2, scheme, kappa_cone, lambdas=("1", "-1"))
    assert_all_pass(check_heisenberg(CheckConfig(params, vectors=4, instance_limit=20)))


def test_relations(small_config):
    report = check_relations(small_config)
    assert [r.check_id for r in report.records] == [
        "relation.R0ii", "relation.R1", "relation.R2E", "relation.R2F", "relation.R3",
    ]
    assert_all_pass(report)


def test_h0_display_cross_check(small_config):
    record = check_h0_display(replace(small_config, instance_limit=None))
    assert record.check_id == "realization.H0-display"
    assert record.passed
    assert record.instances == 9
    assert record.comparisons == 9 * 4
    assert record.notes == ["written-out ρ(H_0) agrees with -Σ ρ(H_r)"]


def test_relations_suite_carries_the_h0_cross_check(small_config):
    report = run_suites(replace(small_config, suites=("relations",), instance_limit=3))
    assert [r.check_id for r in report.records][-1] == "realization.H0-display"
    assert_all_pass(report)


def test_r3_at_opposite_modes(small_config):
    # the central term only shows up at m + n = 0
    cfg = replace(small_config, instance_limit=None, vectors=3)
    record = check_relation("R3", cfg)
    assert record.passed
    assert record.instances == 3 * 3 * 9 * 9


def test_serre(small_config):
    report = check_serre(small_config)
    assert_all_pass(report)


def test_serre_with_orthogonal_pairs(scheme, kappa_origin):
    params = RealizationParams(3, scheme, kappa_origin)
    cfg = CheckConfig(params, vectors=3, instance_limit=8)
    report = check_serre(cfg)
    assert_all_pass(report)
    s4ii = next(r for r in report.records if r.check_id == "relation.S4ii")
    assert s4ii.notes == ["4 orthogonal pairs checked with a single bracket"]


def test_lemmas(small_config):
    report = check_lemmas(small_config)
    ids = [r.check_id for r in report.records]
    assert ids[:3] == ["lemma.a", "lemma.b", "lemma.c"]
    assert ids[-2:] == ["lemma.c1", "lemma.kdw"]
    assert_all_pass(report)


def test_lemma_c_compares_both_orders(small_config):
    report = check_lemmas(replace(small_config, instance_limit=2, vectors=1))
    record = next(r for r in report.records if r.check_id == "lemma.c")
    assert record.comparisons == 2 * record.instances


def test_calculus(small_config):
    assert_all_pass(check_calculus(small_config, cases=15))


def test_grading(small_config):
    report = check_grading(small_config)
    assert_all_pass(report)
    assert report.records[0].instances == 12


def test_grading_is_skipped_off_origin(scheme, kappa_cone):
    params = RealizationParams(2, scheme, kappa_cone)
    record = check_grading(CheckConfig(params, vectors=2)).records[0]
    assert record.passed
    assert record.instances == 0
    assert record.notes == ["skipped: κ is supported away from the origin"]


def test_chains(small_config):
    assert_all_pass(check_chains(small_config))


def test_mutation_guard_catches_flipped_sign(small_config):
    record = mutation_guard(replace(small_config, vectors=3, instance_limit=6)).records[0]
    assert record.passed
    assert record.notes[0].startswith("mutated build failed")


def test_mutation_guard_is_insensitive_without_kappa(scheme):
    params = RealizationParams(2, scheme, KappaSpec.zero(2))
    record = mutation_guard(CheckConfig(params, vectors=2)).records[0]
    assert record.passed
    assert record.notes == ["insensitive: κ·D vanishes identically"]


def test_ramp_scheme(kappa_origin):
    params = RealizationParams(2, OrderScheme.ramp(2), kappa_origin, lambdas=("1/2", "0"))
    cfg = CheckConfig(params, vectors=3, instance_limit=6, suites="heisenberg,relations")
    assert run_suites(cfg).passed


def test_report_is_deterministic(small_config, tmp_path):
    cfg = replace(small_config, suites=("heisenberg", "chains", "calculus"), instance_limit=5)
    first = report_to_json(run_suites(cfg))
    second = report_to_json(run_suites(cfg))
    assert first == second
    path = tmp_path / "report.json"
    write_report(run_suites(cfg), path)
    assert path.read_text() == first
    data = json.loads(first)
    assert data["status"] == "PASS"
    assert data["summary"] == {"checks": 8, "failed": []}
    assert data["config"]["params"]["lambdas"] == ["-3", "1", "2"]
