import time
from fractions import Fraction

import pytest

from classes.campaign_class import campaign_payload, campaign_seeds, run_campaign
from classes.certifier_class import Condition, Verdict
from classes.harness_class import EdgeStatus, aux_parameters, first_kink, run_implication_harness
from classes.instance_class import load_builtin
from classes.probe_class import ProbeVariant
from classes.settings_class import Settings


def _harness(inst, expected=None):
    return run_implication_harness(inst.f, inst.x0, inst.testset, inst.search,
                                   expected=inst.expected if expected is None else expected)


def _edge(report, label):
    return next(e for e in report.edges if e.label == label)


@pytest.mark.parametrize("spec", ["r2-minty-gap", "pareto-identity", "extreals-oracle", "linf-truncated:3"])
def test_builtins_respect_every_implication(spec):
    report = _harness(load_builtin(spec))
    assert report.violations == []


@pytest.mark.slow
def test_default_linf_respects_every_implication():
    report = _harness(load_builtin("linf-truncated"))
    assert report.violations == []


def test_r2_is_flagged_interesting(r2):
    report = _harness(r2)
    assert report.interesting
    assert report.verdict(Condition.MVI_M_SCALAR).holds
    assert report.probe(ProbeVariant.BSTAR_LSC).passed


def test_lsc_edge_is_refuted_off_the_testset(r2):
    edge = _edge(_harness(r2), "mvi_M => Min [bstar-lsc at x0]")
    assert edge.status == EdgeStatus.PASS
    assert "t = 1/4" in edge.chain
    assert "x_t = (1/2)" in edge.chain


def test_vector_edge_is_skipped_without_a_vector_map(r2):
    edge = _edge(_harness(r2), "mvi_M => Min [C-continuous vector extension]")
    assert edge.status == EdgeStatus.SKIPPED


def test_wrong_expectation_is_reported(r2):
    expected = dict(r2.expected)
    expected[Condition.MIN] = Verdict.HOLDS
    report = _harness(r2, expected)
    assert [(e.antecedent, e.consequent) for e in report.violations] == [("expect", "Min")]


def test_aux_steps_stay_inside_the_unit_interval(r2):
    x = (Fraction(0),)
    assert first_kink(r2.f, r2.x0, x) == 1
    steps = aux_parameters(r2.f, r2.x0, x, Settings())
    assert steps == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]


def test_campaign_seeds_are_reproducible():
    assert campaign_seeds(7, 5) == campaign_seeds(7, 5)
    assert campaign_seeds(7, 5) != campaign_seeds(8, 5)


def test_small_campaign_payload():
    summary = run_campaign(7, 3)
    payload = campaign_payload(summary)
    assert payload["count"] == 3
    assert payload["violations"] == []
    assert sum(payload["edge_statuses"].values()) > 0


@pytest.mark.slow
def test_campaign_has_no_violations():
    summary = run_campaign(7, 20)
    assert summary.ok, summary.violations


@pytest.mark.slow
def test_thousand_instance_campaign_within_five_minutes():
    start = time.perf_counter()
    summary = run_campaign(7, 1000)
    elapsed = time.perf_counter() - start
    assert summary.count == 1000
    assert summary.ok, summary.violations[:5]
    assert summary.oracle_checked > 0
    assert elapsed < 300, f"campaign took {elapsed:.0f} s"
